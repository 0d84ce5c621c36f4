#include "deadlisten/eval/experiments.hpp"

#include <cmath>

#include <fmt/format.h>

#include "deadlisten/eval/rng.hpp"

namespace deadlisten::eval {

EmptySubset::EmptySubset(double percentage, std::size_t iteration)
    : Error(fmt::format("{}% sample (iteration {}) contains no labeled pair", percentage, iteration)) {}

std::optional<double> harmonic_mean(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double inv = 0;
  for (double v : values) {
    if (v == 0.0) return 0.0;
    inv += 1.0 / v;
  }
  return static_cast<double>(values.size()) / inv;
}

std::vector<std::vector<std::size_t>> fold_assignment(std::size_t labels, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw DomainError("cross-validation needs at least 2 folds");
  if (folds > labels) throw DomainError(fmt::format("{} folds exceed {} labels", folds, labels));
  std::vector<std::size_t> order(labels);
  for (std::size_t i = 0; i < labels; ++i) order[i] = i;
  SeededShuffler rng(seed);
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> out(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    std::size_t begin = f * labels / folds;
    std::size_t end = (f + 1) * labels / folds;
    out[f].assign(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(out[f].begin(), out[f].end());
  }
  return out;
}

namespace {

std::optional<ConfigResult> optimum(const Evaluator& ev, const std::vector<classifier::Config>& configs,
                                    const std::vector<std::vector<classifier::Verdict>>& table,
                                    const std::vector<std::size_t>& subset, double min_precision) {
  std::vector<ConfigResult> results;
  results.reserve(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) results.push_back({configs[c], ev.score(table[c], subset)});
  try {
    return select_optimal(results, min_precision);
  } catch (const NoQualifyingConfig&) {
    return std::nullopt;
  }
}

}  // namespace

CrossValidationReport cross_validate(const corpus::CountsIndex& index, const std::vector<LabeledPair>& labels,
                                     std::size_t folds, std::uint64_t seed, const Grid& grid, double min_precision) {
  auto assignment = fold_assignment(labels.size(), folds, seed);
  Evaluator ev(index, labels);
  std::vector<classifier::Config> configs = grid.configs();
  auto table = ev.verdict_table(configs);

  CrossValidationReport report;
  report.seed = seed;
  report.folds = folds;
  report.min_precision = min_precision;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> training;
    for (std::size_t g = 0; g < folds; ++g) {
      if (g != f) training.insert(training.end(), assignment[g].begin(), assignment[g].end());
    }
    std::sort(training.begin(), training.end());
    FoldResult round;
    round.fold = f + 1;
    round.training_labels = training.size();
    round.validation_labels = assignment[f].size();
    round.training = optimum(ev, configs, table, training, min_precision);
    if (round.training) {
      auto it = std::lower_bound(configs.begin(), configs.end(), round.training->config);
      round.validation = ev.score(table[static_cast<std::size_t>(it - configs.begin())], assignment[f]);
    }
    report.rounds.push_back(std::move(round));
  }
  return report;
}

SubsetReport subset_experiment(const corpus::CountsIndex& index, const std::vector<LabeledPair>& labels,
                               const std::vector<double>& percentages, std::size_t iterations, std::uint64_t seed,
                               const Grid& grid, double min_precision) {
  if (iterations == 0) throw DomainError("subset experiment needs at least one iteration");
  for (double p : percentages) {
    if (!(p > 0.0 && p <= 100.0)) throw DomainError(fmt::format("percentage out of (0,100]: {}", p));
  }
  // one unit per occurrence, in index order; a unit names its pair
  std::vector<corpus::PairKey> pairs;
  std::vector<std::uint32_t> units;
  index.for_each_pair([&](const std::string&, const std::string& path, const std::string& event, std::uint64_t k) {
    units.insert(units.end(), k, static_cast<std::uint32_t>(pairs.size()));
    pairs.push_back(corpus::PairKey{path, event});
  });

  Evaluator full(index, labels);
  std::vector<classifier::Config> configs = grid.configs();
  auto full_table = full.verdict_table(configs);
  auto all = full.all_labels();

  SubsetReport report;
  report.seed = seed;
  report.iterations = iterations;
  report.min_precision = min_precision;
  SeededShuffler rng(seed);
  std::vector<std::size_t> order(units.size());

  for (double pct : percentages) {
    std::vector<double> sp, sr, wp, wr;
    auto take = static_cast<std::size_t>(std::llround(static_cast<double>(units.size()) * pct / 100.0));
    for (std::size_t it = 1; it <= iterations; ++it) {
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      rng.shuffle(order);
      std::vector<std::uint64_t> counts(pairs.size(), 0);
      for (std::size_t i = 0; i < take; ++i) ++counts[units[order[i]]];
      corpus::CountsIndex sample;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (counts[p] > 0) sample.add(pairs[p].path, pairs[p].event, counts[p]);
      }

      std::vector<LabeledPair> present;
      for (const auto& l : labels) {
        if (sample.contains(l.path, l.event)) present.push_back(l);
      }
      if (present.empty()) throw EmptySubset(pct, it);

      SubsetRow row;
      row.percentage = pct;
      row.iteration = it;
      row.sampled_occurrences = take;
      row.subset_labels = present.size();
      Evaluator sub(sample, present);
      auto table = sub.verdict_table(configs);
      row.subset = optimum(sub, configs, table, sub.all_labels(), min_precision);
      if (row.subset) {
        auto pos = std::lower_bound(configs.begin(), configs.end(), row.subset->config);
        row.whole_set = full.score(full_table[static_cast<std::size_t>(pos - configs.begin())], all);
        if (row.subset->report.precision) sp.push_back(*row.subset->report.precision);
        if (row.subset->report.recall) sr.push_back(*row.subset->report.recall);
        if (row.whole_set->precision) wp.push_back(*row.whole_set->precision);
        if (row.whole_set->recall) wr.push_back(*row.whole_set->recall);
      }
      report.rows.push_back(std::move(row));
    }
    report.summaries.push_back(SubsetSummary{pct, harmonic_mean(sp), harmonic_mean(sr), harmonic_mean(wp),
                                             harmonic_mean(wr)});
  }
  return report;
}

}  // namespace deadlisten::eval
