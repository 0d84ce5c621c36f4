#include "deadlisten/eval/sweep.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "deadlisten/classifier/bcdf.hpp"
#include "deadlisten/corpus/csv.hpp"

namespace deadlisten::eval {

using classifier::Config;
using classifier::Verdict;

NoQualifyingConfig::NoQualifyingConfig(double min_precision)
    : Error(fmt::format("no configuration reaches {}% precision", min_precision)) {}

namespace {

const std::vector<double> kRarity{0.005, 0.01, 0.02, 0.03, 0.04, 0.05, 0.1, 0.25};
const std::vector<double> kConfidence{0.005, 0.01, 0.02, 0.03, 0.04, 0.05, 0.1, 1};

std::vector<double> normalized(std::vector<double> values, const char* name) {
  if (values.empty()) throw DomainError(fmt::format("grid has no values for {}", name));
  for (double v : values) {
    if (!(v > 0.0 && v <= 1.0)) throw DomainError(fmt::format("grid value for {} not in (0,1]: {}", name, v));
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

Grid Grid::standard() { return Grid{kRarity, kRarity, kConfidence, kConfidence}; }

Grid Grid::single(const Config& c) { return Grid{{c.p_a}, {c.p_e}, {c.p_ca}, {c.p_ce}}; }

std::vector<Config> Grid::configs() const {
  auto a = normalized(p_a, "p_a");
  auto e = normalized(p_e, "p_e");
  auto ca = normalized(p_ca, "p_ca");
  auto ce = normalized(p_ce, "p_ce");
  std::vector<Config> out;
  out.reserve(a.size() * e.size() * ca.size() * ce.size());
  for (double va : a)
    for (double ve : e)
      for (double vca : ca)
        for (double vce : ce) out.push_back(Config{va, ve, vca, vce});
  return out;
}

Grid read_grid(std::istream& in, const std::string& source) {
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw corpus::FormatError(source, 0, "grid is not a JSON object");
  Grid g = Grid::standard();
  auto values = [&](const char* key, std::vector<double>& dst) {
    auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_array()) throw corpus::FormatError(source, 0, fmt::format("'{}' must be an array", key));
    dst.clear();
    for (const auto& v : *it) {
      if (!v.is_number()) throw corpus::FormatError(source, 0, fmt::format("'{}' must hold numbers", key));
      dst.push_back(v.get<double>());
    }
  };
  std::vector<double> rarity = kRarity;
  std::vector<double> confidence = kConfidence;
  values("rarity", rarity);
  values("confidence", confidence);
  g = Grid{rarity, rarity, confidence, confidence};
  values("p_a", g.p_a);
  values("p_e", g.p_e);
  values("p_ca", g.p_ca);
  values("p_ce", g.p_ce);
  for (const auto& [key, v] : j.items()) {
    static const std::set<std::string> known{"rarity", "confidence", "p_a", "p_e", "p_ca", "p_ce"};
    if (!known.contains(key)) throw corpus::FormatError(source, 0, fmt::format("unknown grid key '{}'", key));
  }
  g.configs();  // validates
  return g;
}

Grid read_grid_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError(fmt::format("cannot open grid file {}", file.string()));
  return read_grid(in, file.string());
}

Evaluator::Evaluator(const corpus::CountsIndex& index, std::vector<LabeledPair> labels)
    : labels_(std::move(labels)) {
  stats_.reserve(labels_.size());
  for (const LabeledPair& l : labels_) {
    if (!index.contains(l.path, l.event)) throw LabelNotInCorpus(l);
    stats_.push_back(classifier::pair_statistics(index, l.path, l.event));
    occurrences_.push_back(stats_.back().k);
    projects_.push_back(index.project_set(l.path, l.event));
  }
}

std::vector<std::size_t> Evaluator::all_labels() const {
  std::vector<std::size_t> all(labels_.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return all;
}

std::vector<Verdict> Evaluator::verdicts(const Config& config) const {
  config.validate();
  std::vector<Verdict> out;
  out.reserve(stats_.size());
  for (const auto& s : stats_) out.push_back(classifier::classify_statistics(s, config).verdict);
  return out;
}

ScoreReport Evaluator::score(std::span<const Verdict> verdicts, std::span<const std::size_t> subset) const {
  return score_verdicts(labels_, verdicts, occurrences_, projects_, subset);
}

ScoreReport Evaluator::score(const Config& config) const {
  auto v = verdicts(config);
  auto all = all_labels();
  return score(v, all);
}

std::vector<std::vector<Verdict>> Evaluator::verdict_table(const std::vector<Config>& configs) const {
  // binomial tails per (rarity value, label): path side uses p_a, event side p_e
  struct Side {
    std::vector<double> bcdf, sf;
  };
  std::map<double, Side> path_side, event_side;
  for (const Config& c : configs) {
    c.validate();
    path_side.try_emplace(c.p_a);
    event_side.try_emplace(c.p_e);
  }
  const std::size_t n = stats_.size();
  for (auto& [p, side] : path_side) {
    side.bcdf.resize(n);
    side.sf.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      side.bcdf[i] = classifier::bcdf(stats_[i].k_cum_path, stats_[i].n_e, p);
      side.sf[i] = classifier::binomial_sf(stats_[i].k_cum_path, stats_[i].n_e, p);
    }
  }
  for (auto& [p, side] : event_side) {
    side.bcdf.resize(n);
    side.sf.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      side.bcdf[i] = classifier::bcdf(stats_[i].k_cum_event, stats_[i].n_a, p);
      side.sf[i] = classifier::binomial_sf(stats_[i].k_cum_event, stats_[i].n_a, p);
    }
  }
  std::vector<std::vector<Verdict>> table;
  table.reserve(configs.size());
  for (const Config& c : configs) {
    const Side& ps = path_side.at(c.p_a);
    const Side& es = event_side.at(c.p_e);
    std::vector<Verdict> row(n);
    for (std::size_t i = 0; i < n; ++i) {
      bool anomalous = es.bcdf[i] < c.p_ce && ps.bcdf[i] < c.p_ca;
      bool expected = es.sf[i] < c.p_ce && ps.sf[i] < c.p_ca;
      row[i] = anomalous ? Verdict::Anomalous : expected ? Verdict::Expected : Verdict::Unclassified;
    }
    table.push_back(std::move(row));
  }
  return table;
}

std::vector<ConfigResult> sweep(const Evaluator& evaluator, const Grid& grid) {
  std::vector<Config> configs = grid.configs();
  auto table = evaluator.verdict_table(configs);
  auto all = evaluator.all_labels();
  std::vector<ConfigResult> out;
  out.reserve(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) out.push_back({configs[c], evaluator.score(table[c], all)});
  return out;
}

std::vector<ConfigResult> sweep(const corpus::CountsIndex& index, const std::vector<LabeledPair>& labels,
                                const Grid& grid) {
  Evaluator evaluator(index, labels);
  return sweep(evaluator, grid);
}

std::vector<ConfigResult> pareto_front(const std::vector<ConfigResult>& results) {
  std::vector<const ConfigResult*> defined;
  for (const auto& r : results) {
    if (r.report.precision && r.report.recall) defined.push_back(&r);
  }
  std::vector<ConfigResult> front;
  for (const ConfigResult* r : defined) {
    double p = *r->report.precision;
    double q = *r->report.recall;
    bool dominated = std::any_of(defined.begin(), defined.end(), [&](const ConfigResult* o) {
      double op = *o->report.precision;
      double oq = *o->report.recall;
      return op >= p && oq >= q && (op > p || oq > q);
    });
    if (!dominated) front.push_back(*r);
  }
  std::sort(front.begin(), front.end(), [](const ConfigResult& a, const ConfigResult& b) {
    if (*a.report.precision != *b.report.precision) return *a.report.precision > *b.report.precision;
    if (*a.report.recall != *b.report.recall) return *a.report.recall > *b.report.recall;
    return a.config < b.config;
  });
  return front;
}

ConfigResult select_optimal(const std::vector<ConfigResult>& results, double min_precision) {
  const ConfigResult* best = nullptr;
  for (const auto& r : results) {
    if (!r.report.precision || !r.report.recall || *r.report.precision < min_precision) continue;
    if (!best) {
      best = &r;
      continue;
    }
    auto key = [](const ConfigResult& x) { return std::tuple(*x.report.recall, *x.report.precision); };
    if (key(r) > key(*best) || (key(r) == key(*best) && r.config < best->config)) best = &r;
  }
  if (!best) throw NoQualifyingConfig(min_precision);
  return *best;
}

}  // namespace deadlisten::eval
