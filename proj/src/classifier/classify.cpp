#include "deadlisten/classifier/classify.hpp"

#include <algorithm>
#include <cassert>

#include "deadlisten/classifier/bcdf.hpp"
#include "deadlisten/corpus/path_codec.hpp"

namespace deadlisten::classifier {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Anomalous:
      return "anomalous";
    case Verdict::Expected:
      return "expected";
    case Verdict::Unclassified:
      return "unclassified";
  }
  return "unclassified";
}

PairStatistics pair_statistics(const corpus::CountsIndex& index, std::string_view path, std::string_view event) {
  PairStatistics s;
  s.k_cum_path = index.cumulative_count_for_path(path, event);  // throws MissingPair
  s.k_cum_event = index.cumulative_count_for_event(path, event);
  s.k = index.count(path, event);
  s.n_a = index.path_total(path);
  s.n_e = index.event_total(corpus::EventKey{corpus::root_package_of(path), std::string(event)});
  return s;
}

Classification decide(std::uint64_t k_path_side, std::uint64_t n_e, std::uint64_t k_event_side,
                      std::uint64_t n_a, const Config& config) {
  Classification c;
  c.bcdf_path = bcdf(k_path_side, n_e, config.p_a);
  c.bcdf_event = bcdf(k_event_side, n_a, config.p_e);
  c.sf_path = binomial_sf(k_path_side, n_e, config.p_a);
  c.sf_event = binomial_sf(k_event_side, n_a, config.p_e);
  bool anomalous = c.bcdf_event < config.p_ce && c.bcdf_path < config.p_ca;
  bool expected = c.sf_event < config.p_ce && c.sf_path < config.p_ca;
  // bcdf(k) + sf(k) >= 1, so with thresholds below 1/2 at most one test fires
  assert(!(anomalous && expected) || config.p_ca >= 0.5 || config.p_ce >= 0.5);
  c.verdict = anomalous ? Verdict::Anomalous : expected ? Verdict::Expected : Verdict::Unclassified;
  return c;
}

Classification classify_statistics(const PairStatistics& stats, const Config& config) {
  Classification c = decide(stats.k_cum_path, stats.n_e, stats.k_cum_event, stats.n_a, config);
  c.stats = stats;
  return c;
}

Classification classify_pair(const corpus::CountsIndex& index, std::string_view path, std::string_view event,
                             const Config& config) {
  config.validate();
  return classify_statistics(pair_statistics(index, path, event), config);
}

CumulativeRankTable::CumulativeRankTable(std::vector<std::uint64_t> counts) : sorted_(std::move(counts)) {
  std::erase(sorted_, 0u);
  std::sort(sorted_.begin(), sorted_.end());
  prefix_.reserve(sorted_.size());
  std::uint64_t sum = 0;
  for (std::uint64_t c : sorted_) prefix_.push_back(sum += c);
}

std::uint64_t CumulativeRankTable::cumulative(std::uint64_t k) const {
  auto end = std::upper_bound(sorted_.begin(), sorted_.end(), k);
  if (end == sorted_.begin()) return 0;
  return prefix_[static_cast<std::size_t>(end - sorted_.begin()) - 1];
}

std::size_t Model::pair_count() const {
  std::size_t n = 0;
  for (const auto& [pkg, pm] : packages) n += pm.anomalous.size() + pm.expected.size() + pm.unclassified.size();
  return n;
}

std::size_t Model::anomalous_count() const {
  std::size_t n = 0;
  for (const auto& [pkg, pm] : packages) n += pm.anomalous.size();
  return n;
}

const ModelEntry* Model::find(std::string_view path, std::string_view event, Verdict* verdict) const {
  std::string pkg;
  try {
    pkg = corpus::root_package_of(path);
  } catch (const corpus::PathSyntaxError&) {
    return nullptr;
  }
  auto it = packages.find(pkg);
  if (it == packages.end()) return nullptr;
  auto search = [&](const std::vector<ModelEntry>& entries) -> const ModelEntry* {
    auto pos = std::lower_bound(entries.begin(), entries.end(), std::pair{path, event},
                                [](const ModelEntry& e, const std::pair<std::string_view, std::string_view>& key) {
                                  return std::pair<std::string_view, std::string_view>{e.path, e.event} < key;
                                });
    if (pos != entries.end() && pos->path == path && pos->event == event) return &*pos;
    return nullptr;
  };
  const PackageModel& pm = it->second;
  if (const ModelEntry* e = search(pm.anomalous)) {
    if (verdict) *verdict = Verdict::Anomalous;
    return e;
  }
  if (const ModelEntry* e = search(pm.expected)) {
    if (verdict) *verdict = Verdict::Expected;
    return e;
  }
  if (const ModelEntry* e = search(pm.unclassified)) {
    if (verdict) *verdict = Verdict::Unclassified;
    return e;
  }
  return nullptr;
}

std::vector<std::pair<corpus::PairKey, PairStatistics>> all_pair_statistics(const corpus::CountsIndex& index) {
  std::vector<std::pair<corpus::PairKey, PairStatistics>> out;
  for (const auto& [pkg, pc] : index.packages()) {
    corpus::StringMap<CumulativeRankTable> event_tables;
    for (const auto& [event, paths] : pc.by_event) {
      std::vector<std::uint64_t> counts;
      counts.reserve(paths.size());
      for (const auto& [path, k] : paths) counts.push_back(k);
      event_tables.emplace(event, CumulativeRankTable(std::move(counts)));
    }
    for (const auto& [path, events] : pc.by_path) {
      std::vector<std::uint64_t> counts;
      counts.reserve(events.size());
      for (const auto& [event, k] : events) counts.push_back(k);
      CumulativeRankTable path_table(std::move(counts));
      std::uint64_t n_a = pc.path_totals.at(path);
      for (const auto& [event, k] : events) {
        PairStatistics s;
        s.k = k;
        s.n_a = n_a;
        s.n_e = pc.event_totals.at(event);
        s.k_cum_path = event_tables.at(event).cumulative(k);
        s.k_cum_event = path_table.cumulative(k);
        out.emplace_back(corpus::PairKey{path, event}, s);
      }
    }
  }
  return out;
}

Model classify_corpus(const corpus::CountsIndex& index, const Config& config) {
  config.validate();
  Model model;
  model.config = config;
  for (auto& [key, stats] : all_pair_statistics(index)) {
    Classification c = classify_statistics(stats, config);
    PackageModel& pm = model.packages[corpus::root_package_of(key.path)];
    std::vector<ModelEntry>& bucket = c.verdict == Verdict::Anomalous  ? pm.anomalous
                                      : c.verdict == Verdict::Expected ? pm.expected
                                                                       : pm.unclassified;
    bucket.push_back(ModelEntry{std::move(key.path), std::move(key.event), c});
  }
  // pairs arrive in (path, event) order within each package already
  return model;
}

}  // namespace deadlisten::classifier
