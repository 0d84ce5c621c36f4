#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "deadlisten/classifier/config.hpp"
#include "deadlisten/corpus/counts_index.hpp"

namespace deadlisten::classifier {

enum class Verdict : std::uint8_t { Anomalous, Expected, Unclassified };

std::string_view to_string(Verdict verdict);

// The counts the tests read for one pair ⟨a, e⟩.
struct PairStatistics {
  std::uint64_t k = 0;            // k(a,e)
  std::uint64_t n_a = 0;          // occurrences of a
  std::uint64_t n_e = 0;          // occurrences of e
  std::uint64_t k_cum_path = 0;   // k_e(⌈a⌉)
  std::uint64_t k_cum_event = 0;  // k_a(⌈e⌉)

  friend bool operator==(const PairStatistics&, const PairStatistics&) = default;
};

struct Classification {
  Verdict verdict = Verdict::Unclassified;
  PairStatistics stats;
  double bcdf_path = 1;   // bcdf(k_cum_path, n_e, p_a)
  double bcdf_event = 1;  // bcdf(k_cum_event, n_a, p_e)
  double sf_path = 1;     // sf(k_cum_path, n_e, p_a)
  double sf_event = 1;    // sf(k_cum_event, n_a, p_e)
};

// Throws MissingPair when the pair is absent.
PairStatistics pair_statistics(const corpus::CountsIndex& index, std::string_view path, std::string_view event);

// The two-sided decision on explicit counts: anomalous when both
// bcdf(k_event_side, n_a, p_e) < p_ce and bcdf(k_path_side, n_e, p_a) < p_ca;
// expected when the same holds for the survival function; anomalous wins.
Classification decide(std::uint64_t k_path_side, std::uint64_t n_e, std::uint64_t k_event_side,
                      std::uint64_t n_a, const Config& config);

// Refined test on the cumulative counts.
Classification classify_statistics(const PairStatistics& stats, const Config& config);
Classification classify_pair(const corpus::CountsIndex& index, std::string_view path, std::string_view event,
                             const Config& config);

// Sorted counts with prefix sums; answers Σ{c | 0 < c <= k} in O(log n).
class CumulativeRankTable {
 public:
  CumulativeRankTable() = default;
  explicit CumulativeRankTable(std::vector<std::uint64_t> counts);

  std::uint64_t cumulative(std::uint64_t k) const;
  std::uint64_t total() const { return prefix_.empty() ? 0 : prefix_.back(); }

 private:
  std::vector<std::uint64_t> sorted_;
  std::vector<std::uint64_t> prefix_;
};

struct ModelEntry {
  std::string path;
  std::string event;
  Classification classification;
};

struct PackageModel {
  std::vector<ModelEntry> anomalous;
  std::vector<ModelEntry> expected;
  std::vector<ModelEntry> unclassified;
};

struct Model {
  Config config;
  std::map<std::string, PackageModel> packages;

  std::size_t pair_count() const;
  std::size_t anomalous_count() const;
  // Entry of a pair, or nullptr when the pair is not in the model.
  const ModelEntry* find(std::string_view path, std::string_view event, Verdict* verdict = nullptr) const;
};

// Statistics for every pair of the index, computed with rank tables.
std::vector<std::pair<corpus::PairKey, PairStatistics>> all_pair_statistics(const corpus::CountsIndex& index);

// Classifies every pair. Entries within each verdict are sorted by
// (path, event).
Model classify_corpus(const corpus::CountsIndex& index, const Config& config);

}  // namespace deadlisten::classifier
