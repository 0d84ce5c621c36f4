#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "deadlisten/classifier/classify.hpp"
#include "deadlisten/classifier/config.hpp"
#include "deadlisten/corpus/counts_index.hpp"
#include "deadlisten/eval/labels.hpp"
#include "deadlisten/eval/score.hpp"

namespace deadlisten::eval {

class NoQualifyingConfig : public Error {
 public:
  explicit NoQualifyingConfig(double min_precision);
};

// Candidate values per threshold; configs are their Cartesian product.
struct Grid {
  std::vector<double> p_a;
  std::vector<double> p_e;
  std::vector<double> p_ca;
  std::vector<double> p_ce;

  // Rarity {0.005,...,0.25} for p_a, p_e; confidence {0.005,...,0.1,1} for
  // p_ca, p_ce: 4096 configs.
  static Grid standard();
  static Grid single(const classifier::Config& config);

  std::size_t size() const { return p_a.size() * p_e.size() * p_ca.size() * p_ce.size(); }
  // Sorted, duplicate-free, validated (DomainError). Configs in
  // lexicographic (p_a, p_e, p_ca, p_ce) order.
  std::vector<classifier::Config> configs() const;
};

// JSON object with "rarity" and "confidence" arrays, each optionally
// overridden per threshold by "p_a", "p_e", "p_ca", "p_ce". Missing keys
// keep the standard values. Throws corpus::FormatError / DomainError.
Grid read_grid(std::istream& in, const std::string& source);
Grid read_grid_file(const std::filesystem::path& file);

struct ConfigResult {
  classifier::Config config;
  ScoreReport report;

  friend bool operator==(const ConfigResult&, const ConfigResult&) = default;
};

// Classifies the labeled pairs of one index under many configs. In
// verdict_table, binomial tails are computed once per label and distinct
// rarity value.
class Evaluator {
 public:
  // Throws LabelNotInCorpus for a label whose pair is not in the index.
  Evaluator(const corpus::CountsIndex& index, std::vector<LabeledPair> labels);

  const std::vector<LabeledPair>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  const classifier::PairStatistics& statistics(std::size_t i) const { return stats_[i]; }

  std::vector<classifier::Verdict> verdicts(const classifier::Config& config) const;
  ScoreReport score(const classifier::Config& config) const;
  ScoreReport score(std::span<const classifier::Verdict> verdicts, std::span<const std::size_t> subset) const;

  // Verdict table for every grid config (same order as grid.configs()).
  std::vector<std::vector<classifier::Verdict>> verdict_table(const std::vector<classifier::Config>& configs) const;

  std::vector<std::size_t> all_labels() const;

 private:
  std::vector<LabeledPair> labels_;
  std::vector<classifier::PairStatistics> stats_;
  std::vector<const std::set<std::string>*> projects_;
  std::vector<std::uint64_t> occurrences_;
};

// One result per config, sorted by config.
std::vector<ConfigResult> sweep(const corpus::CountsIndex& index, const std::vector<LabeledPair>& labels,
                                const Grid& grid);
std::vector<ConfigResult> sweep(const Evaluator& evaluator, const Grid& grid);

// Results not dominated on (precision, recall), sorted by precision then
// recall descending, then config. Results with undefined precision or
// recall are excluded.
std::vector<ConfigResult> pareto_front(const std::vector<ConfigResult>& results);

// Maximum recall among results with precision >= min_precision; ties go to
// higher precision, then the smaller config. Throws NoQualifyingConfig.
ConfigResult select_optimal(const std::vector<ConfigResult>& results, double min_precision = 90.0);

}  // namespace deadlisten::eval
