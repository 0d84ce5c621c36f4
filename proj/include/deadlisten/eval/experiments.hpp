#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "deadlisten/corpus/counts_index.hpp"
#include "deadlisten/eval/sweep.hpp"

namespace deadlisten::eval {

class EmptySubset : public Error {
 public:
  EmptySubset(double percentage, std::size_t iteration);
};

struct FoldResult {
  std::size_t fold = 0;
  std::size_t training_labels = 0;
  std::size_t validation_labels = 0;
  std::optional<ConfigResult> training;  // absent when no config reaches min precision
  std::optional<ScoreReport> validation;
};

struct CrossValidationReport {
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  double min_precision = 90.0;
  std::vector<FoldResult> rounds;
};

// Shuffles the labels with the seeded generator and splits them into
// `folds` contiguous chunks. Each round selects the optimal config on the
// other folds and scores it on the held-out one. Classification always uses
// the full index. Requires 2 <= folds <= number of labels (DomainError).
CrossValidationReport cross_validate(const corpus::CountsIndex& index, const std::vector<LabeledPair>& labels,
                                     std::size_t folds, std::uint64_t seed, const Grid& grid = Grid::standard(),
                                     double min_precision = 90.0);

// Label indices of each fold, as used by cross_validate.
std::vector<std::vector<std::size_t>> fold_assignment(std::size_t labels, std::size_t folds, std::uint64_t seed);

struct SubsetRow {
  double percentage = 0;
  std::size_t iteration = 0;  // 1-based
  std::uint64_t sampled_occurrences = 0;
  std::size_t subset_labels = 0;
  std::optional<ConfigResult> subset;     // optimum on the subset
  std::optional<ScoreReport> whole_set;   // that config on the full index
};

struct SubsetSummary {
  double percentage = 0;
  // harmonic means over the iterations with defined values
  std::optional<double> subset_precision, subset_recall, whole_precision, whole_recall;
};

struct SubsetReport {
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  double min_precision = 90.0;
  std::vector<SubsetRow> rows;
  std::vector<SubsetSummary> summaries;
};

inline const std::vector<double> kStandardPercentages{2, 5, 10, 25, 50};

// For each percentage and iteration, samples that share of the occurrence
// records without replacement, rebuilds the index, selects the optimal
// config against the labels present in the sample and scores it on the
// full index. Throws EmptySubset when a sample holds no labeled pair and
// DomainError for percentages outside (0, 100] or zero iterations.
SubsetReport subset_experiment(const corpus::CountsIndex& index, const std::vector<LabeledPair>& labels,
                               const std::vector<double>& percentages, std::size_t iterations, std::uint64_t seed,
                               const Grid& grid = Grid::standard(), double min_precision = 90.0);

// n / Σ 1/x over the values; 0 if any value is 0; nullopt when empty.
std::optional<double> harmonic_mean(const std::vector<double>& values);

}  // namespace deadlisten::eval
