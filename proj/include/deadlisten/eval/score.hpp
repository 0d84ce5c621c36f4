#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <span>
#include <vector>

#include "deadlisten/classifier/classify.hpp"
#include "deadlisten/corpus/counts_index.hpp"
#include "deadlisten/eval/labels.hpp"

namespace deadlisten::eval {

class LabelNotInCorpus : public Error {
 public:
  explicit LabelNotInCorpus(const LabeledPair& pair);
};

struct ScoreReport {
  std::uint64_t true_positives = 0;         // anomalous and incorrect
  std::uint64_t false_positives = 0;        // anomalous and correct or imprecise
  std::uint64_t unclassified_incorrect = 0; // incorrect and left unclassified (UP)
  std::uint64_t false_negatives = 0;        // incorrect and not anomalous
  std::uint64_t incorrect_labels = 0;
  std::uint64_t labels = 0;
  std::optional<double> precision;  // percent; absent when nothing is anomalous
  std::optional<double> recall;     // percent; absent without incorrect labels
  std::uint64_t occurrences_of_tps = 0;
  std::optional<std::uint64_t> projects_of_tps;  // distinct projects; needs project information

  friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

// Scores the anomalous set of a model. Every label must name a pair of the
// model (LabelNotInCorpus otherwise). Project counts come from `index` when
// it carries them.
ScoreReport score(const classifier::Model& model, const std::vector<LabeledPair>& labels,
                  const corpus::CountsIndex* index = nullptr);

// Low-level form over the labels listed in `subset`: verdicts[i] is the
// verdict for labels[i]; `occurrences` and `projects` hold per-label k(a,e)
// and project sets (nullptr when unknown).
ScoreReport score_verdicts(const std::vector<LabeledPair>& labels, std::span<const classifier::Verdict> verdicts,
                           std::span<const std::uint64_t> occurrences,
                           std::span<const std::set<std::string>* const> projects,
                           std::span<const std::size_t> subset);

}  // namespace deadlisten::eval
