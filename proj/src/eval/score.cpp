#include "deadlisten/eval/score.hpp"

#include <numeric>

#include <fmt/format.h>

namespace deadlisten::eval {

using classifier::Verdict;

LabelNotInCorpus::LabelNotInCorpus(const LabeledPair& pair)
    : Error(fmt::format("labeled pair not in corpus: <{}, {}>", pair.path, pair.event)) {}

ScoreReport score_verdicts(const std::vector<LabeledPair>& labels, std::span<const Verdict> verdicts,
                           std::span<const std::uint64_t> occurrences,
                           std::span<const std::set<std::string>* const> projects,
                           std::span<const std::size_t> subset) {
  ScoreReport r;
  bool projects_known = true;
  std::set<std::string> tp_projects;
  for (std::size_t i : subset) {
    const LabeledPair& l = labels[i];
    bool anomalous = verdicts[i] == Verdict::Anomalous;
    ++r.labels;
    if (l.label == Label::Incorrect) {
      ++r.incorrect_labels;
      if (anomalous) {
        ++r.true_positives;
        r.occurrences_of_tps += occurrences[i];
        if (projects[i]) {
          tp_projects.insert(projects[i]->begin(), projects[i]->end());
        } else {
          projects_known = false;
        }
      } else {
        ++r.false_negatives;
        if (verdicts[i] == Verdict::Unclassified) ++r.unclassified_incorrect;
      }
    } else if (anomalous) {
      ++r.false_positives;
    }
  }
  if (r.true_positives + r.false_positives > 0) {
    r.precision = 100.0 * static_cast<double>(r.true_positives) /
                  static_cast<double>(r.true_positives + r.false_positives);
  }
  if (r.incorrect_labels > 0) {
    r.recall = 100.0 * static_cast<double>(r.true_positives) / static_cast<double>(r.incorrect_labels);
  }
  if (projects_known) r.projects_of_tps = tp_projects.size();
  return r;
}

ScoreReport score(const classifier::Model& model, const std::vector<LabeledPair>& labels,
                  const corpus::CountsIndex* index) {
  std::vector<Verdict> verdicts(labels.size());
  std::vector<std::uint64_t> occurrences(labels.size());
  std::vector<const std::set<std::string>*> projects(labels.size(), nullptr);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const classifier::ModelEntry* e = model.find(labels[i].path, labels[i].event, &verdicts[i]);
    if (!e) throw LabelNotInCorpus(labels[i]);
    occurrences[i] = e->classification.stats.k;
    if (index) projects[i] = index->project_set(labels[i].path, labels[i].event);
  }
  std::vector<std::size_t> all(labels.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return score_verdicts(labels, verdicts, occurrences, projects, all);
}

}  // namespace deadlisten::eval
