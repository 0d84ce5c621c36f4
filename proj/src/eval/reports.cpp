#include "deadlisten/eval/reports.hpp"

#include <fmt/format.h>

#include "deadlisten/corpus/csv.hpp"
#include "deadlisten/eval/rng.hpp"

namespace deadlisten::eval {

namespace {

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt::format("{}", values[i]);
  }
  return out;
}

void write_header(std::ostream& out, const ReportHeader& h) {
  out << "# report: " << h.kind << '\n';
  if (h.seed) {
    out << "# seed: " << *h.seed << '\n';
    out << "# generator: " << SeededShuffler::kName << '\n';
  }
  if (h.grid) {
    out << "# grid p_a: " << join(h.grid->p_a) << '\n';
    out << "# grid p_e: " << join(h.grid->p_e) << '\n';
    out << "# grid p_ca: " << join(h.grid->p_ca) << '\n';
    out << "# grid p_ce: " << join(h.grid->p_ce) << '\n';
  }
  for (const auto& [k, v] : h.extra) out << "# " << k << ": " << v << '\n';
}

std::vector<std::string> config_fields(const classifier::Config& c) {
  return {fmt::format("{}", c.p_a), fmt::format("{}", c.p_e), fmt::format("{}", c.p_ca), fmt::format("{}", c.p_ce)};
}

std::string opt_count(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); }

}  // namespace

std::string format_percent(const std::optional<double>& value) {
  return value ? fmt::format("{:.3f}", *value) : std::string();
}

void write_results_csv(std::ostream& out, const ReportHeader& header, const std::vector<ConfigResult>& results) {
  write_header(out, header);
  corpus::csv::write_row(out, {"p_a", "p_e", "p_ca", "p_ce", "precision", "recall", "tp", "fp", "up", "fn",
                               "incorrect", "occ_tp", "projects"});
  for (const auto& r : results) {
    auto row = config_fields(r.config);
    const ScoreReport& s = r.report;
    row.push_back(format_percent(s.precision));
    row.push_back(format_percent(s.recall));
    for (std::uint64_t v : {s.true_positives, s.false_positives, s.unclassified_incorrect, s.false_negatives,
                            s.incorrect_labels, s.occurrences_of_tps}) {
      row.push_back(std::to_string(v));
    }
    row.push_back(opt_count(s.projects_of_tps));
    corpus::csv::write_row(out, row);
  }
}

void write_cross_validation_csv(std::ostream& out, const ReportHeader& header, const CrossValidationReport& report) {
  ReportHeader h = header;
  h.extra.emplace_back("folds", std::to_string(report.folds));
  h.extra.emplace_back("min precision", fmt::format("{}", report.min_precision));
  write_header(out, h);
  corpus::csv::write_row(out, {"round", "p_a", "p_e", "p_ca", "p_ce", "train_labels", "train_precision",
                               "train_recall", "train_tp", "validation_labels", "validation_precision",
                               "validation_recall", "validation_tp"});
  for (const FoldResult& r : report.rounds) {
    std::vector<std::string> row{std::to_string(r.fold)};
    if (r.training) {
      for (auto& f : config_fields(r.training->config)) row.push_back(f);
    } else {
      row.insert(row.end(), 4, std::string());
    }
    row.push_back(std::to_string(r.training_labels));
    row.push_back(r.training ? format_percent(r.training->report.precision) : "");
    row.push_back(r.training ? format_percent(r.training->report.recall) : "");
    row.push_back(r.training ? std::to_string(r.training->report.true_positives) : "");
    row.push_back(std::to_string(r.validation_labels));
    row.push_back(r.validation ? format_percent(r.validation->precision) : "");
    row.push_back(r.validation ? format_percent(r.validation->recall) : "");
    row.push_back(r.validation ? std::to_string(r.validation->true_positives) : "");
    corpus::csv::write_row(out, row);
  }
}

void write_subset_csv(std::ostream& out, const ReportHeader& header, const SubsetReport& report) {
  ReportHeader h = header;
  h.extra.emplace_back("iterations", std::to_string(report.iterations));
  h.extra.emplace_back("min precision", fmt::format("{}", report.min_precision));
  write_header(out, h);
  corpus::csv::write_row(out, {"percentage", "iteration", "p_a", "p_e", "p_ca", "p_ce", "sampled_occurrences",
                               "subset_labels", "subset_precision", "subset_recall", "whole_precision",
                               "whole_recall"});
  for (const SubsetRow& r : report.rows) {
    std::vector<std::string> row{fmt::format("{}", r.percentage), std::to_string(r.iteration)};
    if (r.subset) {
      for (auto& f : config_fields(r.subset->config)) row.push_back(f);
    } else {
      row.insert(row.end(), 4, std::string());
    }
    row.push_back(std::to_string(r.sampled_occurrences));
    row.push_back(std::to_string(r.subset_labels));
    row.push_back(r.subset ? format_percent(r.subset->report.precision) : "");
    row.push_back(r.subset ? format_percent(r.subset->report.recall) : "");
    row.push_back(r.whole_set ? format_percent(r.whole_set->precision) : "");
    row.push_back(r.whole_set ? format_percent(r.whole_set->recall) : "");
    corpus::csv::write_row(out, row);
  }
  for (const SubsetSummary& s : report.summaries) {
    corpus::csv::write_row(out, {fmt::format("{}", s.percentage), "harmean", "", "", "", "", "", "",
                                 format_percent(s.subset_precision), format_percent(s.subset_recall),
                                 format_percent(s.whole_precision), format_percent(s.whole_recall)});
  }
}

}  // namespace deadlisten::eval
