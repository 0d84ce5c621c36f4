#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "deadlisten/eval/experiments.hpp"
#include "deadlisten/eval/sweep.hpp"

namespace deadlisten::eval {

// Lines written as `# key: value` before the CSV header.
struct ReportHeader {
  std::string kind;
  std::optional<std::uint64_t> seed;
  std::optional<Grid> grid;
  std::vector<std::pair<std::string, std::string>> extra;
};

// Columns p_a,p_e,p_ca,p_ce,precision,recall,tp,fp,up,fn,incorrect,occ_tp,projects.
// Percentages are printed with three decimals; undefined values are empty.
void write_results_csv(std::ostream& out, const ReportHeader& header, const std::vector<ConfigResult>& results);
void write_cross_validation_csv(std::ostream& out, const ReportHeader& header, const CrossValidationReport& report);
void write_subset_csv(std::ostream& out, const ReportHeader& header, const SubsetReport& report);

std::string format_percent(const std::optional<double>& value);

}  // namespace deadlisten::eval
