#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "deadlisten/miner/mine.hpp"

namespace deadlisten::corpus {

// One miner JSONL line. `path` is in canonical serialization.
struct OccurrenceRecord {
  std::string path;
  std::string event;
  std::string pkg;
  std::string project;
  std::string file;
  std::uint32_t line = 0;

  friend bool operator==(const OccurrenceRecord&, const OccurrenceRecord&) = default;
};

OccurrenceRecord to_record(const miner::PairOccurrence& occurrence);

// Keys in the order path, event, pkg, project, file, line.
void write_jsonl(std::ostream& out, const OccurrenceRecord& record);
void write_jsonl(std::ostream& out, const std::vector<miner::PairOccurrence>& occurrences);

// Validates every line: JSON object with the six keys, canonical path whose
// root equals pkg. Blank lines are skipped. Throws FormatError.
std::vector<OccurrenceRecord> read_jsonl(std::istream& in, const std::string& source);

}  // namespace deadlisten::corpus
