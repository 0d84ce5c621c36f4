#include "deadlisten/corpus/occurrences.hpp"

#include <json.hpp>

#include "deadlisten/corpus/csv.hpp"
#include "deadlisten/corpus/path_codec.hpp"

namespace deadlisten::corpus {

using nlohmann::ordered_json;

OccurrenceRecord to_record(const miner::PairOccurrence& occurrence) {
  return OccurrenceRecord{serialize_path(occurrence.path), occurrence.event, occurrence.root_package,
                          occurrence.project_id, occurrence.location.file, occurrence.location.line};
}

void write_jsonl(std::ostream& out, const OccurrenceRecord& r) {
  ordered_json j;
  j["path"] = r.path;
  j["event"] = r.event;
  j["pkg"] = r.pkg;
  j["project"] = r.project;
  j["file"] = r.file;
  j["line"] = r.line;
  out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

void write_jsonl(std::ostream& out, const std::vector<miner::PairOccurrence>& occurrences) {
  for (const auto& o : occurrences) write_jsonl(out, to_record(o));
}

std::vector<OccurrenceRecord> read_jsonl(std::istream& in, const std::string& source) {
  std::vector<OccurrenceRecord> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw FormatError(source, line, "not a JSON object");
    OccurrenceRecord r;
    auto text_field = [&](const char* key, std::string& dst) {
      auto it = j.find(key);
      if (it == j.end() || !it->is_string()) {
        throw FormatError(source, line, std::string("missing string field '") + key + "'");
      }
      dst = it->get<std::string>();
    };
    text_field("path", r.path);
    text_field("event", r.event);
    text_field("pkg", r.pkg);
    text_field("project", r.project);
    text_field("file", r.file);
    auto it = j.find("line");
    if (it == j.end() || !it->is_number_unsigned() || it->get<std::uint64_t>() > UINT32_MAX) {
      throw FormatError(source, line, "missing or invalid field 'line'");
    }
    r.line = it->get<std::uint32_t>();
    try {
      miner::AccessPath p = parse_path(r.path);
      if (p.root_package != r.pkg) throw FormatError(source, line, "pkg does not match path root");
    } catch (const PathSyntaxError& e) {
      throw FormatError(source, line, e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace deadlisten::corpus
