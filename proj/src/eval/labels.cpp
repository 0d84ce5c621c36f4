#include "deadlisten/eval/labels.hpp"

#include <fstream>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "deadlisten/corpus/csv.hpp"
#include "deadlisten/corpus/path_codec.hpp"

namespace deadlisten::eval {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Correct:
      return "correct";
    case Label::Incorrect:
      return "incorrect";
    case Label::Imprecise:
      return "imprecise";
  }
  return "correct";
}

LabelSyntaxError::LabelSyntaxError(const std::string& source, std::size_t row, const std::string& reason)
    : Error(fmt::format("{}:{}: {}", source, row, reason)), row_(row) {}

DuplicateLabel::DuplicateLabel(const std::string& source, std::size_t row, const LabeledPair& pair)
    : Error(fmt::format("{}:{}: duplicate label for <{}, {}>", source, row, pair.path, pair.event)), row_(row) {}

std::vector<LabeledPair> load_labels(std::istream& in, const std::string& source) {
  corpus::csv::Reader reader(in, source);
  std::vector<std::string> row;
  std::vector<LabeledPair> out;
  try {
    if (!reader.next(row)) return out;
    if (row != std::vector<std::string>{"pkg", "path", "event", "label"}) {
      throw LabelSyntaxError(source, reader.line(), "expected header pkg,path,event,label");
    }
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    while (reader.next(row)) {
      std::size_t line = reader.line();
      if (row.size() != 4) throw LabelSyntaxError(source, line, "expected 4 fields");
      LabeledPair p{row[0], row[1], row[2], Label::Correct};
      if (row[3] == "correct") {
        p.label = Label::Correct;
      } else if (row[3] == "incorrect") {
        p.label = Label::Incorrect;
      } else if (row[3] == "imprecise") {
        p.label = Label::Imprecise;
      } else {
        throw LabelSyntaxError(source, line, fmt::format("unknown label '{}'", row[3]));
      }
      try {
        corpus::parse_path(p.path);
        if (corpus::root_package_of(p.path) != p.pkg) {
          throw LabelSyntaxError(source, line, "pkg does not match path root");
        }
      } catch (const corpus::PathSyntaxError& e) {
        throw LabelSyntaxError(source, line, e.what());
      }
      if (!seen.emplace(p.pkg, p.path, p.event).second) throw DuplicateLabel(source, line, p);
      out.push_back(std::move(p));
    }
  } catch (const corpus::FormatError& e) {
    throw LabelSyntaxError(source, e.line(), e.what());
  }
  return out;
}

std::vector<LabeledPair> load_labels_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError(fmt::format("cannot open labels file {}", file.string()));
  return load_labels(in, file.string());
}

void write_labels(std::ostream& out, const std::vector<LabeledPair>& labels) {
  corpus::csv::write_row(out, {"pkg", "path", "event", "label"});
  for (const auto& l : labels) corpus::csv::write_row(out, {l.pkg, l.path, l.event, to_string(l.label)});
}

}  // namespace deadlisten::eval
