#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "deadlisten/error.hpp"

namespace deadlisten::eval {

enum class Label : std::uint8_t { Correct, Incorrect, Imprecise };

std::string_view to_string(Label label);

struct LabeledPair {
  std::string pkg;
  std::string path;
  std::string event;
  Label label = Label::Correct;

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

class LabelSyntaxError : public Error {
 public:
  LabelSyntaxError(const std::string& source, std::size_t row, const std::string& reason);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class DuplicateLabel : public Error {
 public:
  DuplicateLabel(const std::string& source, std::size_t row, const LabeledPair& pair);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// CSV with header pkg,path,event,label; label is correct, incorrect or
// imprecise. Row numbers in errors are file line numbers.
std::vector<LabeledPair> load_labels(std::istream& in, const std::string& source);
std::vector<LabeledPair> load_labels_file(const std::filesystem::path& file);
void write_labels(std::ostream& out, const std::vector<LabeledPair>& labels);

}  // namespace deadlisten::eval
