#pragma once

#include <cstddef>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "deadlisten/error.hpp"

namespace deadlisten::corpus {

// Malformed input file. `line` is 1-based; 0 when unknown.
class FormatError : public Error {
 public:
  FormatError(std::string source, std::size_t line, const std::string& reason);

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

namespace csv {

// RFC 4180 field: quoted only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& out, std::initializer_list<std::string_view> fields);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Reads RFC 4180 records; LF or CRLF line endings. Lines starting with '#'
// outside a record are skipped as comments.
class Reader {
 public:
  Reader(std::istream& in, std::string source);

  // False at end of input.
  bool next(std::vector<std::string>& row);
  // Line on which the last returned record started.
  std::size_t line() const { return record_line_; }
  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

}  // namespace csv
}  // namespace deadlisten::corpus
