#pragma once

#include <string>
#include <string_view>

#include "deadlisten/error.hpp"
#include "deadlisten/miner/access_path.hpp"

namespace deadlisten::corpus {

class PathSyntaxError : public Error {
 public:
  PathSyntaxError(std::string text, std::size_t offset, const std::string& reason);

  const std::string& text() const { return text_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string text_;
  std::size_t offset_;
};

// Canonical text form:
//   path := "require(" pkg ")" step*
//   step := "." ident | "()" | "(" digits ")" | "[new]()"
// Throws PathSyntaxError if the path is not well formed.
std::string serialize_path(const miner::AccessPath& path);

// Inverse of serialize_path. Argument indices are decimal without leading
// zeros, so every valid path has exactly one spelling.
miner::AccessPath parse_path(std::string_view text);

// Root package of a serialized path without parsing the steps.
std::string root_package_of(std::string_view text);

}  // namespace deadlisten::corpus
