#include "deadlisten/corpus/path_codec.hpp"

#include <charconv>
#include <limits>

#include <fmt/format.h>

namespace deadlisten::corpus {

using miner::AccessPath;

PathSyntaxError::PathSyntaxError(std::string text, std::size_t offset, const std::string& reason)
    : Error(fmt::format("malformed access path '{}' at offset {}: {}", text, offset, reason)),
      text_(std::move(text)),
      offset_(offset) {}

namespace {

constexpr std::string_view kPrefix = "require(";
constexpr std::string_view kInstance = "[new]()";

struct StepWriter {
  std::string& out;
  void operator()(const miner::PropertyRead& s) const {
    out += '.';
    out += s.name;
  }
  void operator()(const miner::CallReturn&) const { out += "()"; }
  void operator()(const miner::Argument& s) const { fmt::format_to(std::back_inserter(out), "({})", s.index); }
  void operator()(const miner::Instance&) const { out += kInstance; }
};

std::size_t package_end(std::string_view text) {
  if (!text.starts_with(kPrefix)) throw PathSyntaxError(std::string(text), 0, "expected 'require('");
  std::size_t close = text.find(')', kPrefix.size());
  if (close == std::string_view::npos) {
    throw PathSyntaxError(std::string(text), text.size(), "unterminated package");
  }
  std::string_view pkg = text.substr(kPrefix.size(), close - kPrefix.size());
  if (!miner::is_valid_package(pkg)) {
    throw PathSyntaxError(std::string(text), kPrefix.size(), "invalid package name");
  }
  return close;
}

}  // namespace

std::string serialize_path(const AccessPath& path) {
  std::string out;
  out.reserve(kPrefix.size() + path.root_package.size() + 1 + 8 * path.steps.size());
  out += kPrefix;
  out += path.root_package;
  out += ')';
  if (!miner::is_well_formed(path)) throw PathSyntaxError(out, 0, "path is not well formed");
  for (const miner::PathStep& step : path.steps) std::visit(StepWriter{out}, step);
  return out;
}

std::string root_package_of(std::string_view text) {
  std::size_t close = package_end(text);
  return std::string(text.substr(kPrefix.size(), close - kPrefix.size()));
}

AccessPath parse_path(std::string_view text) {
  auto fail = [&](std::size_t at, const char* why) -> PathSyntaxError {
    return PathSyntaxError(std::string(text), at, why);
  };
  std::size_t close = package_end(text);
  AccessPath path(std::string(text.substr(kPrefix.size(), close - kPrefix.size())));
  std::size_t i = close + 1;
  while (i < text.size()) {
    char c = text[i];
    if (c == '.') {
      std::size_t start = ++i;
      while (i < text.size() && text[i] != '.' && text[i] != '(' && text[i] != '[') ++i;
      std::string_view name = text.substr(start, i - start);
      if (!miner::is_identifier_name(name)) throw fail(start, "invalid property name");
      path.steps.emplace_back(miner::PropertyRead{std::string(name)});
    } else if (c == '(') {
      if (i + 1 < text.size() && text[i + 1] == ')') {
        path.steps.emplace_back(miner::CallReturn{});
        i += 2;
        continue;
      }
      std::size_t start = ++i;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
      if (i == start) throw fail(start, "expected argument index");
      if (i >= text.size() || text[i] != ')') throw fail(i, "expected ')'");
      if (text[start] == '0' && i - start > 1) throw fail(start, "leading zero in argument index");
      std::uint32_t index = 0;
      auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + i, index);
      if (ec != std::errc{}) throw fail(start, "argument index out of range");
      path.steps.emplace_back(miner::Argument{index});
      ++i;
    } else if (text.substr(i).starts_with(kInstance)) {
      path.steps.emplace_back(miner::Instance{});
      i += kInstance.size();
    } else {
      throw fail(i, "unexpected character");
    }
  }
  return path;
}

}  // namespace deadlisten::corpus
