#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "deadlisten/miner/syntax.hpp"

namespace deadlisten::miner::detail {

enum class TokenType : std::uint8_t {
  EndOfFile,
  Identifier,  // includes reserved words; the parser decides
  PrivateName,
  String,
  Number,
  Template,  // one chunk of a template literal
  RegExp,
  Punctuator,
};

struct Token {
  TokenType type = TokenType::EndOfFile;
  std::string value;  // identifier name, cooked string, punctuator, raw number
  std::size_t start = 0;
  std::size_t end = 0;
  std::uint32_t line = 1;
  std::uint32_t column = 1;
  bool newline_before = false;
  bool escaped = false;        // identifier contained a unicode escape
  bool template_tail = false;  // template chunk ends with a backtick

  bool is(std::string_view punct) const {
    return type == TokenType::Punctuator && value == punct;
  }
  bool is_word(std::string_view word) const {
    return type == TokenType::Identifier && !escaped && value == word;
  }
};

// On-demand scanner. The parser owns the one-token lookahead and asks the
// lexer to rescan when context decides between `/` and a regex literal or
// resumes a template literal after `}`.
class Lexer {
 public:
  struct State {
    std::size_t pos = 0;
    std::uint32_t line = 1;
    std::size_t line_start = 0;
  };

  Lexer(std::string_view source, std::string file);

  Token next();
  Token rescan_as_regex(const Token& slash);
  Token continue_template(const Token& close_brace);

  State save() const { return state_; }
  void restore(State state) { state_ = state; }

  [[noreturn]] void fail(std::uint32_t line, std::uint32_t column, const std::string& message) const;

 private:
  char peek(std::size_t offset = 0) const;
  bool at_end() const { return state_.pos >= src_.size(); }
  std::uint32_t column_at(std::size_t pos) const;
  void newline_at(std::size_t next_pos);
  bool skip_trivia();  // returns true if a line terminator was crossed

  Token scan_identifier(Token tok);
  Token scan_number(Token tok);
  Token scan_string(Token tok, char quote);
  Token scan_template_chunk(Token tok);
  Token scan_punctuator(Token tok);
  void read_escape(std::string& out, const Token& tok);

  std::string_view src_;
  std::string file_;
  State state_;
};

void append_utf8(std::string& out, std::uint32_t code_point);

}  // namespace deadlisten::miner::detail
