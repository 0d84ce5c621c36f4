#include "lexer.hpp"

#include <array>
#include <cctype>

namespace deadlisten::miner::detail {
namespace {

bool is_id_start(unsigned char c) {
  return std::isalpha(c) != 0 || c == '_' || c == '$' || c >= 0x80;
}

bool is_id_part(unsigned char c) { return is_id_start(c) || std::isdigit(c) != 0; }

bool is_line_terminator(char c) { return c == '\n' || c == '\r'; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Longest match first within each length class.
constexpr std::array<std::string_view, 1> kPunct4 = {">>>="};
constexpr std::array<std::string_view, 10> kPunct3 = {"===", "!==", "**=", "<<=", ">>=",
                                                     ">>>", "...", "&&=", "||=", "??="};
constexpr std::array<std::string_view, 22> kPunct2 = {
    "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "++", "--", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "**"};

}  // namespace

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

Lexer::Lexer(std::string_view source, std::string file) : src_(source), file_(std::move(file)) {
  if (src_.starts_with("\xEF\xBB\xBF")) state_.pos = 3;
  if (src_.substr(state_.pos).starts_with("#!")) {
    while (!at_end() && !is_line_terminator(peek())) ++state_.pos;
  }
}

void Lexer::fail(std::uint32_t line, std::uint32_t column, const std::string& message) const {
  throw ParseError(file_, line, column, message);
}

char Lexer::peek(std::size_t offset) const {
  std::size_t at = state_.pos + offset;
  return at < src_.size() ? src_[at] : '\0';
}

std::uint32_t Lexer::column_at(std::size_t pos) const {
  return static_cast<std::uint32_t>(pos - state_.line_start + 1);
}

void Lexer::newline_at(std::size_t next_pos) {
  ++state_.line;
  state_.line_start = next_pos;
}

bool Lexer::skip_trivia() {
  bool crossed = false;
  while (!at_end()) {
    char c = peek();
    if (c == '\n') {
      ++state_.pos;
      newline_at(state_.pos);
      crossed = true;
    } else if (c == '\r') {
      ++state_.pos;
      if (peek() == '\n') ++state_.pos;
      newline_at(state_.pos);
      crossed = true;
    } else if (c == ' ' || c == '\t' || c == '\v' || c == '\f') {
      ++state_.pos;
    } else if (src_.substr(state_.pos).starts_with("\xC2\xA0") ||
               src_.substr(state_.pos).starts_with("\xEF\xBB\xBF")) {
      state_.pos += (c == '\xC2') ? 2 : 3;
    } else if (src_.substr(state_.pos).starts_with("\xE2\x80\xA8") ||
               src_.substr(state_.pos).starts_with("\xE2\x80\xA9")) {
      state_.pos += 3;
      newline_at(state_.pos);
      crossed = true;
    } else if (c == '/' && peek(1) == '/') {
      while (!at_end() && !is_line_terminator(peek())) ++state_.pos;
    } else if (c == '/' && peek(1) == '*') {
      std::uint32_t line = state_.line;
      std::uint32_t col = column_at(state_.pos);
      state_.pos += 2;
      while (true) {
        if (at_end()) fail(line, col, "unterminated comment");
        if (peek() == '*' && peek(1) == '/') {
          state_.pos += 2;
          break;
        }
        if (peek() == '\n' || (peek() == '\r' && peek(1) != '\n')) {
          ++state_.pos;
          newline_at(state_.pos);
          crossed = true;
        } else {
          ++state_.pos;
        }
      }
    } else if (c == '<' && src_.substr(state_.pos).starts_with("<!--")) {
      while (!at_end() && !is_line_terminator(peek())) ++state_.pos;
    } else {
      break;
    }
  }
  return crossed;
}

Token Lexer::next() {
  Token tok;
  tok.newline_before = skip_trivia();
  tok.start = state_.pos;
  tok.line = state_.line;
  tok.column = column_at(state_.pos);
  if (at_end()) {
    tok.type = TokenType::EndOfFile;
    tok.end = state_.pos;
    return tok;
  }
  auto c = static_cast<unsigned char>(peek());
  if (is_id_start(c) || c == '\\') return scan_identifier(std::move(tok));
  if (c == '#' && is_id_start(static_cast<unsigned char>(peek(1)))) {
    ++state_.pos;
    tok = scan_identifier(std::move(tok));
    tok.type = TokenType::PrivateName;
    return tok;
  }
  if (std::isdigit(c) != 0 || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))) != 0)) {
    return scan_number(std::move(tok));
  }
  if (c == '"' || c == '\'') return scan_string(std::move(tok), static_cast<char>(c));
  if (c == '`') {
    ++state_.pos;
    return scan_template_chunk(std::move(tok));
  }
  return scan_punctuator(std::move(tok));
}

Token Lexer::scan_identifier(Token tok) {
  tok.type = TokenType::Identifier;
  while (!at_end()) {
    auto c = static_cast<unsigned char>(peek());
    if (c == '\\') {
      if (peek(1) != 'u') fail(tok.line, tok.column, "invalid escape in identifier");
      ++state_.pos;
      tok.escaped = true;
      read_escape(tok.value, tok);
    } else if (is_id_part(c)) {
      tok.value.push_back(static_cast<char>(c));
      ++state_.pos;
    } else {
      break;
    }
  }
  tok.end = state_.pos;
  return tok;
}

Token Lexer::scan_number(Token tok) {
  tok.type = TokenType::Number;
  bool hex = peek() == '0' && (peek(1) == 'x' || peek(1) == 'X');
  while (!at_end()) {
    char c = peek();
    if (std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.') {
      ++state_.pos;
      if (!hex && (c == 'e' || c == 'E') && (peek() == '+' || peek() == '-')) ++state_.pos;
    } else {
      break;
    }
  }
  tok.end = state_.pos;
  tok.value = std::string(src_.substr(tok.start, tok.end - tok.start));
  return tok;
}

void Lexer::read_escape(std::string& out, const Token& tok) {
  // positioned on the character after the backslash
  char c = peek();
  ++state_.pos;
  switch (c) {
    case 'n': out.push_back('\n'); return;
    case 't': out.push_back('\t'); return;
    case 'r': out.push_back('\r'); return;
    case 'b': out.push_back('\b'); return;
    case 'f': out.push_back('\f'); return;
    case 'v': out.push_back('\v'); return;
    case '0':
      if (std::isdigit(static_cast<unsigned char>(peek())) == 0) {
        out.push_back('\0');
        return;
      }
      break;
    case 'x': {
      int hi = hex_value(peek());
      int lo = hex_value(peek(1));
      if (hi < 0 || lo < 0) fail(tok.line, tok.column, "invalid hex escape");
      state_.pos += 2;
      append_utf8(out, static_cast<std::uint32_t>(hi * 16 + lo));
      return;
    }
    case 'u': {
      std::uint32_t cp = 0;
      if (peek() == '{') {
        ++state_.pos;
        int digits = 0;
        while (peek() != '}') {
          int v = hex_value(peek());
          if (v < 0 || ++digits > 6) fail(tok.line, tok.column, "invalid unicode escape");
          cp = cp * 16 + static_cast<std::uint32_t>(v);
          ++state_.pos;
        }
        ++state_.pos;
      } else {
        for (int i = 0; i < 4; ++i) {
          int v = hex_value(peek());
          if (v < 0) fail(tok.line, tok.column, "invalid unicode escape");
          cp = cp * 16 + static_cast<std::uint32_t>(v);
          ++state_.pos;
        }
      }
      append_utf8(out, cp);
      return;
    }
    case '\r':
      if (peek() == '\n') ++state_.pos;
      newline_at(state_.pos);
      return;
    case '\n':
      newline_at(state_.pos);
      return;
    default:
      break;
  }
  if (c == '\0' && at_end()) fail(tok.line, tok.column, "unterminated escape");
  // legacy octal escapes and identity escapes keep the character itself
  out.push_back(c);
}

Token Lexer::scan_string(Token tok, char quote) {
  tok.type = TokenType::String;
  ++state_.pos;
  while (true) {
    if (at_end() || is_line_terminator(peek())) fail(tok.line, tok.column, "unterminated string literal");
    char c = peek();
    if (c == quote) {
      ++state_.pos;
      break;
    }
    if (c == '\\') {
      ++state_.pos;
      read_escape(tok.value, tok);
    } else {
      tok.value.push_back(c);
      ++state_.pos;
    }
  }
  tok.end = state_.pos;
  return tok;
}

Token Lexer::scan_template_chunk(Token tok) {
  // positioned after the opening backtick or after the closing `}` of a
  // substitution
  tok.type = TokenType::Template;
  while (true) {
    if (at_end()) fail(tok.line, tok.column, "unterminated template literal");
    char c = peek();
    if (c == '`') {
      ++state_.pos;
      tok.template_tail = true;
      break;
    }
    if (c == '$' && peek(1) == '{') {
      state_.pos += 2;
      tok.template_tail = false;
      break;
    }
    if (c == '\\') {
      ++state_.pos;
      read_escape(tok.value, tok);
    } else if (c == '\n' || c == '\r') {
      ++state_.pos;
      if (c == '\r' && peek() == '\n') ++state_.pos;
      tok.value.push_back('\n');
      newline_at(state_.pos);
    } else {
      tok.value.push_back(c);
      ++state_.pos;
    }
  }
  tok.end = state_.pos;
  return tok;
}

Token Lexer::scan_punctuator(Token tok) {
  tok.type = TokenType::Punctuator;
  std::string_view rest = src_.substr(state_.pos);
  auto take = [&](std::string_view p) {
    tok.value = std::string(p);
    state_.pos += p.size();
    tok.end = state_.pos;
    return tok;
  };
  for (auto p : kPunct4) {
    if (rest.starts_with(p)) return take(p);
  }
  for (auto p : kPunct3) {
    if (rest.starts_with(p)) return take(p);
  }
  for (auto p : kPunct2) {
    if (!rest.starts_with(p)) continue;
    // `a?.5:b` is a conditional, not optional chaining
    if (p == "?." && rest.size() > 2 && std::isdigit(static_cast<unsigned char>(rest[2])) != 0) continue;
    return take(p);
  }
  constexpr std::string_view kSingle = "{}()[];,<>+-*/%&|^!~?:=.@";
  if (kSingle.find(rest.front()) != std::string_view::npos) return take(rest.substr(0, 1));
  fail(tok.line, tok.column, "unexpected character '" + std::string(1, rest.front()) + "'");
}

Token Lexer::rescan_as_regex(const Token& slash) {
  state_.pos = slash.start + 1;
  Token tok = slash;
  tok.type = TokenType::RegExp;
  bool in_class = false;
  while (true) {
    if (at_end() || is_line_terminator(peek())) fail(tok.line, tok.column, "unterminated regular expression");
    char c = peek();
    ++state_.pos;
    if (c == '\\') {
      if (at_end() || is_line_terminator(peek())) fail(tok.line, tok.column, "unterminated regular expression");
      ++state_.pos;
    } else if (c == '[') {
      in_class = true;
    } else if (c == ']') {
      in_class = false;
    } else if (c == '/' && !in_class) {
      break;
    }
  }
  while (!at_end() && is_id_part(static_cast<unsigned char>(peek()))) ++state_.pos;
  tok.end = state_.pos;
  tok.value = std::string(src_.substr(tok.start, tok.end - tok.start));
  return tok;
}

Token Lexer::continue_template(const Token& close_brace) {
  state_.pos = close_brace.end;
  Token tok;
  tok.start = close_brace.start;
  tok.line = close_brace.line;
  tok.column = close_brace.column;
  return scan_template_chunk(std::move(tok));
}

}  // namespace deadlisten::miner::detail
