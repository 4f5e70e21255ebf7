#include "violet/confscript/lexer.hpp"

#include <array>
#include <cctype>
#include <limits>

#include "violet/confscript/diagnostics.hpp"

namespace violet::confscript {

namespace {

constexpr std::array kKeywords = {
    "config", "input", "fn",    "extern", "pure", "benign", "let",  "if",   "else", "while",
    "bound",  "cost",  "return", "bool",  "int",  "enum",   "in",   "true", "false",
};

// Longest first so that `==` wins over `=`.
constexpr std::array kPuncts = {
    "==", "!=", "<=", ">=", "&&", "||", "->", "{", "}", "(", ")", "[", "]",
    ",",  ";",  ":",  "=",  "<",  ">",  "+",  "-", "*", "!",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

[[noreturn]] void fail(int line, int col, std::string msg) {
  throw SyntaxError(Diagnostic{Diagnostic::Severity::Error, line, col, std::move(msg)}, {});
}

}  // namespace

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (word == k) return true;
  return false;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      int l0 = line, c0 = col;
      advance(2);
      while (i < src.size() && src.substr(i, 2) != "*/") advance(1);
      if (i >= src.size()) fail(l0, c0, "unterminated block comment");
      advance(2);
      continue;
    }

    Token tok;
    tok.line = line;
    tok.column = col;

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      if (j < src.size() && src[j] == '#' && j + 1 < src.size() &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      tok.text = std::string(src.substr(i, j - i));
      tok.kind = is_keyword(tok.text) ? TokenKind::Keyword : TokenKind::Ident;
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::int64_t v = 0;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        int d = src[j] - '0';
        if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10)
          fail(line, col, "integer literal out of range");
        v = v * 10 + d;
        ++j;
      }
      if (j < src.size() && ident_char(src[j])) fail(line, col, "malformed number");
      tok.kind = TokenKind::Int;
      tok.text = std::string(src.substr(i, j - i));
      tok.value = v;
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }

    bool matched = false;
    for (auto p : kPuncts) {
      std::string_view pv(p);
      if (src.substr(i, pv.size()) == pv) {
        tok.kind = TokenKind::Punct;
        tok.text = std::string(pv);
        advance(pv.size());
        out.push_back(std::move(tok));
        matched = true;
        break;
      }
    }
    if (!matched) fail(line, col, std::string("unexpected character '") + c + "'");
  }

  Token end;
  end.kind = TokenKind::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

}  // namespace violet::confscript
