#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace violet::confscript {

enum class TokenKind {
  Ident,
  Int,
  Keyword,
  Punct,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
  int column = 1;
};

/// Splits ConfScript source into tokens. `//` and `/* */` comments are
/// skipped. Identifiers may carry a `#<digits>` suffix (internal variable
/// names in serialized constraints); the parser rejects those in programs.
/// Throws SyntaxError on an unrecognized character or unterminated comment.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

}  // namespace violet::confscript
