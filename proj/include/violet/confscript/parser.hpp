#pragma once

#include <string>
#include <string_view>

#include "violet/confscript/ast.hpp"
#include "violet/confscript/diagnostics.hpp"

namespace violet::confscript {

/// Parses and semantically checks a ConfScript program.
///
/// On success the returned Program has statement ids assigned and satisfies
/// every well-formedness rule (single `main`, resolved names, non-empty
/// domains). Throws SyntaxError at the first syntax error, or SemanticError
/// carrying all semantic diagnostics.
Program parse(std::string_view source);

/// Parses a program without running semantic checks (statements numbered).
Program parse_syntax(std::string_view source);

/// Parses a standalone expression such as `sql_command == INSERT`. Names are
/// left unresolved.
Expr parse_expression(std::string_view source);

/// Reads and parses a file; diagnostics keep line/column positions.
Program parse_file(const std::string& path);

/// Semantic rules; throws SemanticError listing every violation.
void check_program(const Program& program);

}  // namespace violet::confscript
