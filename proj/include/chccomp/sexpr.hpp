#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chccomp/error.hpp"

namespace chccomp {

enum class AtomKind { Symbol, Keyword, Numeral, Decimal, Hexadecimal, Binary, String };

/// Generic SMT-LIB s-expression. Symbols are stored without `|...|` quoting
/// and string literals are stored unescaped; numerals keep their digit text,
/// so there is no size limit.
struct SExpr {
  bool is_list = false;
  AtomKind kind = AtomKind::Symbol;
  std::string text;
  std::vector<SExpr> children;
  SourceLocation loc;

  static SExpr atom(AtomKind kind, std::string text, SourceLocation loc = {});
  static SExpr list(std::vector<SExpr> children, SourceLocation loc = {});

  bool is_atom() const noexcept { return !is_list; }
  bool is_symbol() const noexcept { return !is_list && kind == AtomKind::Symbol; }
  bool is_symbol(std::string_view name) const noexcept { return is_symbol() && text == name; }

  // Structural equality; locations are ignored.
  friend bool operator==(const SExpr& a, const SExpr& b);
};

/// Reads every top-level s-expression in `text`. `;` comments are skipped.
/// Throws LexError or ParseError.
std::vector<SExpr> read_sexprs(std::string_view text);

/// True if `name` can be printed without `|...|` quoting.
bool is_simple_symbol(std::string_view name);

std::string quote_symbol(std::string_view name);
std::string quote_string(std::string_view contents);

/// Single-line rendering.
std::string to_string(const SExpr& e);

}  // namespace chccomp
