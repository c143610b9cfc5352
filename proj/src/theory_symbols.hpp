#pragma once

#include <string_view>

namespace chccomp::detail {

enum class SymbolTheory { None, Core, IntArith, RealArith, Arrays };

inline SymbolTheory theory_of(std::string_view s) {
  if (s == "true" || s == "false" || s == "not" || s == "and" || s == "or" || s == "=>" ||
      s == "xor" || s == "=" || s == "distinct" || s == "ite") {
    return SymbolTheory::Core;
  }
  if (s == "+" || s == "-" || s == "*" || s == "div" || s == "mod" || s == "abs" || s == "<" ||
      s == "<=" || s == ">" || s == ">=") {
    return SymbolTheory::IntArith;
  }
  if (s == "/" || s == "to_real" || s == "to_int" || s == "is_int") return SymbolTheory::RealArith;
  if (s == "select" || s == "store" || s == "const") return SymbolTheory::Arrays;
  return SymbolTheory::None;
}

}  // namespace chccomp::detail
