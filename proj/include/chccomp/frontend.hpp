#pragma once

#include <string>
#include <string_view>

#include "chccomp/script.hpp"

namespace chccomp {

/// Parses the CHC subset of SMT-LIB 2.6. Commands outside the subset, and
/// asserts using constructs the subset does not cover (`match`, `par`), are
/// kept as cmd::Unsupported.
///
/// Throws LexError, ParseError, or ParametricDatatypeError.
Script parse_script(std::string_view text);

/// Parses a single term with no enclosing binders (test and tooling helper).
Term parse_term(std::string_view text);

/// Emits one command per line; terms wider than the line budget are broken
/// with two-space indentation. Output is a pure function of the structure.
std::string print_script(const Script& script);
std::string print_command(const Command& command);
std::string print_term(const Term& term);
std::string print_sort(const Sort& sort);

}  // namespace chccomp
