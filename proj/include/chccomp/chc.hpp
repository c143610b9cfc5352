#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chccomp/error.hpp"
#include "chccomp/script.hpp"

namespace chccomp {

struct Predicate {
  std::string name;
  std::vector<Sort> arg_sorts;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Application of an uninterpreted predicate.
struct Atom {
  std::string predicate;
  std::vector<Term> args;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// `forall vars. body_atoms /\ constraint => head`, with head = false for queries.
struct Clause {
  std::vector<SortedVar> vars;
  std::vector<Atom> body;
  Term constraint;
  std::optional<Atom> head;

  bool is_query() const noexcept { return !head.has_value(); }
  friend bool operator==(const Clause&, const Clause&) = default;
};

struct ChcSystem {
  std::vector<Predicate> predicates;
  std::vector<std::vector<DatatypeDecl>> datatype_groups;
  std::vector<Clause> clauses;
  std::string source_fingerprint;  // hex SHA-256 of the printed source script

  const Predicate* find_predicate(const std::string& name) const;
  std::size_t query_count() const;
  friend bool operator==(const ChcSystem&, const ChcSystem&) = default;
};

enum class Linearity { Linear, Nonlinear };

class ChcError : public Error {
 public:
  enum class Kind {
    NotHorn,
    UnboundVariable,
    UndeclaredPredicate,
    ArityMismatch,
    DuplicateDeclaration,
    MultipleCheckSat,
    UnsupportedCommand,
  };

  ChcError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(ChcError::Kind kind);

/// Decomposes every assert into a Horn clause. Accepted shapes (after let
/// expansion and stripping the `forall` prefix): `(=> B H)` (also n-ary and
/// curried), `(or (not B) ... H)`, a bare query `(not B)`, and a bare fact atom.
/// Throws ChcError.
ChcSystem to_chc_system(const Script& script);

Linearity clause_linearity(const Clause& clause);
Linearity system_linearity(const ChcSystem& system);

/// Renders a clause back into an assertable term:
/// `(forall (vars) (=> (and atoms constraint) head))`.
Term clause_to_term(const Clause& clause);

// Term utilities shared by the analyses.

/// Replaces every let by its bindings; capture-avoiding.
Term expand_lets(const Term& term);

/// Capture-avoiding substitution of free variables.
Term substitute(const Term& term, const std::map<std::string, Term>& replacement);

std::set<std::string> free_variables(const Term& term);

/// Number of uninterpreted atoms `term` contains, given the predicate names.
std::size_t count_predicate_applications(const Term& term, const std::set<std::string>& predicates);

}  // namespace chccomp
