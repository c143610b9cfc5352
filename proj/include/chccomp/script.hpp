#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chccomp/sexpr.hpp"

namespace chccomp {

/// A sort expression such as `Int`, `lst` or `(Array Int Int)`.
struct Sort {
  std::string name;
  std::vector<std::string> indices;  // `(_ BitVec 32)` style
  std::vector<Sort> params;

  static Sort simple(std::string name) { return Sort{std::move(name), {}, {}}; }

  friend bool operator==(const Sort&, const Sort&) = default;
};

/// Function symbol in head position: plain, indexed `(_ is cons)`, or
/// qualified `(as const (Array Int Int))`.
struct Identifier {
  std::string symbol;
  std::vector<std::string> indices;
  std::optional<Sort> qualifier;

  friend bool operator==(const Identifier&, const Identifier&) = default;
};

struct SortedVar {
  std::string name;
  Sort sort;

  friend bool operator==(const SortedVar&, const SortedVar&) = default;
};

enum class TermKind { Variable, Constant, Application, Forall, Exists, Let, Annotated };

/// Term tree. One node type tagged by `kind`:
///  - Variable: `name` is a symbol bound by an enclosing quantifier or let.
///  - Constant: `constant_kind` + `name` hold the literal text.
///  - Application: `fn` applied to `args` (possibly none, e.g. `true`).
///  - Forall/Exists: `vars` bound over `args[0]`.
///  - Let: `binders[i]` bound to `args[i]`; the body is `args.back()`.
///  - Annotated: `args[0]` with raw `attributes`.
struct Term {
  TermKind kind = TermKind::Application;
  std::string name;
  AtomKind constant_kind = AtomKind::Numeral;
  Identifier fn;
  std::vector<SortedVar> vars;
  std::vector<std::string> binders;
  std::vector<SExpr> attributes;
  std::vector<Term> args;
  SourceLocation loc;

  static Term variable(std::string name);
  static Term constant(AtomKind kind, std::string text);
  static Term numeral(std::string digits) { return constant(AtomKind::Numeral, std::move(digits)); }
  static Term app(std::string symbol, std::vector<Term> args = {});
  static Term app(Identifier fn, std::vector<Term> args);
  static Term quantifier(TermKind kind, std::vector<SortedVar> vars, Term body);
  static Term let(std::vector<std::string> binders, std::vector<Term> values, Term body);

  bool is_app(std::string_view symbol) const {
    return kind == TermKind::Application && fn.symbol == symbol && fn.indices.empty() &&
           !fn.qualifier;
  }
  const Term& body() const { return args.back(); }

  // Structural equality; locations ignored.
  friend bool operator==(const Term& a, const Term& b);
};

struct Selector {
  std::string name;
  Sort sort;
  friend bool operator==(const Selector&, const Selector&) = default;
};

struct Constructor {
  std::string name;
  std::vector<Selector> selectors;
  friend bool operator==(const Constructor&, const Constructor&) = default;
};

/// A non-parametric algebraic datatype.
struct DatatypeDecl {
  std::string name;
  std::vector<Constructor> constructors;
  friend bool operator==(const DatatypeDecl&, const DatatypeDecl&) = default;
};

namespace cmd {

struct SetLogic {
  std::string logic;
  friend bool operator==(const SetLogic&, const SetLogic&) = default;
};

struct SetInfo {
  std::string keyword;
  std::optional<SExpr> value;
  friend bool operator==(const SetInfo&, const SetInfo&) = default;
};

struct DeclareFun {
  std::string name;
  std::vector<Sort> args;
  Sort result;
  friend bool operator==(const DeclareFun&, const DeclareFun&) = default;
};

/// One `declare-datatypes` command; its members form one declaration group.
struct DeclareDatatypes {
  std::vector<DatatypeDecl> decls;
  friend bool operator==(const DeclareDatatypes&, const DeclareDatatypes&) = default;
};

struct Assert {
  Term term;
  friend bool operator==(const Assert&, const Assert&) = default;
};

struct CheckSat {
  friend bool operator==(const CheckSat&, const CheckSat&) = default;
};
struct Exit {
  friend bool operator==(const Exit&, const Exit&) = default;
};
struct GetModel {
  friend bool operator==(const GetModel&, const GetModel&) = default;
};

/// Anything outside the CHC subset, kept verbatim.
struct Unsupported {
  SExpr raw;
  friend bool operator==(const Unsupported&, const Unsupported&) = default;
};

}  // namespace cmd

using Command = std::variant<cmd::SetLogic, cmd::SetInfo, cmd::DeclareFun, cmd::DeclareDatatypes,
                             cmd::Assert, cmd::CheckSat, cmd::Exit, cmd::GetModel,
                             cmd::Unsupported>;

struct Script {
  std::vector<Command> commands;
  friend bool operator==(const Script&, const Script&) = default;
};

/// Command name as written in SMT-LIB (`assert`, `declare-fun`, ...).
std::string command_name(const Command& c);

}  // namespace chccomp
