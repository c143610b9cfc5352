#include <map>
#include <set>
#include <string>

#include "chccomp/chc.hpp"
#include "chccomp/digest.hpp"
#include "chccomp/frontend.hpp"
#include "theory_symbols.hpp"

namespace chccomp {

const Predicate* ChcSystem::find_predicate(const std::string& name) const {
  for (const auto& p : predicates) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::size_t ChcSystem::query_count() const {
  std::size_t n = 0;
  for (const auto& c : clauses) n += c.is_query() ? 1 : 0;
  return n;
}

const char* to_string(ChcError::Kind kind) {
  switch (kind) {
    case ChcError::Kind::NotHorn: return "NotHorn";
    case ChcError::Kind::UnboundVariable: return "UnboundVariable";
    case ChcError::Kind::UndeclaredPredicate: return "UndeclaredPredicate";
    case ChcError::Kind::ArityMismatch: return "ArityMismatch";
    case ChcError::Kind::DuplicateDeclaration: return "DuplicateDeclaration";
    case ChcError::Kind::MultipleCheckSat: return "MultipleCheckSat";
    case ChcError::Kind::UnsupportedCommand: return "UnsupportedCommand";
  }
  return "?";
}

Linearity clause_linearity(const Clause& clause) {
  return clause.body.size() <= 1 ? Linearity::Linear : Linearity::Nonlinear;
}

Linearity system_linearity(const ChcSystem& system) {
  for (const auto& c : system.clauses) {
    if (clause_linearity(c) == Linearity::Nonlinear) return Linearity::Nonlinear;
  }
  return Linearity::Linear;
}

Term clause_to_term(const Clause& clause) {
  std::vector<Term> premises;
  for (const auto& a : clause.body) premises.push_back(Term::app(a.predicate, a.args));
  bool trivial_constraint = clause.constraint.is_app("true") && clause.constraint.args.empty();
  if (!trivial_constraint || premises.empty()) premises.push_back(clause.constraint);
  Term premise = premises.size() == 1 ? premises[0] : Term::app("and", std::move(premises));
  Term head = clause.head ? Term::app(clause.head->predicate, clause.head->args) : Term::app("false");
  Term body = Term::app("=>", {std::move(premise), std::move(head)});
  if (clause.vars.empty()) return body;
  return Term::quantifier(TermKind::Forall, clause.vars, std::move(body));
}

namespace {

using Kind = ChcError::Kind;

struct Signature {
  std::size_t arity = 0;
};

class Converter {
 public:
  ChcSystem run(const Script& script) {
    ChcSystem sys;
    sys.source_fingerprint = sha256_hex(print_script(script));
    std::vector<const Term*> asserts;
    std::size_t check_sats = 0;
    for (const auto& c : script.commands) {
      if (auto* f = std::get_if<cmd::DeclareFun>(&c)) {
        declare_predicate(*f, sys);
      } else if (auto* d = std::get_if<cmd::DeclareDatatypes>(&c)) {
        declare_datatypes(*d, sys);
      } else if (auto* a = std::get_if<cmd::Assert>(&c)) {
        asserts.push_back(&a->term);
      } else if (std::holds_alternative<cmd::CheckSat>(c)) {
        if (++check_sats > 1) throw ChcError(Kind::MultipleCheckSat, "more than one check-sat");
      } else if (std::holds_alternative<cmd::Unsupported>(c)) {
        throw ChcError(Kind::UnsupportedCommand, "unsupported command '" + command_name(c) + "'");
      }
    }
    for (const Term* t : asserts) sys.clauses.push_back(to_clause(*t));
    return sys;
  }

 private:
  void claim(const std::string& name) {
    if (!names_.insert(name).second) {
      throw ChcError(Kind::DuplicateDeclaration, "symbol '" + name + "' declared twice");
    }
  }

  void declare_predicate(const cmd::DeclareFun& f, ChcSystem& sys) {
    if (f.result != Sort::simple("Bool")) {
      throw ChcError(Kind::UnsupportedCommand,
                     "uninterpreted function '" + f.name + "' does not return Bool");
    }
    claim(f.name);
    predicates_[f.name] = f.args.size();
    sys.predicates.push_back(Predicate{f.name, f.args});
  }

  void declare_datatypes(const cmd::DeclareDatatypes& d, ChcSystem& sys) {
    for (const auto& decl : d.decls) {
      claim(decl.name);
      for (const auto& c : decl.constructors) {
        claim(c.name);
        adt_functions_[c.name] = Signature{c.selectors.size()};
        constructors_.insert(c.name);
        adt_functions_["is-" + c.name] = Signature{1};
        for (const auto& s : c.selectors) {
          claim(s.name);
          adt_functions_[s.name] = Signature{1};
        }
      }
    }
    sys.datatype_groups.push_back(d.decls);
  }

  bool is_atom(const Term& t) const {
    return t.kind == TermKind::Application && t.fn.indices.empty() && !t.fn.qualifier &&
           predicates_.count(t.fn.symbol);
  }

  static const Term& strip_annotation(const Term& t) {
    const Term* p = &t;
    while (p->kind == TermKind::Annotated) p = &p->args[0];
    return *p;
  }

  Clause to_clause(const Term& original) {
    Term t = expand_lets(original);
    std::vector<SortedVar> vars;
    std::set<std::string> prefix_names;
    for (;;) {
      t = Term(strip_annotation(t));
      if (t.kind != TermKind::Forall) break;
      Term body = t.body();
      for (const auto& v : t.vars) {
        SortedVar sv = v;
        if (prefix_names.count(v.name)) {
          // An inner forall shadows an outer one; give the inner variable a fresh name.
          std::set<std::string> avoid = prefix_names;
          auto fv = free_variables(body);
          avoid.insert(fv.begin(), fv.end());
          std::size_t k = 1;
          while (avoid.count(v.name + "!" + std::to_string(k))) ++k;
          sv.name = v.name + "!" + std::to_string(k);
          body = substitute(body, {{v.name, Term::variable(sv.name)}});
        }
        prefix_names.insert(sv.name);
        vars.push_back(std::move(sv));
      }
      t = std::move(body);
    }

    std::vector<Term> premises;
    std::optional<Term> head;
    split(t, premises, head);

    Clause clause;
    clause.vars = std::move(vars);
    std::vector<Term> constraints;
    for (const auto& p : premises) collect_conjuncts(p, clause.body, constraints);
    if (constraints.empty()) {
      clause.constraint = Term::app("true");
    } else if (constraints.size() == 1) {
      clause.constraint = std::move(constraints[0]);
    } else {
      clause.constraint = Term::app("and", std::move(constraints));
    }
    if (head) clause.head = make_atom(*head);

    validate(clause, prefix_names);
    return clause;
  }

  // Recognises the implication shapes and separates premises from the head.
  void split(const Term& raw, std::vector<Term>& premises, std::optional<Term>& head) {
    const Term& t = strip_annotation(raw);
    if (t.is_app("=>") && t.args.size() >= 2) {
      for (std::size_t i = 0; i + 1 < t.args.size(); ++i) premises.push_back(t.args[i]);
      split(t.args.back(), premises, head);
      return;
    }
    if (t.is_app("or") && !t.args.empty()) {
      for (const auto& raw_d : t.args) {
        const Term& d = strip_annotation(raw_d);
        if (d.is_app("not") && d.args.size() == 1) {
          premises.push_back(d.args[0]);
        } else if (is_atom(d)) {
          if (head) throw ChcError(Kind::NotHorn, "clause has more than one positive atom");
          head = d;
        } else if (d.is_app("false") && d.args.empty()) {
          continue;
        } else {
          if (contains_predicate(d)) {
            throw ChcError(Kind::NotHorn, "uninterpreted atom nested inside a disjunct");
          }
          premises.push_back(Term::app("not", {d}));
        }
      }
      return;
    }
    if (t.is_app("not") && t.args.size() == 1) {
      premises.push_back(t.args[0]);
      return;
    }
    if (is_atom(t)) {
      if (head) throw ChcError(Kind::NotHorn, "clause has more than one positive atom");
      head = t;
      return;
    }
    if (t.is_app("false") && t.args.empty()) return;
    if (t.kind == TermKind::Forall) {
      throw ChcError(Kind::NotHorn, "quantifier below the clause head");
    }
    throw ChcError(Kind::NotHorn, "head is neither false nor an uninterpreted atom");
  }

  void collect_conjuncts(const Term& raw, std::vector<Atom>& atoms, std::vector<Term>& constraints) {
    const Term& t = strip_annotation(raw);
    if (t.is_app("and")) {
      for (const auto& a : t.args) collect_conjuncts(a, atoms, constraints);
      return;
    }
    if (t.is_app("true") && t.args.empty()) return;
    if (is_atom(t)) {
      atoms.push_back(make_atom(t));
      return;
    }
    if (contains_predicate(t)) {
      throw ChcError(Kind::NotHorn, "uninterpreted atom inside the constraint");
    }
    constraints.push_back(t);
  }

  Atom make_atom(const Term& t) const {
    std::size_t arity = predicates_.at(t.fn.symbol);
    if (t.args.size() != arity) {
      throw ChcError(Kind::ArityMismatch, "predicate '" + t.fn.symbol + "' expects " +
                                              std::to_string(arity) + " argument(s), got " +
                                              std::to_string(t.args.size()));
    }
    for (const auto& a : t.args) {
      if (contains_predicate(a)) {
        throw ChcError(Kind::NotHorn, "uninterpreted atom used as a predicate argument");
      }
    }
    return Atom{t.fn.symbol, t.args};
  }

  bool contains_predicate(const Term& t) const {
    if (is_atom(t)) return true;
    for (const auto& a : t.args) {
      if (contains_predicate(a)) return true;
    }
    return false;
  }

  void validate(const Clause& c, const std::set<std::string>& bound) const {
    check_symbols(c.constraint);
    for (const auto& a : c.body) {
      for (const auto& t : a.args) check_symbols(t);
    }
    if (c.head) {
      for (const auto& t : c.head->args) check_symbols(t);
    }
    auto check_free = [&](const Term& t) {
      for (const auto& v : free_variables(t)) {
        if (!bound.count(v)) throw ChcError(Kind::UnboundVariable, "variable '" + v + "' is unbound");
      }
    };
    check_free(c.constraint);
    for (const auto& a : c.body) {
      for (const auto& t : a.args) check_free(t);
    }
    if (c.head) {
      for (const auto& t : c.head->args) check_free(t);
    }
  }

  void check_symbols(const Term& t) const {
    for (const auto& a : t.args) check_symbols(a);
    if (t.kind != TermKind::Application) return;
    const Identifier& fn = t.fn;
    if (!fn.indices.empty()) {
      if (fn.symbol == "is" && fn.indices.size() == 1) {
        if (!constructors_.count(fn.indices[0])) {
          throw ChcError(Kind::UndeclaredPredicate,
                         "tester for unknown constructor '" + fn.indices[0] + "'");
        }
        expect_arity(fn.symbol, t, 1);
      }
      return;  // other indexed symbols are left to the categorizer
    }
    if (detail::theory_of(fn.symbol) != detail::SymbolTheory::None) return;
    if (auto it = adt_functions_.find(fn.symbol); it != adt_functions_.end()) {
      expect_arity(fn.symbol, t, it->second.arity);
      return;
    }
    if (predicates_.count(fn.symbol)) return;  // rejected earlier where it matters
    if (t.args.empty()) {
      throw ChcError(Kind::UnboundVariable, "unknown symbol '" + fn.symbol + "'");
    }
    throw ChcError(Kind::UndeclaredPredicate, "undeclared symbol '" + fn.symbol + "'");
  }

  static void expect_arity(const std::string& name, const Term& t, std::size_t arity) {
    if (t.args.size() != arity) {
      throw ChcError(Kind::ArityMismatch, "'" + name + "' expects " + std::to_string(arity) +
                                              " argument(s), got " + std::to_string(t.args.size()));
    }
  }

  std::set<std::string> names_;
  std::map<std::string, std::size_t> predicates_;
  std::map<std::string, Signature> adt_functions_;
  std::set<std::string> constructors_;
};

}  // namespace

ChcSystem to_chc_system(const Script& script) { return Converter{}.run(script); }

}  // namespace chccomp
