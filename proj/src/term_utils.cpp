#include <map>
#include <set>
#include <string>

#include "chccomp/chc.hpp"

namespace chccomp {

namespace {

void collect_free(const Term& t, std::multiset<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind) {
    case TermKind::Variable:
      if (!bound.count(t.name)) out.insert(t.name);
      return;
    case TermKind::Constant:
      return;
    case TermKind::Application:
    case TermKind::Annotated:
      for (const auto& a : t.args) collect_free(a, bound, out);
      return;
    case TermKind::Forall:
    case TermKind::Exists:
      for (const auto& v : t.vars) bound.insert(v.name);
      collect_free(t.body(), bound, out);
      for (const auto& v : t.vars) bound.erase(bound.find(v.name));
      return;
    case TermKind::Let:
      for (std::size_t i = 0; i < t.binders.size(); ++i) collect_free(t.args[i], bound, out);
      for (const auto& b : t.binders) bound.insert(b);
      collect_free(t.body(), bound, out);
      for (const auto& b : t.binders) bound.erase(bound.find(b));
      return;
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (std::size_t k = 1;; ++k) {
    std::string candidate = base + "!" + std::to_string(k);
    if (!avoid.count(candidate)) return candidate;
  }
}

// Handles the binder part of quantifiers and lets: drops shadowed entries and
// renames binders that would capture a free variable of a replacement.
std::map<std::string, Term> enter_scope(std::vector<std::string>& names, const Term& body,
                                        const std::map<std::string, Term>& outer) {
  std::map<std::string, Term> inner = outer;
  for (const auto& n : names) inner.erase(n);
  if (inner.empty()) return inner;

  std::set<std::string> body_free = free_variables(body);
  std::set<std::string> incoming;
  for (const auto& [name, repl] : inner) {
    if (!body_free.count(name)) continue;
    auto fv = free_variables(repl);
    incoming.insert(fv.begin(), fv.end());
  }
  std::set<std::string> avoid = incoming;
  avoid.insert(body_free.begin(), body_free.end());
  avoid.insert(names.begin(), names.end());
  for (auto& n : names) {
    if (!incoming.count(n)) continue;
    std::string renamed = fresh_name(n, avoid);
    avoid.insert(renamed);
    inner[n] = Term::variable(renamed);
    n = renamed;
  }
  return inner;
}

}  // namespace

std::set<std::string> free_variables(const Term& term) {
  std::multiset<std::string> bound;
  std::set<std::string> out;
  collect_free(term, bound, out);
  return out;
}

Term substitute(const Term& t, const std::map<std::string, Term>& m) {
  if (m.empty()) return t;
  switch (t.kind) {
    case TermKind::Variable: {
      auto it = m.find(t.name);
      return it == m.end() ? t : it->second;
    }
    case TermKind::Constant:
      return t;
    case TermKind::Application:
    case TermKind::Annotated: {
      Term out = t;
      for (auto& a : out.args) a = substitute(a, m);
      return out;
    }
    case TermKind::Forall:
    case TermKind::Exists: {
      Term out = t;
      std::vector<std::string> names;
      for (const auto& v : t.vars) names.push_back(v.name);
      auto inner = enter_scope(names, t.body(), m);
      for (std::size_t i = 0; i < names.size(); ++i) out.vars[i].name = names[i];
      out.args[0] = substitute(t.body(), inner);
      return out;
    }
    case TermKind::Let: {
      Term out = t;
      for (std::size_t i = 0; i < t.binders.size(); ++i) out.args[i] = substitute(t.args[i], m);
      auto inner = enter_scope(out.binders, t.body(), m);
      out.args.back() = substitute(t.body(), inner);
      return out;
    }
  }
  return t;
}

Term expand_lets(const Term& t) {
  switch (t.kind) {
    case TermKind::Variable:
    case TermKind::Constant:
      return t;
    case TermKind::Application:
    case TermKind::Annotated:
    case TermKind::Forall:
    case TermKind::Exists: {
      Term out = t;
      for (auto& a : out.args) a = expand_lets(a);
      return out;
    }
    case TermKind::Let: {
      std::map<std::string, Term> m;
      for (std::size_t i = 0; i < t.binders.size(); ++i) m[t.binders[i]] = expand_lets(t.args[i]);
      Term body = expand_lets(t.body());
      Term out = substitute(body, m);
      out.loc = t.loc;
      return out;
    }
  }
  return t;
}

std::size_t count_predicate_applications(const Term& t, const std::set<std::string>& predicates) {
  std::size_t n = 0;
  if (t.kind == TermKind::Application && t.fn.indices.empty() && !t.fn.qualifier &&
      predicates.count(t.fn.symbol)) {
    ++n;
  }
  for (const auto& a : t.args) n += count_predicate_applications(a, predicates);
  return n;
}

}  // namespace chccomp
