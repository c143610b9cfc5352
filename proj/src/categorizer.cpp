#include "chccomp/categorizer.hpp"

#include <functional>
#include <map>
#include <set>

#include "chccomp/frontend.hpp"
#include "theory_symbols.hpp"

namespace chccomp {

const char* to_string(LiaVerdict v) {
  switch (v) {
    case LiaVerdict::NoArith: return "NoArith";
    case LiaVerdict::PureLIA: return "PureLIA";
    case LiaVerdict::SemanticallyLinear: return "SemanticallyLinear";
    case LiaVerdict::ExcludedNonlinearArith: return "ExcludedNonlinearArith";
  }
  return "?";
}

LiaVerdict join(LiaVerdict a, LiaVerdict b) { return a < b ? b : a; }

const char* track_name(Track t) {
  switch (t) {
    case Track::LIA_lin: return "LIA-lin";
    case Track::LIA_nonlin: return "LIA-nonlin";
    case Track::LIA_lin_Arrays: return "LIA-lin-Arrays";
    case Track::LIA_nonlin_Arrays: return "LIA-nonlin-Arrays";
    case Track::LIA_nonlin_Arrays_nonrecADT: return "LIA-nonlin-Arrays-nonrecADT";
    case Track::ADT_LIA_nonlin: return "ADT-LIA-nonlin";
    case Track::Uncategorized: return "Uncategorized";
  }
  return "?";
}

const std::vector<Track>& competition_tracks() {
  static const std::vector<Track> tracks = {
      Track::LIA_lin,        Track::LIA_nonlin,
      Track::LIA_lin_Arrays, Track::LIA_nonlin_Arrays,
      Track::LIA_nonlin_Arrays_nonrecADT, Track::ADT_LIA_nonlin};
  return tracks;
}

std::optional<Track> parse_track(const std::string& name) {
  for (Track t : competition_tracks()) {
    if (name == track_name(t)) return t;
  }
  if (name == "Uncategorized") return Track::Uncategorized;
  return std::nullopt;
}

std::string TrackAssignment::label() const {
  if (track != Track::Uncategorized) return track_name(track);
  return std::string("Uncategorized(") + reason + ")";
}

bool is_constant_term(const Term& t) {
  if (t.kind == TermKind::Constant) return t.constant_kind == AtomKind::Numeral;
  if (t.kind != TermKind::Application || t.args.empty()) return false;
  if (!(t.is_app("-") || t.is_app("+") || t.is_app("*") || t.is_app("div") || t.is_app("mod") ||
        t.is_app("abs"))) {
    return false;
  }
  for (const auto& a : t.args) {
    if (!is_constant_term(a)) return false;
  }
  return true;
}

namespace {

LiaVerdict verdict_of(const Term& t) {
  LiaVerdict v = LiaVerdict::NoArith;
  if (t.kind == TermKind::Constant && t.constant_kind == AtomKind::Numeral) {
    v = LiaVerdict::PureLIA;
  }
  if (t.kind == TermKind::Application && t.fn.indices.empty() && !t.fn.qualifier) {
    const std::string& s = t.fn.symbol;
    if (s == "div" || s == "mod") {
      // Rule (i): every divisor must be a constant term.
      bool ok = t.args.size() >= 2;
      for (std::size_t i = 1; i < t.args.size(); ++i) ok = ok && is_constant_term(t.args[i]);
      v = ok ? LiaVerdict::SemanticallyLinear : LiaVerdict::ExcludedNonlinearArith;
    } else if (s == "*") {
      // Rule (ii): at most one non-constant factor.
      std::size_t non_constant = 0;
      for (const auto& a : t.args) non_constant += is_constant_term(a) ? 0 : 1;
      v = non_constant > 1 ? LiaVerdict::ExcludedNonlinearArith : LiaVerdict::SemanticallyLinear;
    } else if (s == "abs") {
      v = LiaVerdict::SemanticallyLinear;
    } else if (detail::theory_of(s) == detail::SymbolTheory::IntArith) {
      v = LiaVerdict::PureLIA;
    }
  }
  for (const auto& a : t.args) v = join(v, verdict_of(a));
  return v;
}

}  // namespace

LiaVerdict arith_linearity_verdict(const Term& term) { return verdict_of(expand_lets(term)); }

namespace {

void collect_sort_refs(const Sort& s, const std::set<std::string>& declared,
                       std::set<std::string>& out) {
  if (declared.count(s.name) && s.params.empty()) out.insert(s.name);
  for (const auto& p : s.params) collect_sort_refs(p, declared, out);
}

}  // namespace

bool adt_recursive(const std::vector<DatatypeDecl>& group) {
  std::set<std::string> declared;
  for (const auto& d : group) declared.insert(d.name);
  std::map<std::string, std::set<std::string>> edges;
  for (const auto& d : group) {
    auto& out = edges[d.name];
    for (const auto& c : d.constructors) {
      for (const auto& s : c.selectors) collect_sort_refs(s.sort, declared, out);
    }
  }
  // Iterative three-colour DFS.
  enum Colour { White, Grey, Black };
  std::map<std::string, Colour> colour;
  for (const auto& n : declared) colour[n] = White;
  for (const auto& root : declared) {
    if (colour[root] != White) continue;
    std::vector<std::pair<std::string, std::set<std::string>::const_iterator>> stack;
    colour[root] = Grey;
    stack.emplace_back(root, edges[root].cbegin());
    while (!stack.empty()) {
      auto& [node, it] = stack.back();
      if (it == edges[node].cend()) {
        colour[node] = Black;
        stack.pop_back();
        continue;
      }
      const std::string next = *it++;
      if (colour[next] == Grey) return true;
      if (colour[next] == White) {
        colour[next] = Grey;
        stack.emplace_back(next, edges[next].cbegin());
      }
    }
  }
  return false;
}

namespace {

class TheoryScanner {
 public:
  explicit TheoryScanner(const ChcSystem& sys) {
    for (const auto& g : sys.datatype_groups) {
      for (const auto& d : g) adt_sorts_.insert(d.name);
    }
  }

  void sort(const Sort& s, TheorySet& ts) const {
    if (!s.indices.empty()) {
      ts.uses_other = true;
    } else if (s.name == "Bool" && s.params.empty()) {
      ts.uses_bool = true;
    } else if (s.name == "Int" && s.params.empty()) {
      ts.uses_ints = true;
    } else if (s.name == "Real" && s.params.empty()) {
      ts.uses_reals = true;
    } else if (s.name == "Array" && s.params.size() == 2) {
      ts.uses_arrays = true;
    } else if (adt_sorts_.count(s.name) && s.params.empty()) {
      ts.uses_adts = true;
    } else {
      ts.uses_other = true;
    }
    for (const auto& p : s.params) sort(p, ts);
  }

  void term(const Term& t, TheorySet& ts) const {
    switch (t.kind) {
      case TermKind::Constant:
        switch (t.constant_kind) {
          case AtomKind::Numeral: ts.uses_ints = true; break;
          case AtomKind::Decimal: ts.uses_reals = true; break;
          default: ts.uses_other = true; break;
        }
        break;
      case TermKind::Forall:
      case TermKind::Exists:
        for (const auto& v : t.vars) sort(v.sort, ts);
        break;
      case TermKind::Application:
        if (t.fn.qualifier) sort(*t.fn.qualifier, ts);
        if (!t.fn.indices.empty() && t.fn.symbol != "is") ts.uses_other = true;
        if (t.fn.indices.empty()) {
          switch (detail::theory_of(t.fn.symbol)) {
            case detail::SymbolTheory::IntArith: ts.uses_ints = true; break;
            case detail::SymbolTheory::RealArith: ts.uses_reals = true; break;
            case detail::SymbolTheory::Arrays: ts.uses_arrays = true; break;
            default: break;
          }
        }
        break;
      default:
        break;
    }
    for (const auto& a : t.args) term(a, ts);
  }

 private:
  std::set<std::string> adt_sorts_;
};

}  // namespace

TheorySet detect_theories(const ChcSystem& system) {
  TheorySet ts;
  TheoryScanner scan(system);
  std::vector<DatatypeDecl> all_decls;
  for (const auto& g : system.datatype_groups) {
    for (const auto& d : g) {
      ts.uses_adts = true;
      all_decls.push_back(d);
      for (const auto& c : d.constructors) {
        for (const auto& s : c.selectors) scan.sort(s.sort, ts);
      }
    }
  }
  ts.adt_recursive = adt_recursive(all_decls);
  for (const auto& p : system.predicates) {
    for (const auto& s : p.arg_sorts) scan.sort(s, ts);
  }
  for (const auto& c : system.clauses) {
    for (const auto& v : c.vars) scan.sort(v.sort, ts);
    auto visit = [&](const Term& t) {
      scan.term(t, ts);
      ts.lia_verdict = join(ts.lia_verdict, arith_linearity_verdict(t));
    };
    visit(c.constraint);
    for (const auto& a : c.body) {
      for (const auto& t : a.args) visit(t);
    }
    if (c.head) {
      for (const auto& t : c.head->args) visit(t);
    }
  }
  return ts;
}

TrackAssignment assign_track(const ChcSystem& system) {
  return assign_track(system, detect_theories(system));
}

TrackAssignment assign_track(const ChcSystem& system, const TheorySet& ts) {
  auto reject = [](std::string why) { return TrackAssignment{Track::Uncategorized, std::move(why)}; };
  if (ts.lia_verdict == LiaVerdict::ExcludedNonlinearArith) {
    return reject("nonlinear arithmetic");
  }
  if (ts.uses_reals) return reject("real arithmetic");
  if (ts.uses_other) return reject("unsupported theory");
  bool linear = system_linearity(system) == Linearity::Linear;
  if (ts.uses_adts) {
    if (ts.adt_recursive) {
      if (ts.uses_arrays) return reject("recursive ADTs combined with arrays");
      return {Track::ADT_LIA_nonlin, {}};
    }
    return {Track::LIA_nonlin_Arrays_nonrecADT, {}};
  }
  if (ts.uses_arrays) return {linear ? Track::LIA_lin_Arrays : Track::LIA_nonlin_Arrays, {}};
  return {linear ? Track::LIA_lin : Track::LIA_nonlin, {}};
}

TrackAssignment categorize_text(const std::string& text) {
  try {
    return assign_track(to_chc_system(parse_script(text)));
  } catch (const ChcError& e) {
    return {Track::Uncategorized, std::string(to_string(e.kind())) + ": " + e.what()};
  } catch (const ParametricDatatypeError& e) {
    return {Track::Uncategorized, std::string("ParametricDatatype: ") + e.what()};
  } catch (const SyntaxError& e) {
    return {Track::Uncategorized, std::string("SyntaxError: ") + e.what()};
  }
}

}  // namespace chccomp
