#include "chccomp/normalizer.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "chccomp/digest.hpp"
#include "chccomp/frontend.hpp"

namespace chccomp {

const char* to_string(Transformation t) {
  switch (t) {
    case Transformation::SetLogic: return "set_logic";
    case Transformation::ReorderCommands: return "reorder_commands";
    case Transformation::GroupDatatypes: return "group_datatypes";
    case Transformation::MergeQueries: return "merge_queries";
    case Transformation::AddCheckSat: return "add_check_sat";
  }
  return "?";
}

const char* to_string(RejectionKind k) {
  switch (k) {
    case RejectionKind::NotHorn: return "RejectNotHorn";
    case RejectionKind::UnsupportedCommand: return "RejectUnsupportedCommand";
    case RejectionKind::ParametricDatatype: return "RejectParametricDatatype";
    case RejectionKind::QueryCount: return "RejectQueryCount";
    case RejectionKind::Malformed: return "RejectMalformed";
  }
  return "?";
}

namespace {

std::set<std::string> used_names(const ChcSystem& sys) {
  std::set<std::string> names;
  for (const auto& p : sys.predicates) names.insert(p.name);
  for (const auto& g : sys.datatype_groups) {
    for (const auto& d : g) {
      names.insert(d.name);
      for (const auto& c : d.constructors) {
        names.insert(c.name);
        for (const auto& s : c.selectors) names.insert(s.name);
      }
    }
  }
  for (const auto& c : sys.clauses) {
    for (const auto& v : c.vars) names.insert(v.name);
  }
  return names;
}

}  // namespace

ChcSystem merge_queries(const ChcSystem& system) {
  if (system.query_count() <= 1) return system;
  auto used = used_names(system);
  std::string goal;
  for (std::size_t k = 0;; ++k) {
    goal = kMergedQueryPrefix + std::to_string(k);
    if (!used.count(goal)) break;
  }
  ChcSystem out = system;
  out.predicates.push_back(Predicate{goal, {}});
  for (auto& c : out.clauses) {
    if (c.is_query()) c.head = Atom{goal, {}};
  }
  Clause final_query;
  final_query.body.push_back(Atom{goal, {}});
  final_query.constraint = Term::app("true");
  out.clauses.push_back(std::move(final_query));
  return out;
}

namespace {

void mentioned_sorts(const Sort& s, std::vector<std::string>& out) {
  if (s.params.empty()) out.push_back(s.name);
  for (const auto& p : s.params) mentioned_sorts(p, out);
}

}  // namespace

std::vector<std::vector<DatatypeDecl>> group_datatypes(const std::vector<DatatypeDecl>& decls) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < decls.size(); ++i) index.emplace(decls[i].name, i);

  std::vector<std::size_t> parent(decls.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < decls.size(); ++i) {
    for (const auto& c : decls[i].constructors) {
      for (const auto& s : c.selectors) {
        std::vector<std::string> refs;
        mentioned_sorts(s.sort, refs);
        for (const auto& r : refs) {
          auto it = index.find(r);
          if (it == index.end()) continue;
          std::size_t a = find(i), b = find(it->second);
          // Root at the smaller index so the component id is its earliest member.
          if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
      }
    }
  }
  std::vector<std::vector<DatatypeDecl>> groups;
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < decls.size(); ++i) {
    std::size_t root = find(i);
    auto [it, fresh] = slot.emplace(root, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(decls[i]);
  }
  return groups;
}

namespace {

int section_rank(const Command& c) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, cmd::SetLogic>) return 0;
        if constexpr (std::is_same_v<T, cmd::SetInfo>) return 1;
        if constexpr (std::is_same_v<T, cmd::DeclareDatatypes>) return 2;
        if constexpr (std::is_same_v<T, cmd::DeclareFun>) return 3;
        if constexpr (std::is_same_v<T, cmd::Assert>) return 4;
        if constexpr (std::is_same_v<T, cmd::CheckSat>) return 5;
        if constexpr (std::is_same_v<T, cmd::GetModel>) return 6;
        if constexpr (std::is_same_v<T, cmd::Exit>) return 7;
        return 8;
      },
      c);
}

RejectionKind rejection_for(ChcError::Kind k) {
  switch (k) {
    case ChcError::Kind::NotHorn: return RejectionKind::NotHorn;
    case ChcError::Kind::UnsupportedCommand: return RejectionKind::UnsupportedCommand;
    default: return RejectionKind::Malformed;
  }
}

NormalizationResult rejected(RejectionKind kind, std::string message) {
  NormalizationResult r;
  r.rejection = Rejection{kind, std::move(message)};
  return r;
}

}  // namespace

NormalizationResult normalize(const Script& script, const NormalizationOptions& options) {
  for (const auto& c : script.commands) {
    if (std::holds_alternative<cmd::Unsupported>(c)) {
      return rejected(RejectionKind::UnsupportedCommand,
                      "unsupported command '" + command_name(c) + "'");
    }
  }
  ChcSystem system;
  try {
    system = to_chc_system(script);
  } catch (const ChcError& e) {
    return rejected(rejection_for(e.kind()), std::string(to_string(e.kind())) + ": " + e.what());
  }

  NormalizationResult result;
  std::size_t queries = system.query_count();
  ChcSystem merged = system;
  if (queries == 0) return rejected(RejectionKind::QueryCount, "no query clause");
  if (queries > 1) {
    if (!options.merge_queries) {
      return rejected(RejectionKind::QueryCount,
                      std::to_string(queries) + " query clauses and query merging is disabled");
    }
    merged = merge_queries(system);
  }

  // Section order check on the input.
  bool have_logic = false, have_check_sat = false, have_get_model = false, have_exit = false;
  bool in_order = true;
  int last_rank = -1;
  std::size_t get_models = 0, exits = 0;
  std::vector<DatatypeDecl> all_decls;
  std::vector<cmd::DeclareDatatypes> input_groups;
  for (const auto& c : script.commands) {
    int r = section_rank(c);
    if (r < last_rank) in_order = false;
    last_rank = r;
    if (auto* l = std::get_if<cmd::SetLogic>(&c)) have_logic = l->logic == "HORN";
    if (std::holds_alternative<cmd::CheckSat>(c)) have_check_sat = true;
    if (std::holds_alternative<cmd::GetModel>(c)) have_get_model = true, ++get_models;
    if (std::holds_alternative<cmd::Exit>(c)) have_exit = true, ++exits;
    if (auto* d = std::get_if<cmd::DeclareDatatypes>(&c)) {
      input_groups.push_back(*d);
      all_decls.insert(all_decls.end(), d->decls.begin(), d->decls.end());
    }
  }
  if (get_models > 1 || exits > 1) in_order = false;

  Script out;
  out.commands.emplace_back(cmd::SetLogic{"HORN"});
  for (const auto& c : script.commands) {
    if (std::holds_alternative<cmd::SetInfo>(c)) out.commands.push_back(c);
  }
  std::vector<cmd::DeclareDatatypes> output_groups;
  for (auto& g : group_datatypes(all_decls)) output_groups.push_back(cmd::DeclareDatatypes{std::move(g)});
  for (const auto& g : output_groups) out.commands.emplace_back(g);
  for (const auto& c : script.commands) {
    if (std::holds_alternative<cmd::DeclareFun>(c)) out.commands.push_back(c);
  }
  if (queries > 1) {
    const Predicate& goal = merged.predicates.back();
    out.commands.emplace_back(cmd::DeclareFun{goal.name, {}, Sort::simple("Bool")});
  }
  std::size_t clause_index = 0;
  for (const auto& c : script.commands) {
    if (!std::holds_alternative<cmd::Assert>(c)) continue;
    if (queries > 1 && system.clauses[clause_index].is_query()) {
      out.commands.emplace_back(cmd::Assert{clause_to_term(merged.clauses[clause_index])});
    } else {
      out.commands.push_back(c);
    }
    ++clause_index;
  }
  if (queries > 1) out.commands.emplace_back(cmd::Assert{clause_to_term(merged.clauses.back())});
  out.commands.emplace_back(cmd::CheckSat{});
  if (have_get_model) out.commands.emplace_back(cmd::GetModel{});
  if (have_exit) out.commands.emplace_back(cmd::Exit{});

  if (!have_logic || !std::holds_alternative<cmd::SetLogic>(script.commands.front())) {
    result.transformations.push_back(Transformation::SetLogic);
  }
  if (!in_order) result.transformations.push_back(Transformation::ReorderCommands);
  if (output_groups != input_groups) result.transformations.push_back(Transformation::GroupDatatypes);
  if (queries > 1) result.transformations.push_back(Transformation::MergeQueries);
  if (!have_check_sat) result.transformations.push_back(Transformation::AddCheckSat);
  result.script = std::move(out);
  return result;
}

NormalizationResult normalize_text(const std::string& text, const NormalizationOptions& options) {
  Script script;
  try {
    script = parse_script(text);
  } catch (const ParametricDatatypeError& e) {
    return rejected(RejectionKind::ParametricDatatype, e.what());
  } catch (const SyntaxError& e) {
    return rejected(RejectionKind::Malformed, e.what());
  }
  if (script.commands.empty()) return rejected(RejectionKind::Malformed, "empty script");
  return normalize(script, options);
}

namespace {

class AlphaRenamer {
 public:
  Term rename(const Term& t) {
    switch (t.kind) {
      case TermKind::Variable: {
        auto it = scope_.find(t.name);
        if (it == scope_.end() || it->second.empty()) return t;
        return Term::variable(it->second.back());
      }
      case TermKind::Constant:
        return t;
      case TermKind::Application:
      case TermKind::Annotated: {
        Term out = t;
        for (auto& a : out.args) a = rename(a);
        return out;
      }
      case TermKind::Forall:
      case TermKind::Exists: {
        Term out = t;
        for (auto& v : out.vars) {
          std::string fresh = next();
          scope_[v.name].push_back(fresh);
          v.name = fresh;
        }
        out.args[0] = rename(t.body());
        for (const auto& v : t.vars) scope_[v.name].pop_back();
        return out;
      }
      case TermKind::Let: {
        Term out = t;
        for (std::size_t i = 0; i < t.binders.size(); ++i) out.args[i] = rename(t.args[i]);
        for (auto& b : out.binders) {
          std::string fresh = next();
          scope_[b].push_back(fresh);
          b = fresh;
        }
        out.args.back() = rename(t.body());
        for (const auto& b : t.binders) scope_[b].pop_back();
        return out;
      }
    }
    return t;
  }

 private:
  std::string next() { return "v" + std::to_string(counter_++); }

  std::map<std::string, std::vector<std::string>> scope_;
  std::size_t counter_ = 0;
};

}  // namespace

Script canonical_form(const Script& script) {
  Script out;
  std::vector<std::pair<std::pair<int, std::string>, Command>> decls;
  std::vector<Command> rest;
  for (const auto& c : script.commands) {
    if (std::holds_alternative<cmd::SetInfo>(c)) continue;
    if (auto* d = std::get_if<cmd::DeclareDatatypes>(&c)) {
      decls.push_back({{0, d->decls.empty() ? "" : d->decls.front().name}, c});
    } else if (auto* f = std::get_if<cmd::DeclareFun>(&c)) {
      decls.push_back({{1, f->name}, c});
    } else if (auto* a = std::get_if<cmd::Assert>(&c)) {
      rest.emplace_back(cmd::Assert{AlphaRenamer{}.rename(a->term)});
    } else if (!std::holds_alternative<cmd::SetLogic>(c)) {
      rest.push_back(c);
    }
  }
  std::stable_sort(decls.begin(), decls.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  out.commands.emplace_back(cmd::SetLogic{"HORN"});
  for (auto& d : decls) out.commands.push_back(std::move(d.second));
  for (auto& c : rest) out.commands.push_back(std::move(c));
  return out;
}

std::string fingerprint(const Script& script) {
  auto r = normalize(script);
  if (!r.ok()) throw Error("cannot fingerprint a rejected script: " + r.rejection->message);
  return sha256_hex(print_script(canonical_form(*r.script)));
}

std::optional<std::string> FingerprintIndex::insert(const std::string& fp, const std::string& owner) {
  std::lock_guard lock(mu_);
  auto [it, fresh] = owners_.emplace(fp, owner);
  if (fresh) return std::nullopt;
  return it->second;
}

std::size_t FingerprintIndex::size() const {
  std::lock_guard lock(mu_);
  return owners_.size();
}

}  // namespace chccomp
