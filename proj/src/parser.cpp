#include <set>
#include <string>
#include <unordered_map>

#include "chccomp/frontend.hpp"

namespace chccomp {

Term Term::variable(std::string name) {
  Term t;
  t.kind = TermKind::Variable;
  t.name = std::move(name);
  return t;
}

Term Term::constant(AtomKind kind, std::string text) {
  Term t;
  t.kind = TermKind::Constant;
  t.constant_kind = kind;
  t.name = std::move(text);
  return t;
}

Term Term::app(std::string symbol, std::vector<Term> args) {
  return app(Identifier{std::move(symbol), {}, std::nullopt}, std::move(args));
}

Term Term::app(Identifier fn, std::vector<Term> args) {
  Term t;
  t.kind = TermKind::Application;
  t.fn = std::move(fn);
  t.args = std::move(args);
  return t;
}

Term Term::quantifier(TermKind kind, std::vector<SortedVar> vars, Term body) {
  Term t;
  t.kind = kind;
  t.vars = std::move(vars);
  t.args.push_back(std::move(body));
  return t;
}

Term Term::let(std::vector<std::string> binders, std::vector<Term> values, Term body) {
  Term t;
  t.kind = TermKind::Let;
  t.binders = std::move(binders);
  t.args = std::move(values);
  t.args.push_back(std::move(body));
  return t;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Variable:
      return a.name == b.name;
    case TermKind::Constant:
      return a.constant_kind == b.constant_kind && a.name == b.name;
    case TermKind::Application:
      return a.fn == b.fn && a.args == b.args;
    case TermKind::Forall:
    case TermKind::Exists:
      return a.vars == b.vars && a.args == b.args;
    case TermKind::Let:
      return a.binders == b.binders && a.args == b.args;
    case TermKind::Annotated:
      return a.attributes == b.attributes && a.args == b.args;
  }
  return false;
}

std::string command_name(const Command& c) {
  struct Visitor {
    std::string operator()(const cmd::SetLogic&) const { return "set-logic"; }
    std::string operator()(const cmd::SetInfo&) const { return "set-info"; }
    std::string operator()(const cmd::DeclareFun&) const { return "declare-fun"; }
    std::string operator()(const cmd::DeclareDatatypes&) const { return "declare-datatypes"; }
    std::string operator()(const cmd::Assert&) const { return "assert"; }
    std::string operator()(const cmd::CheckSat&) const { return "check-sat"; }
    std::string operator()(const cmd::Exit&) const { return "exit"; }
    std::string operator()(const cmd::GetModel&) const { return "get-model"; }
    std::string operator()(const cmd::Unsupported& u) const {
      if (u.raw.is_list && !u.raw.children.empty() && u.raw.children[0].is_symbol()) {
        return u.raw.children[0].text;
      }
      return "<unsupported>";
    }
  };
  return std::visit(Visitor{}, c);
}

namespace {

// Raised for syntactically valid constructs the CHC subset does not cover.
struct UnsupportedConstruct {
  std::string what;
};

const SExpr& expect_symbol(const SExpr& e, const char* what) {
  if (!e.is_symbol()) throw ParseError(std::string("expected symbol for ") + what, e.loc);
  return e;
}

const SExpr& expect_list(const SExpr& e, const char* what) {
  if (!e.is_list) throw ParseError(std::string("expected list for ") + what, e.loc);
  return e;
}

std::string index_text(const SExpr& e) {
  if (e.is_list || (e.kind != AtomKind::Numeral && e.kind != AtomKind::Symbol)) {
    throw ParseError("bad index", e.loc);
  }
  return e.text;
}

Sort parse_sort(const SExpr& e) {
  if (e.is_symbol()) return Sort::simple(e.text);
  if (!e.is_list || e.children.empty()) throw ParseError("malformed sort", e.loc);
  const auto& ch = e.children;
  if (ch[0].is_symbol("_")) {
    if (ch.size() < 3) throw ParseError("malformed indexed sort", e.loc);
    Sort s;
    s.name = expect_symbol(ch[1], "sort name").text;
    for (std::size_t i = 2; i < ch.size(); ++i) s.indices.push_back(index_text(ch[i]));
    return s;
  }
  if (ch.size() < 2) throw ParseError("sort application without parameters", e.loc);
  Sort s;
  s.name = expect_symbol(ch[0], "sort name").text;
  for (std::size_t i = 1; i < ch.size(); ++i) s.params.push_back(parse_sort(ch[i]));
  return s;
}

Identifier parse_identifier(const SExpr& e) {
  if (e.is_symbol()) return Identifier{e.text, {}, std::nullopt};
  if (!e.is_list || e.children.empty()) throw ParseError("malformed identifier", e.loc);
  const auto& ch = e.children;
  if (ch[0].is_symbol("_")) {
    if (ch.size() < 3) throw ParseError("malformed indexed identifier", e.loc);
    Identifier id;
    id.symbol = expect_symbol(ch[1], "identifier").text;
    for (std::size_t i = 2; i < ch.size(); ++i) id.indices.push_back(index_text(ch[i]));
    return id;
  }
  if (ch[0].is_symbol("as")) {
    if (ch.size() != 3) throw ParseError("malformed qualified identifier", e.loc);
    Identifier id = parse_identifier(ch[1]);
    if (id.qualifier) throw ParseError("doubly qualified identifier", e.loc);
    id.qualifier = parse_sort(ch[2]);
    return id;
  }
  throw ParseError("malformed identifier", e.loc);
}

class TermParser {
 public:
  Term parse(const SExpr& e) {
    Term t = parse_inner(e);
    t.loc = e.loc;
    return t;
  }

 private:
  Term parse_inner(const SExpr& e) {
    if (!e.is_list) {
      switch (e.kind) {
        case AtomKind::Symbol:
          if (bound(e.text)) return Term::variable(e.text);
          return Term::app(e.text);
        case AtomKind::Keyword:
          throw ParseError("keyword in term position", e.loc);
        default:
          return Term::constant(e.kind, e.text);
      }
    }
    const auto& ch = e.children;
    if (ch.empty()) throw ParseError("empty term", e.loc);
    const SExpr& head = ch[0];
    if (head.is_symbol()) {
      const std::string& h = head.text;
      if (h == "forall" || h == "exists") return parse_quantifier(e, h == "forall");
      if (h == "let") return parse_let(e);
      if (h == "!") return parse_annotation(e);
      if (h == "match") throw UnsupportedConstruct{"match"};
      if (h == "_" || h == "as") return Term::app(parse_identifier(e), {});
      if (ch.size() < 2) throw ParseError("application without arguments", e.loc);
      if (bound(h)) throw ParseError("variable '" + h + "' applied as a function", head.loc);
    }
    Identifier fn = parse_identifier(head);
    std::vector<Term> args;
    args.reserve(ch.size() - 1);
    for (std::size_t i = 1; i < ch.size(); ++i) args.push_back(parse(ch[i]));
    return Term::app(std::move(fn), std::move(args));
  }

  Term parse_quantifier(const SExpr& e, bool is_forall) {
    const auto& ch = e.children;
    if (ch.size() != 3) throw ParseError("malformed quantifier", e.loc);
    const SExpr& decls = expect_list(ch[1], "quantifier variables");
    if (decls.children.empty()) throw ParseError("quantifier without variables", e.loc);
    std::vector<SortedVar> vars;
    for (const SExpr& d : decls.children) {
      if (!d.is_list || d.children.size() != 2) throw ParseError("malformed sorted variable", d.loc);
      vars.push_back({expect_symbol(d.children[0], "variable").text, parse_sort(d.children[1])});
    }
    for (const auto& v : vars) push(v.name);
    Term body = parse(ch[2]);
    for (const auto& v : vars) pop(v.name);
    return Term::quantifier(is_forall ? TermKind::Forall : TermKind::Exists, std::move(vars),
                            std::move(body));
  }

  Term parse_let(const SExpr& e) {
    const auto& ch = e.children;
    if (ch.size() != 3) throw ParseError("malformed let", e.loc);
    const SExpr& bindings = expect_list(ch[1], "let bindings");
    if (bindings.children.empty()) throw ParseError("let without bindings", e.loc);
    std::vector<std::string> names;
    std::vector<Term> values;
    for (const SExpr& b : bindings.children) {
      if (!b.is_list || b.children.size() != 2) throw ParseError("malformed let binding", b.loc);
      names.push_back(expect_symbol(b.children[0], "let variable").text);
      values.push_back(parse(b.children[1]));  // parallel let: outer scope
    }
    for (const auto& n : names) push(n);
    Term body = parse(ch[2]);
    for (const auto& n : names) pop(n);
    return Term::let(std::move(names), std::move(values), std::move(body));
  }

  Term parse_annotation(const SExpr& e) {
    const auto& ch = e.children;
    if (ch.size() < 3 || ch[2].is_list || ch[2].kind != AtomKind::Keyword) {
      throw ParseError("malformed annotation", e.loc);
    }
    Term t;
    t.kind = TermKind::Annotated;
    t.args.push_back(parse(ch[1]));
    t.attributes.assign(ch.begin() + 2, ch.end());
    return t;
  }

  bool bound(const std::string& name) const {
    auto it = scope_.find(name);
    return it != scope_.end() && it->second > 0;
  }
  void push(const std::string& name) { ++scope_[name]; }
  void pop(const std::string& name) { --scope_[name]; }

  std::unordered_map<std::string, int> scope_;
};

cmd::DeclareDatatypes parse_datatypes(const SExpr& e) {
  const auto& ch = e.children;
  if (ch.size() != 3) throw ParseError("declare-datatypes expects two arguments", e.loc);
  const SExpr& sorts = expect_list(ch[1], "datatype sort declarations");
  const SExpr& bodies = expect_list(ch[2], "datatype declarations");
  if (sorts.children.empty()) throw ParseError("declare-datatypes without sorts", e.loc);

  cmd::DeclareDatatypes out;
  for (const SExpr& s : sorts.children) {
    if (!s.is_list || s.children.size() != 2 || s.children[1].is_list ||
        s.children[1].kind != AtomKind::Numeral) {
      throw ParseError("malformed datatype sort declaration", s.loc);
    }
    if (s.children[1].text != "0") {
      throw ParametricDatatypeError(
          "datatype '" + s.children[0].text + "' has " + s.children[1].text + " parameters",
          s.loc);
    }
    out.decls.push_back(DatatypeDecl{expect_symbol(s.children[0], "datatype name").text, {}});
  }
  // Parameter checks come first so a parametric group reports as such even
  // when its body is otherwise unusual.
  for (const SExpr& body : bodies.children) {
    if (body.is_list && !body.children.empty() && body.children[0].is_symbol("par")) {
      throw ParametricDatatypeError("datatype declaration uses 'par'", body.loc);
    }
  }
  if (bodies.children.size() != out.decls.size()) {
    throw ParseError("datatype sort and body counts differ", e.loc);
  }

  std::set<std::string> seen;
  auto claim = [&](const std::string& name, SourceLocation loc) {
    if (!seen.insert(name).second) {
      throw ParseError("duplicate name '" + name + "' in datatype group", loc);
    }
  };
  for (const auto& d : out.decls) claim(d.name, e.loc);

  for (std::size_t i = 0; i < out.decls.size(); ++i) {
    const SExpr& body = bodies.children[i];
    if (!body.is_list || body.children.empty()) {
      throw ParseError("datatype needs at least one constructor", body.loc);
    }
    for (const SExpr& c : body.children) {
      if (!c.is_list || c.children.empty()) throw ParseError("malformed constructor", c.loc);
      Constructor ctor;
      ctor.name = expect_symbol(c.children[0], "constructor").text;
      claim(ctor.name, c.loc);
      for (std::size_t k = 1; k < c.children.size(); ++k) {
        const SExpr& sel = c.children[k];
        if (!sel.is_list || sel.children.size() != 2) {
          throw ParseError("malformed selector", sel.loc);
        }
        Selector s{expect_symbol(sel.children[0], "selector").text, parse_sort(sel.children[1])};
        claim(s.name, sel.loc);
        ctor.selectors.push_back(std::move(s));
      }
      out.decls[i].constructors.push_back(std::move(ctor));
    }
  }
  return out;
}

Command parse_command(const SExpr& e) {
  if (!e.is_list || e.children.empty()) throw ParseError("expected a command", e.loc);
  const auto& ch = e.children;
  if (!ch[0].is_symbol()) throw ParseError("command name must be a symbol", e.loc);
  const std::string& name = ch[0].text;
  auto arity = [&](std::size_t n) {
    if (ch.size() != n + 1) throw ParseError(name + " expects " + std::to_string(n) + " argument(s)", e.loc);
  };

  if (name == "set-logic") {
    arity(1);
    return cmd::SetLogic{expect_symbol(ch[1], "logic").text};
  }
  if (name == "set-info") {
    if (ch.size() < 2 || ch.size() > 3 || ch[1].is_list || ch[1].kind != AtomKind::Keyword) {
      throw ParseError("malformed set-info", e.loc);
    }
    cmd::SetInfo info{ch[1].text, std::nullopt};
    if (ch.size() == 3) info.value = ch[2];
    return info;
  }
  if (name == "declare-fun") {
    arity(3);
    cmd::DeclareFun f;
    f.name = expect_symbol(ch[1], "function name").text;
    for (const SExpr& s : expect_list(ch[2], "argument sorts").children) f.args.push_back(parse_sort(s));
    f.result = parse_sort(ch[3]);
    return f;
  }
  if (name == "declare-datatypes") return parse_datatypes(e);
  if (name == "assert") {
    arity(1);
    try {
      return cmd::Assert{TermParser{}.parse(ch[1])};
    } catch (const UnsupportedConstruct&) {
      return cmd::Unsupported{e};
    }
  }
  if (name == "check-sat") {
    arity(0);
    return cmd::CheckSat{};
  }
  if (name == "exit") {
    arity(0);
    return cmd::Exit{};
  }
  if (name == "get-model") {
    arity(0);
    return cmd::GetModel{};
  }
  return cmd::Unsupported{e};
}

}  // namespace

Script parse_script(std::string_view text) {
  Script script;
  bool have_logic = false;
  for (const SExpr& e : read_sexprs(text)) {
    Command c = parse_command(e);
    if (std::holds_alternative<cmd::SetLogic>(c)) {
      if (have_logic) throw ParseError("duplicate set-logic", e.loc);
      have_logic = true;
    }
    script.commands.push_back(std::move(c));
  }
  return script;
}

Term parse_term(std::string_view text) {
  auto exprs = read_sexprs(text);
  if (exprs.size() != 1) throw ParseError("expected exactly one term", SourceLocation{});
  try {
    return TermParser{}.parse(exprs[0]);
  } catch (const UnsupportedConstruct& u) {
    throw ParseError("unsupported construct '" + u.what + "'", exprs[0].loc);
  }
}

}  // namespace chccomp
