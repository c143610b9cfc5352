#include <string>

#include "chccomp/frontend.hpp"

namespace chccomp {

namespace {

constexpr std::size_t kLineWidth = 80;

std::string render_identifier(const Identifier& id) {
  std::string out;
  if (id.indices.empty()) {
    out = quote_symbol(id.symbol);
  } else {
    out = "(_ " + quote_symbol(id.symbol);
    for (const auto& i : id.indices) out += " " + i;
    out += ")";
  }
  if (id.qualifier) out = "(as " + out + " " + print_sort(*id.qualifier) + ")";
  return out;
}

std::string render_constant(const Term& t) {
  if (t.constant_kind == AtomKind::String) return quote_string(t.name);
  return t.name;
}

std::string render_vars(const std::vector<SortedVar>& vars) {
  std::string out = "(";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += " ";
    out += "(" + quote_symbol(vars[i].name) + " " + print_sort(vars[i].sort) + ")";
  }
  return out + ")";
}

std::string flat(const Term& t) {
  switch (t.kind) {
    case TermKind::Variable:
      return quote_symbol(t.name);
    case TermKind::Constant:
      return render_constant(t);
    case TermKind::Application: {
      std::string head = render_identifier(t.fn);
      if (t.args.empty()) return head;
      std::string out = "(" + head;
      for (const auto& a : t.args) out += " " + flat(a);
      return out + ")";
    }
    case TermKind::Forall:
    case TermKind::Exists:
      return std::string("(") + (t.kind == TermKind::Forall ? "forall " : "exists ") +
             render_vars(t.vars) + " " + flat(t.body()) + ")";
    case TermKind::Let: {
      std::string out = "(let (";
      for (std::size_t i = 0; i < t.binders.size(); ++i) {
        if (i) out += " ";
        out += "(" + quote_symbol(t.binders[i]) + " " + flat(t.args[i]) + ")";
      }
      return out + ") " + flat(t.body()) + ")";
    }
    case TermKind::Annotated: {
      std::string out = "(! " + flat(t.args[0]);
      for (const auto& a : t.attributes) out += " " + to_string(a);
      return out + ")";
    }
  }
  return {};
}

std::string pad(std::size_t n) { return std::string(n, ' '); }

// `column` is where the first character of the term lands; continuation lines
// are indented two spaces deeper than that.
std::string layout(const Term& t, std::size_t column) {
  std::string f = flat(t);
  if (column + f.size() <= kLineWidth) return f;
  std::size_t inner = column + 2;
  switch (t.kind) {
    case TermKind::Variable:
    case TermKind::Constant:
      return f;
    case TermKind::Application: {
      if (t.args.empty()) return f;
      std::string out = "(" + render_identifier(t.fn);
      for (const auto& a : t.args) out += "\n" + pad(inner) + layout(a, inner);
      return out + ")";
    }
    case TermKind::Forall:
    case TermKind::Exists:
      return std::string("(") + (t.kind == TermKind::Forall ? "forall " : "exists ") +
             render_vars(t.vars) + "\n" + pad(inner) + layout(t.body(), inner) + ")";
    case TermKind::Let: {
      std::string out = "(let (";
      for (std::size_t i = 0; i < t.binders.size(); ++i) {
        std::size_t col = i == 0 ? column + 6 : inner + 3;
        if (i) out += "\n" + pad(inner + 3);
        std::string name = quote_symbol(t.binders[i]);
        out += "(" + name + " " + layout(t.args[i], col + name.size() + 2) + ")";
      }
      return out + ")\n" + pad(inner) + layout(t.body(), inner) + ")";
    }
    case TermKind::Annotated: {
      std::string out = "(! " + layout(t.args[0], column + 3);
      for (const auto& a : t.attributes) out += " " + to_string(a);
      return out + ")";
    }
  }
  return f;
}

std::string render_constructor(const Constructor& c) {
  std::string out = "(" + quote_symbol(c.name);
  for (const auto& s : c.selectors) {
    out += " (" + quote_symbol(s.name) + " " + print_sort(s.sort) + ")";
  }
  return out + ")";
}

std::string render_datatype_body(const DatatypeDecl& d) {
  std::string out = "(";
  for (std::size_t i = 0; i < d.constructors.size(); ++i) {
    if (i) out += " ";
    out += render_constructor(d.constructors[i]);
  }
  return out + ")";
}

std::string render_datatypes(const cmd::DeclareDatatypes& dt) {
  std::string head = "(declare-datatypes (";
  for (std::size_t i = 0; i < dt.decls.size(); ++i) {
    if (i) head += " ";
    head += "(" + quote_symbol(dt.decls[i].name) + " 0)";
  }
  head += ")";
  std::string bodies;
  for (std::size_t i = 0; i < dt.decls.size(); ++i) {
    if (i) bodies += " ";
    bodies += render_datatype_body(dt.decls[i]);
  }
  std::string one_line = head + " (" + bodies + "))";
  if (one_line.size() <= kLineWidth) return one_line;
  std::string out = head;
  for (std::size_t i = 0; i < dt.decls.size(); ++i) {
    out += i == 0 ? "\n  (" : "\n   ";
    out += render_datatype_body(dt.decls[i]);
  }
  return out + "))";
}

}  // namespace

std::string print_sort(const Sort& s) {
  if (!s.indices.empty()) {
    std::string out = "(_ " + quote_symbol(s.name);
    for (const auto& i : s.indices) out += " " + i;
    return out + ")";
  }
  if (s.params.empty()) return quote_symbol(s.name);
  std::string out = "(" + quote_symbol(s.name);
  for (const auto& p : s.params) out += " " + print_sort(p);
  return out + ")";
}

std::string print_term(const Term& term) { return layout(term, 0); }

std::string print_command(const Command& command) {
  struct Visitor {
    std::string operator()(const cmd::SetLogic& c) const {
      return "(set-logic " + quote_symbol(c.logic) + ")";
    }
    std::string operator()(const cmd::SetInfo& c) const {
      std::string out = "(set-info " + c.keyword;
      if (c.value) out += " " + to_string(*c.value);
      return out + ")";
    }
    std::string operator()(const cmd::DeclareFun& c) const {
      std::string out = "(declare-fun " + quote_symbol(c.name) + " (";
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i) out += " ";
        out += print_sort(c.args[i]);
      }
      return out + ") " + print_sort(c.result) + ")";
    }
    std::string operator()(const cmd::DeclareDatatypes& c) const { return render_datatypes(c); }
    std::string operator()(const cmd::Assert& c) const {
      std::string f = flat(c.term);
      if (f.size() + 9 <= kLineWidth) return "(assert " + f + ")";
      return "(assert\n  " + layout(c.term, 2) + ")";
    }
    std::string operator()(const cmd::CheckSat&) const { return "(check-sat)"; }
    std::string operator()(const cmd::Exit&) const { return "(exit)"; }
    std::string operator()(const cmd::GetModel&) const { return "(get-model)"; }
    std::string operator()(const cmd::Unsupported& c) const { return to_string(c.raw); }
  };
  return std::visit(Visitor{}, command);
}

std::string print_script(const Script& script) {
  std::string out;
  for (const auto& c : script.commands) {
    out += print_command(c);
    out += '\n';
  }
  return out;
}

}  // namespace chccomp
