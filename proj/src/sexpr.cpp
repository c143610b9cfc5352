#include "chccomp/sexpr.hpp"

#include <cctype>
#include <string>

namespace chccomp {

SExpr SExpr::atom(AtomKind kind, std::string text, SourceLocation loc) {
  SExpr e;
  e.kind = kind;
  e.text = std::move(text);
  e.loc = loc;
  return e;
}

SExpr SExpr::list(std::vector<SExpr> children, SourceLocation loc) {
  SExpr e;
  e.is_list = true;
  e.children = std::move(children);
  e.loc = loc;
  return e;
}

bool operator==(const SExpr& a, const SExpr& b) {
  if (a.is_list != b.is_list) return false;
  if (a.is_list) return a.children == b.children;
  return a.kind == b.kind && a.text == b.text;
}

namespace {

bool is_symbol_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '~': case '!': case '@': case '$': case '%': case '^': case '&': case '*':
    case '_': case '-': case '+': case '=': case '<': case '>': case '.': case '?':
    case '/':
      return true;
    default:
      return false;
  }
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    // Explicit stack so deeply nested benchmarks cannot overflow the call stack.
    struct Frame {
      std::vector<SExpr> items;
      SourceLocation loc;
    };
    std::vector<Frame> stack;
    for (;;) {
      skip_blank();
      if (at_end()) break;
      SourceLocation here = loc();
      char c = peek();
      if (c == '(') {
        advance();
        stack.push_back(Frame{{}, here});
        continue;
      }
      if (c == ')') {
        if (stack.empty()) throw ParseError("unbalanced ')'", here);
        advance();
        Frame f = std::move(stack.back());
        stack.pop_back();
        SExpr e = SExpr::list(std::move(f.items), f.loc);
        if (stack.empty()) {
          out.push_back(std::move(e));
        } else {
          stack.back().items.push_back(std::move(e));
        }
        continue;
      }
      SExpr a = read_atom();
      if (stack.empty()) {
        out.push_back(std::move(a));
      } else {
        stack.back().items.push_back(std::move(a));
      }
    }
    if (!stack.empty()) throw ParseError("unbalanced '(': missing ')'", stack.back().loc);
    return out;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  SourceLocation loc() const { return {line_, col_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read_atom() {
    SourceLocation start = loc();
    char c = peek();
    if (c == '"') return read_string(start);
    if (c == '|') return read_quoted_symbol(start);
    if (c == '#') return read_radix(start);
    if (c == ':') {
      advance();
      std::string name = ":";
      while (!at_end() && is_symbol_char(peek())) {
        name.push_back(peek());
        advance();
      }
      if (name.size() == 1) throw LexError("empty keyword", start);
      return SExpr::atom(AtomKind::Keyword, std::move(name), start);
    }
    if (is_digit(c)) return read_number(start);
    if (is_symbol_char(c)) {
      std::string name;
      while (!at_end() && is_symbol_char(peek())) {
        name.push_back(peek());
        advance();
      }
      return SExpr::atom(AtomKind::Symbol, std::move(name), start);
    }
    throw LexError(std::string("unexpected character '") + c + "'", start);
  }

  SExpr read_number(SourceLocation start) {
    std::string digits;
    while (!at_end() && is_digit(peek())) {
      digits.push_back(peek());
      advance();
    }
    AtomKind kind = AtomKind::Numeral;
    if (!at_end() && peek() == '.') {
      digits.push_back('.');
      advance();
      std::size_t frac = 0;
      while (!at_end() && is_digit(peek())) {
        digits.push_back(peek());
        advance();
        ++frac;
      }
      if (frac == 0) throw LexError("malformed decimal '" + digits + "'", start);
      kind = AtomKind::Decimal;
    }
    if (!at_end() && is_symbol_char(peek())) {
      throw LexError("malformed numeral '" + digits + peek() + "'", start);
    }
    if (digits.size() > 1 && digits[0] == '0' && digits[1] != '.') {
      throw LexError("numeral with leading zero '" + digits + "'", start);
    }
    return SExpr::atom(kind, std::move(digits), start);
  }

  SExpr read_radix(SourceLocation start) {
    advance();  // '#'
    if (at_end()) throw LexError("dangling '#'", start);
    char r = peek();
    advance();
    std::string body;
    if (r == 'x') {
      while (!at_end() && std::isxdigit(static_cast<unsigned char>(peek()))) {
        body.push_back(peek());
        advance();
      }
      if (body.empty()) throw LexError("empty hexadecimal literal", start);
      return SExpr::atom(AtomKind::Hexadecimal, "#x" + body, start);
    }
    if (r == 'b') {
      while (!at_end() && (peek() == '0' || peek() == '1')) {
        body.push_back(peek());
        advance();
      }
      if (body.empty()) throw LexError("empty binary literal", start);
      return SExpr::atom(AtomKind::Binary, "#b" + body, start);
    }
    throw LexError(std::string("bad literal prefix '#") + r + "'", start);
  }

  SExpr read_string(SourceLocation start) {
    advance();  // opening quote
    std::string body;
    for (;;) {
      if (at_end()) throw LexError("unterminated string literal", start);
      char c = peek();
      advance();
      if (c == '"') {
        if (!at_end() && peek() == '"') {
          body.push_back('"');
          advance();
          continue;
        }
        break;
      }
      body.push_back(c);
    }
    return SExpr::atom(AtomKind::String, std::move(body), start);
  }

  SExpr read_quoted_symbol(SourceLocation start) {
    advance();  // '|'
    std::string body;
    for (;;) {
      if (at_end()) throw LexError("unterminated quoted symbol", start);
      char c = peek();
      advance();
      if (c == '|') break;
      if (c == '\\') throw LexError("backslash in quoted symbol", start);
      body.push_back(c);
    }
    return SExpr::atom(AtomKind::Symbol, std::move(body), start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

bool is_simple_symbol(std::string_view name) {
  if (name.empty() || is_digit(name.front())) return false;
  for (char c : name) {
    if (!is_symbol_char(c)) return false;
  }
  return true;
}

std::string quote_symbol(std::string_view name) {
  if (is_simple_symbol(name)) return std::string(name);
  return "|" + std::string(name) + "|";
}

std::string quote_string(std::string_view contents) {
  std::string out = "\"";
  for (char c : contents) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {
void render(const SExpr& e, std::string& out) {
  if (!e.is_list) {
    switch (e.kind) {
      case AtomKind::Symbol: out += quote_symbol(e.text); break;
      case AtomKind::String: out += quote_string(e.text); break;
      default: out += e.text; break;
    }
    return;
  }
  out.push_back('(');
  for (std::size_t i = 0; i < e.children.size(); ++i) {
    if (i) out.push_back(' ');
    render(e.children[i], out);
  }
  out.push_back(')');
}
}  // namespace

std::string to_string(const SExpr& e) {
  std::string out;
  render(e, out);
  return out;
}

}  // namespace chccomp
