#ifndef TCN_FRONTEND_HPP
#define TCN_FRONTEND_HPP

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcn/model.hpp"

namespace tcn {

struct ParseDiagnostic {
  enum class Severity { Error, Warning };
  int line = 1;
  int column = 1;
  std::string message;
  Severity severity = Severity::Error;

  std::string to_string() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " +
           (severity == Severity::Error ? "error: " : "warning: ") + message;
  }
};

struct ParseResult {
  std::optional<SourceNetwork> network;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return network.has_value(); }
};

namespace detail {

enum class Tok {
  End, Ident, Int, Semi, Comma, LParen, RParen, LBrace, RBrace, DotDot,
  Plus, Minus, Star, Slash, Eq, Ne, Le, Lt, Ge, Gt, And, Or, Arrow, DArrow,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

struct ParseFailure {
  ParseDiagnostic diag;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        t.kind = Tok::Int;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else {
        t.kind = punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  Tok punct(Token& t) {
    static constexpr std::pair<std::string_view, Tok> table[] = {
        {"<->", Tok::DArrow}, {"->", Tok::Arrow}, {"..", Tok::DotDot}, {"/\\", Tok::And}, {"\\/", Tok::Or},
        {"!=", Tok::Ne},      {"<=", Tok::Le},    {">=", Tok::Ge},     {"<", Tok::Lt},     {">", Tok::Gt},
        {"=", Tok::Eq},       {"+", Tok::Plus},   {"-", Tok::Minus},   {"*", Tok::Star},   {"/", Tok::Slash},
        {";", Tok::Semi},     {",", Tok::Comma},  {"(", Tok::LParen},  {")", Tok::RParen}, {"{", Tok::LBrace},
        {"}", Tok::RBrace},
    };
    for (const auto& [text, kind] : table) {
      if (src_.substr(pos_, text.size()) == text) {
        t.text = std::string(text);
        for (std::size_t i = 0; i < text.size(); ++i) advance();
        return kind;
      }
    }
    throw ParseFailure{{t.line, t.column, "SyntaxError: unexpected character '" + std::string(1, src_[pos_]) + "'"}};
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SourceNetwork run(std::vector<ParseDiagnostic>& warnings) {
    bool solved = false;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (is_keyword(t, "var")) {
        declaration();
      } else if (is_keyword(t, "constraint")) {
        next();
        const Token& start = peek();
        Expr c = expression();
        if (!c.is_boolean_valued()) {
          warnings.push_back({start.line, start.column, "non-Boolean constraint read as `<expr> != 0`",
                              ParseDiagnostic::Severity::Warning});
          c = Expr::cmp(CmpOp::Ne, c, Expr::constant(0));
        }
        net_.constraints.push_back(std::move(c));
        expect(Tok::Semi, "';'");
      } else if (is_keyword(t, "solve")) {
        if (solved) fail(t, "SyntaxError: duplicate solve item");
        solved = true;
        next();
        solve_item();
        expect(Tok::Semi, "';'");
      } else {
        fail(t, "SyntaxError: expected 'var', 'constraint' or 'solve'");
      }
    }
    return std::move(net_);
  }

 private:
  static bool is_keyword(const Token& t, std::string_view kw) { return t.kind == Tok::Ident && t.text == kw; }

  static bool reserved_word(std::string_view s) {
    static constexpr std::string_view words[] = {"var", "in",  "constraint", "solve", "satisfy", "minimize",
                                                 "maximize", "not", "mod", "min", "max", "abs", "xor"};
    for (auto w : words) {
      if (w == s) return true;
    }
    return false;
  }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& t, std::string msg) { throw ParseFailure{{t.line, t.column, std::move(msg)}}; }

  const Token& expect(Tok k, std::string_view what) {
    if (peek().kind != k) fail(peek(), "SyntaxError: expected " + std::string(what));
    return next();
  }

  void expect_keyword(std::string_view kw) {
    if (!is_keyword(peek(), kw)) fail(peek(), "SyntaxError: expected '" + std::string(kw) + "'");
    next();
  }

  bound_t integer_literal(const Token& t, bool negative) {
    std::string digits = negative ? "-" + t.text : t.text;
    bound_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || p != digits.data() + digits.size() || !is_finite(v)) {
      fail(t, "SyntaxError: integer literal out of range");
    }
    return v;
  }

  bound_t signed_int() {
    bool negative = false;
    if (peek().kind == Tok::Minus) {
      next();
      negative = true;
    }
    const Token& t = expect(Tok::Int, "integer");
    return integer_literal(t, negative);
  }

  /// Bound in a variable declaration; accepts `inf` / `-inf`.
  bound_t domain_bound() {
    bool negative = false;
    if (peek().kind == Tok::Minus) {
      next();
      negative = true;
    }
    if (is_keyword(peek(), "inf")) {
      next();
      return negative ? NEG_INF : POS_INF;
    }
    const Token& t = expect(Tok::Int, "integer");
    return integer_literal(t, negative);
  }

  std::vector<bound_t> set_literal() {
    const Token& open = expect(Tok::LBrace, "'{'");
    std::vector<bound_t> s;
    if (peek().kind == Tok::RBrace) fail(open, "EmptySet: empty set literal");
    s.push_back(signed_int());
    while (peek().kind == Tok::Comma) {
      next();
      s.push_back(signed_int());
    }
    expect(Tok::RBrace, "'}'");
    return s;
  }

  void declaration() {
    next();
    const Token& id = expect(Tok::Ident, "identifier");
    if (reserved_word(id.text)) fail(id, "SyntaxError: '" + id.text + "' is a keyword");
    if (id.text.starts_with(kConstantPrefix)) fail(id, "ReservedName(" + id.text + ")");
    if (net_.domains.contains(id.text)) fail(id, "DuplicateDeclaration(" + id.text + ")");

    Interval dom = Interval::top();
    std::optional<std::vector<bound_t>> values;
    if (is_keyword(peek(), "in")) {
      next();
      if (peek().kind == Tok::LBrace) {
        values = set_literal();
        auto [lo, hi] = std::minmax_element(values->begin(), values->end());
        dom = Interval(*lo, *hi);
      } else {
        const bound_t lo = domain_bound();
        expect(Tok::DotDot, "'..'");
        const bound_t hi = domain_bound();
        dom = Interval(lo, hi);
      }
    }
    expect(Tok::Semi, "';'");
    const VarId x = net_.domains.add(id.text, dom);
    if (values) net_.constraints.push_back(Expr::member(Expr::var(x), std::move(*values)));
  }

  void solve_item() {
    const Token& t = peek();
    if (is_keyword(t, "satisfy")) {
      next();
      net_.objective = Objective::satisfy();
    } else if (is_keyword(t, "minimize") || is_keyword(t, "maximize")) {
      const bool minimize = t.text == "minimize";
      next();
      const VarId x = variable(expect(Tok::Ident, "identifier"));
      net_.objective = minimize ? Objective::minimize(x) : Objective::maximize(x);
    } else {
      fail(t, "SyntaxError: expected 'satisfy', 'minimize' or 'maximize'");
    }
  }

  VarId variable(const Token& t) {
    auto found = net_.domains.find(t.text);
    if (!found) fail(t, "UndeclaredVariable(" + t.text + ")");
    return *found;
  }

  // Precedence, loosest first: -> <-> xor (right assoc), \/, /\, not,
  // comparisons and `in`, + -, * / mod, unary minus.
  Expr expression() {
    Expr lhs = disjunction();
    const Token& t = peek();
    if (t.kind == Tok::Arrow || t.kind == Tok::DArrow || is_keyword(t, "xor")) {
      const Tok k = t.kind;
      next();
      Expr rhs = expression();
      if (k == Tok::Arrow) return Expr::implies(lhs, rhs);
      if (k == Tok::DArrow) return Expr::iff(lhs, rhs);
      return Expr::lxor(lhs, rhs);
    }
    return lhs;
  }

  Expr disjunction() {
    Expr e = conjunction();
    while (peek().kind == Tok::Or) {
      next();
      e = Expr::lor(e, conjunction());
    }
    return e;
  }

  Expr conjunction() {
    Expr e = negation();
    while (peek().kind == Tok::And) {
      next();
      e = Expr::land(e, negation());
    }
    return e;
  }

  Expr negation() {
    if (is_keyword(peek(), "not")) {
      next();
      return Expr::lnot(negation());
    }
    return comparison();
  }

  Expr comparison() {
    Expr lhs = additive();
    const Token& t = peek();
    std::optional<CmpOp> op;
    switch (t.kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      default: break;
    }
    if (op) {
      next();
      return Expr::cmp(*op, lhs, additive());
    }
    if (is_keyword(t, "in")) {
      next();
      return Expr::member(lhs, set_literal());
    }
    return lhs;
  }

  Expr additive() {
    Expr e = multiplicative();
    for (;;) {
      if (peek().kind == Tok::Plus) {
        next();
        e = Expr::bin(BinOp::Add, e, multiplicative());
      } else if (peek().kind == Tok::Minus) {
        next();
        e = Expr::bin(BinOp::Sub, e, multiplicative());
      } else {
        return e;
      }
    }
  }

  Expr multiplicative() {
    Expr e = unary();
    for (;;) {
      if (peek().kind == Tok::Star) {
        next();
        e = Expr::bin(BinOp::Mul, e, unary());
      } else if (peek().kind == Tok::Slash) {
        next();
        e = Expr::bin(BinOp::Div, e, unary());
      } else if (is_keyword(peek(), "mod")) {
        next();
        e = Expr::bin(BinOp::Mod, e, unary());
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (peek().kind == Tok::Minus) {
      next();
      if (peek().kind == Tok::Int) return Expr::constant(integer_literal(next(), true));
      return Expr::neg(unary());
    }
    return primary();
  }

  Expr call_args(BinOp op) {
    expect(Tok::LParen, "'('");
    Expr a = expression();
    expect(Tok::Comma, "','");
    Expr b = expression();
    expect(Tok::RParen, "')'");
    return Expr::bin(op, a, b);
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: return Expr::constant(integer_literal(next(), false));
      case Tok::LParen: {
        next();
        Expr e = expression();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        if (t.text == "min" || t.text == "max") {
          const BinOp op = t.text == "min" ? BinOp::Min : BinOp::Max;
          next();
          return call_args(op);
        }
        if (t.text == "abs") {
          next();
          expect(Tok::LParen, "'('");
          Expr e = expression();
          expect(Tok::RParen, "')'");
          return Expr::abs(e);
        }
        if (reserved_word(t.text)) fail(t, "SyntaxError: unexpected keyword '" + t.text + "'");
        return Expr::var(variable(next()));
      }
      default: fail(t, "SyntaxError: expected an expression");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  SourceNetwork net_;
};

}  // namespace detail

/// Parses the textual model language. On failure the result carries the first
/// error; warnings are reported either way.
inline ParseResult parse_model(std::string_view text) {
  ParseResult result;
  try {
    auto toks = detail::Lexer(text).run();
    result.network = detail::Parser(std::move(toks)).run(result.diagnostics);
  } catch (const detail::ParseFailure& f) {
    result.network.reset();
    result.diagnostics.push_back(f.diag);
  }
  return result;
}

/// Renders a network back to model text.
inline std::string render_model(const SourceNetwork& net) {
  std::string out;
  const auto& d = net.domains;
  for (VarId x = 0; x < d.size(); ++x) {
    out += "var " + d.name(x);
    if (!d[x].is_top()) {
      const Interval& i = d[x];
      out += i.is_empty() ? " in 1..0" : " in " + i.to_string();
    }
    out += ";\n";
  }
  for (const auto& c : net.constraints) out += "constraint " + render(c, d) + ";\n";
  switch (net.objective.kind) {
    case Objective::Kind::Satisfy: out += "solve satisfy;\n"; break;
    case Objective::Kind::Minimize: out += "solve minimize " + d.name(net.objective.var) + ";\n"; break;
    case Objective::Kind::Maximize: out += "solve maximize " + d.name(net.objective.var) + ";\n"; break;
  }
  return out;
}

/// Moves top-level `x = k`, `x <= k`, `x >= k` (either side) into the domains.
inline SourceNetwork unary_domain_fold(SourceNetwork net) {
  std::vector<Expr> kept;
  for (auto& c : net.constraints) {
    if (c.kind() == ExprKind::Cmp) {
      CmpOp op = c.cmp_op();
      const Expr* v = nullptr;
      const Expr* k = nullptr;
      const Expr& a = c.child(0);
      const Expr& b = c.child(1);
      if (a.kind() == ExprKind::Var && b.kind() == ExprKind::Const) {
        v = &a;
        k = &b;
      } else if (a.kind() == ExprKind::Const && b.kind() == ExprKind::Var) {
        v = &b;
        k = &a;
        if (op == CmpOp::Le) {
          op = CmpOp::Ge;
        } else if (op == CmpOp::Ge) {
          op = CmpOp::Le;
        }
      }
      if (v && (op == CmpOp::Eq || op == CmpOp::Le || op == CmpOp::Ge)) {
        const bound_t value = k->value();
        const Interval itv = op == CmpOp::Eq   ? Interval::singleton(value)
                             : op == CmpOp::Le ? Interval(NEG_INF, value)
                                               : Interval(value, POS_INF);
        net.domains.update(v->var_id(), itv);
        continue;
      }
    }
    kept.push_back(std::move(c));
  }
  net.constraints = std::move(kept);
  return net;
}

}  // namespace tcn

#endif
