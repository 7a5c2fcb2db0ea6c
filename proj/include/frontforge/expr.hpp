#pragma once

// Closed-form expressions in the plane variables u, v: parser, evaluator,
// exact symbolic differentiation and a reparse-stable printer.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace frontforge::expr {

enum class Kind {
  Constant,
  Pi,
  VarU,
  VarV,
  Neg,
  Sin,
  Cos,
  Tan,
  Sinh,
  Cosh,
  Tanh,
  Exp,
  Log,
  Sqrt,
  Abs,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

enum class Var { U, V };

struct Node;
using Ast = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  double value = 0.0;  // Constant only
  Ast a, b;            // unary: a; binary: a, b
};

inline bool is_unary(Kind k) { return k >= Kind::Neg && k <= Kind::Abs; }
inline bool is_binary(Kind k) { return k >= Kind::Add; }

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

std::string print(const Ast& n);

struct EvalError : std::runtime_error {
  Ast node;
  EvalError(const std::string& msg, Ast n)
      : std::runtime_error(msg + " in `" + print(n) + "`"), node(std::move(n)) {}
};

// ---- constructors (with constant folding) ----

inline Ast make(Kind k, double v, Ast a, Ast b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->value = v;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

inline Ast constant(double c) { return make(Kind::Constant, c, nullptr, nullptr); }
inline Ast pi() { return make(Kind::Pi, 0, nullptr, nullptr); }
inline Ast var(Var w) { return make(w == Var::U ? Kind::VarU : Kind::VarV, 0, nullptr, nullptr); }

inline bool is_const(const Ast& n, double c) {
  return n->kind == Kind::Constant && n->value == c;
}

double eval(const Ast& n, double u, double v);

inline Ast fold_or(Kind k, Ast a, Ast b) {
  const bool ca = a->kind == Kind::Constant;
  const bool cb = !b || b->kind == Kind::Constant;
  Ast n = make(k, 0, std::move(a), std::move(b));
  if (ca && cb) {
    // fold only when the constant subtree evaluates cleanly
    try {
      return constant(eval(n, 0, 0));
    } catch (const EvalError&) {
      return n;
    }
  }
  return n;
}

inline Ast neg(Ast a) {
  if (a->kind == Kind::Neg) return a->a;
  if (a->kind == Kind::Constant) return constant(-a->value);
  return make(Kind::Neg, 0, std::move(a), nullptr);
}

inline Ast add(Ast a, Ast b) {
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  return fold_or(Kind::Add, std::move(a), std::move(b));
}

inline Ast sub(Ast a, Ast b) {
  if (is_const(b, 0)) return a;
  if (is_const(a, 0)) return neg(std::move(b));
  return fold_or(Kind::Sub, std::move(a), std::move(b));
}

inline Ast mul(Ast a, Ast b) {
  if (is_const(a, 0) || is_const(b, 0)) return constant(0);
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  if (is_const(a, -1)) return neg(std::move(b));
  if (is_const(b, -1)) return neg(std::move(a));
  return fold_or(Kind::Mul, std::move(a), std::move(b));
}

inline Ast div(Ast a, Ast b) {
  if (is_const(a, 0) && !is_const(b, 0)) return constant(0);
  if (is_const(b, 1)) return a;
  return fold_or(Kind::Div, std::move(a), std::move(b));
}

inline Ast pow(Ast a, Ast b) {
  if (is_const(b, 0)) return constant(1);
  if (is_const(b, 1)) return a;
  return fold_or(Kind::Pow, std::move(a), std::move(b));
}

inline Ast unary(Kind k, Ast a) { return fold_or(k, std::move(a), nullptr); }

inline Ast sin(Ast a) { return unary(Kind::Sin, std::move(a)); }
inline Ast cos(Ast a) { return unary(Kind::Cos, std::move(a)); }
inline Ast tan(Ast a) { return unary(Kind::Tan, std::move(a)); }
inline Ast sinh(Ast a) { return unary(Kind::Sinh, std::move(a)); }
inline Ast cosh(Ast a) { return unary(Kind::Cosh, std::move(a)); }
inline Ast tanh(Ast a) { return unary(Kind::Tanh, std::move(a)); }
inline Ast exp(Ast a) { return unary(Kind::Exp, std::move(a)); }
inline Ast log(Ast a) { return unary(Kind::Log, std::move(a)); }
inline Ast sqrt(Ast a) { return unary(Kind::Sqrt, std::move(a)); }
inline Ast abs(Ast a) { return unary(Kind::Abs, std::move(a)); }

// ---- evaluation ----

inline double eval(const Ast& n, double u, double v) {
  double r = 0;
  switch (n->kind) {
    case Kind::Constant: return n->value;
    case Kind::Pi: return M_PI;
    case Kind::VarU: return u;
    case Kind::VarV: return v;
    case Kind::Neg: return -eval(n->a, u, v);
    case Kind::Sin: r = std::sin(eval(n->a, u, v)); break;
    case Kind::Cos: r = std::cos(eval(n->a, u, v)); break;
    case Kind::Tan: r = std::tan(eval(n->a, u, v)); break;
    case Kind::Sinh: r = std::sinh(eval(n->a, u, v)); break;
    case Kind::Cosh: r = std::cosh(eval(n->a, u, v)); break;
    case Kind::Tanh: r = std::tanh(eval(n->a, u, v)); break;
    case Kind::Exp: r = std::exp(eval(n->a, u, v)); break;
    case Kind::Log: {
      const double x = eval(n->a, u, v);
      if (x <= 0) throw EvalError("log of non-positive value", n);
      r = std::log(x);
      break;
    }
    case Kind::Sqrt: {
      const double x = eval(n->a, u, v);
      if (x < 0) throw EvalError("sqrt of negative value", n);
      r = std::sqrt(x);
      break;
    }
    case Kind::Abs: return std::abs(eval(n->a, u, v));
    case Kind::Add: r = eval(n->a, u, v) + eval(n->b, u, v); break;
    case Kind::Sub: r = eval(n->a, u, v) - eval(n->b, u, v); break;
    case Kind::Mul: r = eval(n->a, u, v) * eval(n->b, u, v); break;
    case Kind::Div: {
      const double den = eval(n->b, u, v);
      if (den == 0.0) throw EvalError("division by zero", n);
      r = eval(n->a, u, v) / den;
      break;
    }
    case Kind::Pow: r = std::pow(eval(n->a, u, v), eval(n->b, u, v)); break;
  }
  if (!std::isfinite(r)) throw EvalError("non-finite result", n);
  return r;
}

// ---- differentiation ----

inline Ast differentiate(const Ast& n, Var w) {
  const auto d = [w](const Ast& m) { return differentiate(m, w); };
  switch (n->kind) {
    case Kind::Constant:
    case Kind::Pi:
      return constant(0);
    case Kind::VarU: return constant(w == Var::U ? 1 : 0);
    case Kind::VarV: return constant(w == Var::V ? 1 : 0);
    case Kind::Neg: return neg(d(n->a));
    case Kind::Sin: return mul(cos(n->a), d(n->a));
    case Kind::Cos: return neg(mul(sin(n->a), d(n->a)));
    case Kind::Tan: return div(d(n->a), pow(cos(n->a), constant(2)));
    case Kind::Sinh: return mul(cosh(n->a), d(n->a));
    case Kind::Cosh: return mul(sinh(n->a), d(n->a));
    case Kind::Tanh: return div(d(n->a), pow(cosh(n->a), constant(2)));
    case Kind::Exp: return mul(exp(n->a), d(n->a));
    case Kind::Log: return div(d(n->a), n->a);
    case Kind::Sqrt: return div(d(n->a), mul(constant(2), sqrt(n->a)));
    case Kind::Abs:
      // sign via a/|a|; evaluating at a zero of the argument is the
      // intended runtime error
      return mul(div(n->a, abs(n->a)), d(n->a));
    case Kind::Add: return add(d(n->a), d(n->b));
    case Kind::Sub: return sub(d(n->a), d(n->b));
    case Kind::Mul: return add(mul(d(n->a), n->b), mul(n->a, d(n->b)));
    case Kind::Div:
      return div(sub(mul(d(n->a), n->b), mul(n->a, d(n->b))), pow(n->b, constant(2)));
    case Kind::Pow:
      if (n->b->kind == Kind::Constant)
        return mul(mul(n->b, pow(n->a, constant(n->b->value - 1))), d(n->a));
      // general exponent: a^b * (b' log a + b a'/a)
      return mul(pow(n->a, n->b),
                 add(mul(d(n->b), log(n->a)), mul(n->b, div(d(n->a), n->a))));
  }
  throw std::logic_error("unreachable");
}

inline Ast substitute(const Ast& n, Var w, const Ast& repl) {
  switch (n->kind) {
    case Kind::Constant:
    case Kind::Pi:
      return n;
    case Kind::VarU: return w == Var::U ? repl : n;
    case Kind::VarV: return w == Var::V ? repl : n;
    default:
      if (is_unary(n->kind)) {
        if (n->kind == Kind::Neg) return neg(substitute(n->a, w, repl));
        return unary(n->kind, substitute(n->a, w, repl));
      }
      return fold_or(n->kind, substitute(n->a, w, repl), substitute(n->b, w, repl));
  }
}

// ---- printing ----

namespace detail {

inline int precedence(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
  }
}

inline const char* func_name(Kind k) {
  switch (k) {
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Tan: return "tan";
    case Kind::Sinh: return "sinh";
    case Kind::Cosh: return "cosh";
    case Kind::Tanh: return "tanh";
    case Kind::Exp: return "exp";
    case Kind::Log: return "log";
    case Kind::Sqrt: return "sqrt";
    case Kind::Abs: return "abs";
    default: return "?";
  }
}

inline void print_rec(const Ast& n, std::string& out) {
  const int p = precedence(n->kind);
  const auto child = [&](const Ast& c, bool needs_parens) {
    if (needs_parens) {
      out += '(';
      print_rec(c, out);
      out += ')';
    } else {
      print_rec(c, out);
    }
  };
  switch (n->kind) {
    case Kind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n->value);
      if (n->value < 0 || !std::isfinite(n->value)) {
        out += '(';
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      return;
    }
    case Kind::Pi: out += "pi"; return;
    case Kind::VarU: out += 'u'; return;
    case Kind::VarV: out += 'v'; return;
    case Kind::Neg:
      out += '-';
      child(n->a, precedence(n->a->kind) < p);
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      child(n->a, precedence(n->a->kind) < p);
      out += (n->kind == Kind::Add ? '+' : n->kind == Kind::Sub ? '-'
              : n->kind == Kind::Mul ? '*' : '/');
      const int pb = precedence(n->b->kind);
      child(n->b, pb < p || (pb == p && (n->kind == Kind::Sub || n->kind == Kind::Div)));
      return;
    }
    case Kind::Pow: {
      child(n->a, precedence(n->a->kind) <= p);  // left operand of ^ binds tight
      out += '^';
      child(n->b, precedence(n->b->kind) < p);
      return;
    }
    default:
      out += func_name(n->kind);
      out += '(';
      print_rec(n->a, out);
      out += ')';
      return;
  }
}

}  // namespace detail

inline std::string print(const Ast& n) {
  std::string out;
  detail::print_rec(n, out);
  return out;
}

// ---- parsing ----

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Ast run() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", 0);
    Ast e = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Ast parse_expr() {
    Ast e = parse_term();
    for (;;) {
      if (consume('+'))
        e = add(std::move(e), parse_term());
      else if (consume('-'))
        e = sub(std::move(e), parse_term());
      else
        return e;
    }
  }

  Ast parse_term() {
    Ast e = parse_factor();
    for (;;) {
      if (consume('*'))
        e = mul(std::move(e), parse_factor());
      else if (consume('/'))
        e = div(std::move(e), parse_factor());
      else
        return e;
    }
  }

  Ast parse_factor() {
    if (consume('-')) return neg(parse_factor());
    if (consume('+')) return parse_factor();
    return parse_power();
  }

  Ast parse_power() {
    Ast base = parse_atom();
    if (consume('^')) return pow(std::move(base), parse_factor());
    return base;
  }

  Ast parse_atom() {
    const char c = peek();
    const std::size_t start = pos_;
    if (c == '(') {
      ++pos_;
      Ast e = parse_expr();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident(start);
    throw ParseError("syntax error", pos_);
  }

  Ast parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        pos_ = mark;  // not an exponent after all
      else
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    const std::string text(src_.substr(start, pos_ - start));
    try {
      return constant(std::stod(text));
    } catch (const std::exception&) {
      throw ParseError("bad numeric literal", start);
    }
  }

  Ast parse_ident(std::size_t start) {
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "u") return var(Var::U);
    if (name == "v") return var(Var::V);
    if (name == "pi") return pi();
    static constexpr std::pair<std::string_view, Kind> funcs[] = {
        {"sin", Kind::Sin},   {"cos", Kind::Cos},   {"tan", Kind::Tan},
        {"sinh", Kind::Sinh}, {"cosh", Kind::Cosh}, {"tanh", Kind::Tanh},
        {"exp", Kind::Exp},   {"log", Kind::Log},   {"sqrt", Kind::Sqrt},
        {"abs", Kind::Abs},
    };
    for (const auto& [fname, kind] : funcs) {
      if (name == fname) {
        if (!consume('(')) throw ParseError("expected '(' after function name", pos_);
        Ast arg = parse_expr();
        if (!consume(')')) throw ParseError("expected ')'", pos_);
        return unary(kind, std::move(arg));
      }
    }
    throw ParseError("unknown identifier `" + std::string(name) + "`", start);
  }
};

}  // namespace detail

inline Ast parse(std::string_view source) { return detail::Parser(source).run(); }

}  // namespace frontforge::expr
