#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "h4/jet.hpp"

namespace h4 {

/// Which variable set an expression may use.
enum class Mode : std::uint8_t {
  Parametric,  // u, v, w
  Implicit,    // x, y, z, t
};

constexpr int variable_count(Mode m) { return m == Mode::Parametric ? 3 : 4; }

constexpr std::string_view variable_names(Mode m) {
  return m == Mode::Parametric ? std::string_view("uvw") : std::string_view("xyzt");
}

/// Syntax or semantic error while parsing; offset is the byte position of the
/// offending token in the input string.
struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& message, std::size_t off)
      : std::runtime_error(message + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

enum class BinOp : std::uint8_t { Add, Sub, Mul, Div, Pow };
enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sqrt };

namespace detail {
class Parser;
}

struct ExprNode {
  enum class Kind : std::uint8_t { Const, Var, Neg, Bin, Call } kind = Kind::Const;
  double value = 0.0;       // Const
  std::uint8_t var = 0;     // Var: index into the mode's variable set
  BinOp bin = BinOp::Add;   // Bin
  Func func = Func::Sin;    // Call
  std::uint32_t a = 0;      // first child (Neg, Bin, Call)
  std::uint32_t b = 0;      // second child (Bin)
};

/// Parsed abstract syntax tree of one real-valued expression. Immutable after
/// parsing; cheap to copy and safe to share across threads by const reference.
///
/// Grammar (EBNF, also documented in the README):
///   expr     = term { ("+" | "-") term } ;
///   term     = unary { ("*" | "/") unary } ;
///   unary    = "-" unary | power ;
///   power    = atom [ "^" exponent ] ;
///   atom     = number | "pi" | variable | function "(" expr ")" | "(" expr ")" ;
///   function = "sin" | "cos" | "tan" | "exp" | "log" | "sqrt" ;
///
/// Precedence ^ > unary- > */ > +-, with +-*/ left-associative. The exponent
/// of "^" must reduce to a numeric constant (an optionally negated literal);
/// anything else is rejected at parse time. Implicit multiplication is not
/// supported, function parentheses are mandatory, and "pi" is the only named
/// constant.
class Expr {
 public:
  Mode mode() const { return mode_; }
  const std::vector<ExprNode>& nodes() const { return nodes_; }
  std::uint32_t root() const { return root_; }

 private:
  friend class detail::Parser;
  Mode mode_ = Mode::Parametric;
  std::vector<ExprNode> nodes_;
  std::uint32_t root_ = 0;
};

namespace detail {

struct Token {
  enum class Kind : std::uint8_t { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind = Kind::End;
  double number = 0.0;
  std::string_view text;
  std::size_t offset = 0;
};

inline bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
inline bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    Token tok;
    tok.offset = i;
    switch (c) {
      case '+': tok.kind = Token::Kind::Plus; ++i; break;
      case '-': tok.kind = Token::Kind::Minus; ++i; break;
      case '*': tok.kind = Token::Kind::Star; ++i; break;
      case '/': tok.kind = Token::Kind::Slash; ++i; break;
      case '^': tok.kind = Token::Kind::Caret; ++i; break;
      case '(': tok.kind = Token::Kind::LParen; ++i; break;
      case ')': tok.kind = Token::Kind::RParen; ++i; break;
      default:
        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(text[i + 1]))) {
          std::size_t j = i;
          while (j < n && is_digit(text[j])) ++j;
          if (j < n && text[j] == '.' && j + 1 < n && is_digit(text[j + 1])) {
            ++j;
            while (j < n && is_digit(text[j])) ++j;
          }
          if (j < n && (text[j] == 'e' || text[j] == 'E')) {
            std::size_t k = j + 1;
            if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
            if (k < n && is_digit(text[k])) {
              ++k;
              while (k < n && is_digit(text[k])) ++k;
              j = k;
            }
          }
          tok.kind = Token::Kind::Number;
          tok.text = text.substr(i, j - i);
          const auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
          if (res.ec == std::errc::result_out_of_range) throw ParseError("number out of range", i);
          if (res.ec != std::errc() || res.ptr != tok.text.data() + tok.text.size())
            throw ParseError("malformed number", i);
          i = j;
        } else if (is_ident_start(c)) {
          std::size_t j = i;
          while (j < n && is_ident_char(text[j])) ++j;
          tok.kind = Token::Kind::Ident;
          tok.text = text.substr(i, j - i);
          i = j;
        } else {
          throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
    }
    out.push_back(tok);
  }
  Token end;
  end.kind = Token::Kind::End;
  end.offset = n;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, Mode mode) : mode_(mode), tokens_(lex(text)) {}

  Expr run() {
    Expr e;
    e.mode_ = mode_;
    e.root_ = parse_sum();
    if (peek().kind != Token::Kind::End) throw ParseError("unexpected trailing input", peek().offset);
    e.nodes_ = std::move(nodes_);
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::uint32_t add(ExprNode n) {
    nodes_.push_back(n);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t make_const(double v) {
    ExprNode n;
    n.kind = ExprNode::Kind::Const;
    n.value = v;
    return add(n);
  }

  // Negation of a constant folds into the constant, so "-2" is one node and a
  // printed negative literal reparses to an identical tree.
  std::uint32_t make_neg(std::uint32_t child) {
    if (nodes_[child].kind == ExprNode::Kind::Const) {
      nodes_[child].value = -nodes_[child].value;
      return child;
    }
    ExprNode n;
    n.kind = ExprNode::Kind::Neg;
    n.a = child;
    return add(n);
  }

  std::uint32_t make_bin(BinOp op, std::uint32_t a, std::uint32_t b) {
    ExprNode n;
    n.kind = ExprNode::Kind::Bin;
    n.bin = op;
    n.a = a;
    n.b = b;
    return add(n);
  }

  std::uint32_t parse_sum() {
    std::uint32_t lhs = parse_term();
    while (true) {
      if (accept(Token::Kind::Plus)) {
        lhs = make_bin(BinOp::Add, lhs, parse_term());
      } else if (accept(Token::Kind::Minus)) {
        lhs = make_bin(BinOp::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  std::uint32_t parse_term() {
    std::uint32_t lhs = parse_unary();
    while (true) {
      if (accept(Token::Kind::Star)) {
        lhs = make_bin(BinOp::Mul, lhs, parse_unary());
      } else if (accept(Token::Kind::Slash)) {
        lhs = make_bin(BinOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  std::uint32_t parse_unary() {
    if (accept(Token::Kind::Minus)) return make_neg(parse_unary());
    return parse_power();
  }

  std::uint32_t parse_power() {
    const std::uint32_t base = parse_atom();
    if (!accept(Token::Kind::Caret)) return base;
    const std::size_t exp_offset = peek().offset;
    const std::uint32_t exponent = parse_unary();
    if (nodes_[exponent].kind != ExprNode::Kind::Const)
      throw ParseError("exponent must be a numeric constant", exp_offset);
    return make_bin(BinOp::Pow, base, exponent);
  }

  std::uint32_t parse_atom() {
    const Token tok = take();
    switch (tok.kind) {
      case Token::Kind::Number:
        return make_const(tok.number);
      case Token::Kind::LParen: {
        const std::uint32_t inner = parse_sum();
        if (!accept(Token::Kind::RParen)) throw ParseError("expected ')'", peek().offset);
        return inner;
      }
      case Token::Kind::Ident:
        return parse_ident(tok);
      default:
        throw ParseError("expected a number, variable, function or '('", tok.offset);
    }
  }

  std::uint32_t parse_ident(const Token& tok) {
    if (tok.text == "pi") return make_const(std::numbers::pi);
    bool is_func = true;
    Func f = Func::Sin;
    if (tok.text == "sin") f = Func::Sin;
    else if (tok.text == "cos") f = Func::Cos;
    else if (tok.text == "tan") f = Func::Tan;
    else if (tok.text == "exp") f = Func::Exp;
    else if (tok.text == "log") f = Func::Log;
    else if (tok.text == "sqrt") f = Func::Sqrt;
    else is_func = false;
    if (is_func) {
      if (!accept(Token::Kind::LParen))
        throw ParseError("expected '(' after function name", peek().offset);
      const std::uint32_t arg = parse_sum();
      if (!accept(Token::Kind::RParen)) throw ParseError("expected ')'", peek().offset);
      ExprNode n;
      n.kind = ExprNode::Kind::Call;
      n.func = f;
      n.a = arg;
      return add(n);
    }
    const std::string_view names = variable_names(mode_);
    if (tok.text.size() == 1) {
      const auto idx = names.find(tok.text[0]);
      if (idx != std::string_view::npos) {
        ExprNode n;
        n.kind = ExprNode::Kind::Var;
        n.var = static_cast<std::uint8_t>(idx);
        return add(n);
      }
      const std::string_view other = variable_names(mode_ == Mode::Parametric ? Mode::Implicit : Mode::Parametric);
      if (other.find(tok.text[0]) != std::string_view::npos)
        throw ParseError("variable '" + std::string(tok.text) + "' is not available in " +
                             (mode_ == Mode::Parametric ? std::string("parametric") : std::string("implicit")) +
                             " mode",
                         tok.offset);
    }
    throw ParseError("unknown identifier '" + std::string(tok.text) + "'", tok.offset);
  }

  Mode mode_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<ExprNode> nodes_;
};

// Evaluation is templated over the value type so the scalar and jet paths run
// the same operation sequence; the value component of a jet evaluation is
// bit-identical to the scalar evaluation.
template <class T>
struct EvalOps;

template <>
struct EvalOps<double> {
  static double constant(double v) { return v; }
  static double neg(double a) { return -a; }
  static double add(double a, double b) { return a + b; }
  static double sub(double a, double b) { return a - b; }
  static double mul(double a, double b) { return a * b; }
  static double div(double a, double b) {
    if (std::abs(b) < kMinDivisor) throw DomainError("division by a vanishing value");
    return a * (1.0 / b);
  }
  static double sin(double a) { return std::sin(a); }
  static double cos(double a) { return std::cos(a); }
  static double tan(double a) { return std::tan(a); }
  static double exp(double a) { return std::exp(a); }
  static double log(double a) {
    if (a <= 0.0) throw DomainError("log of a nonpositive value");
    return std::log(a);
  }
  static double sqrt(double a) {
    if (a < 0.0) throw DomainError("sqrt of a negative value");
    return std::sqrt(a);
  }
  static double value(double a) { return a; }
};

template <int N>
struct EvalOps<Jet2<N>> {
  using T = Jet2<N>;
  static T constant(double v) { return T::constant(v); }
  static T neg(const T& a) { return -a; }
  static T add(const T& a, const T& b) { return a + b; }
  static T sub(const T& a, const T& b) { return a - b; }
  static T mul(const T& a, const T& b) { return a * b; }
  static T div(const T& a, const T& b) { return a / b; }
  static T sin(const T& a) { return h4::sin(a); }
  static T cos(const T& a) { return h4::cos(a); }
  static T tan(const T& a) { return h4::tan(a); }
  static T exp(const T& a) { return h4::exp(a); }
  static T log(const T& a) { return h4::log(a); }
  static T sqrt(const T& a) { return h4::sqrt(a); }
  static double value(const T& a) { return a.val; }
};

// Integer exponents compile to repeated multiplication so integer-valued
// inputs stay exact; real exponents go through exp(e*log(base)) and require a
// positive base.
template <class T>
T eval_pow(const T& base, double expo) {
  using Ops = EvalOps<T>;
  const double rounded = std::nearbyint(expo);
  if (expo == rounded && std::abs(expo) <= 1024.0) {
    long n = static_cast<long>(rounded);
    if (n == 0) return Ops::constant(1.0);
    const unsigned long count = static_cast<unsigned long>(n < 0 ? -n : n);
    T r = base;
    for (unsigned long i = 1; i < count; ++i) r = Ops::mul(r, base);
    if (n < 0) r = Ops::div(Ops::constant(1.0), r);
    return r;
  }
  if (Ops::value(base) <= 0.0) throw DomainError("power with a real exponent requires a positive base");
  return Ops::exp(Ops::mul(Ops::constant(expo), Ops::log(base)));
}

template <class T>
T eval_node(const std::vector<ExprNode>& nodes, std::uint32_t id, std::span<const T> env) {
  using Ops = EvalOps<T>;
  const ExprNode& n = nodes[id];
  switch (n.kind) {
    case ExprNode::Kind::Const:
      return Ops::constant(n.value);
    case ExprNode::Kind::Var:
      return env[n.var];
    case ExprNode::Kind::Neg:
      return Ops::neg(eval_node(nodes, n.a, env));
    case ExprNode::Kind::Bin: {
      if (n.bin == BinOp::Pow) return eval_pow(eval_node(nodes, n.a, env), nodes[n.b].value);
      const T lhs = eval_node(nodes, n.a, env);
      const T rhs = eval_node(nodes, n.b, env);
      switch (n.bin) {
        case BinOp::Add: return Ops::add(lhs, rhs);
        case BinOp::Sub: return Ops::sub(lhs, rhs);
        case BinOp::Mul: return Ops::mul(lhs, rhs);
        default: return Ops::div(lhs, rhs);
      }
    }
    case ExprNode::Kind::Call: {
      const T arg = eval_node(nodes, n.a, env);
      switch (n.func) {
        case Func::Sin: return Ops::sin(arg);
        case Func::Cos: return Ops::cos(arg);
        case Func::Tan: return Ops::tan(arg);
        case Func::Exp: return Ops::exp(arg);
        case Func::Log: return Ops::log(arg);
        default: return Ops::sqrt(arg);
      }
    }
  }
  throw std::logic_error("corrupt expression node");
}

}  // namespace detail

inline Expr parse(std::string_view text, Mode mode) {
  bool blank = true;
  for (char c : text)
    if (c != ' ' && c != '\t' && c != '\r' && c != '\n') blank = false;
  if (blank) throw ParseError("empty expression", 0);
  return detail::Parser(text, mode).run();
}

template <class T>
T eval(const Expr& e, std::span<const T> env) {
  if (static_cast<int>(env.size()) < variable_count(e.mode()))
    throw std::logic_error("evaluation environment smaller than the variable set");
  return detail::eval_node<T>(e.nodes(), e.root(), env);
}

inline double eval_scalar(const Expr& e, std::span<const double> env) { return eval<double>(e, env); }

template <int N>
Jet2<N> eval_jet(const Expr& e, std::span<const Jet2<N>> env) {
  return eval<Jet2<N>>(e, env);
}

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
  if (v == 0.0) return "0";  // canonicalize -0
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace detail {

// Operator precedence levels used by the printer; a child is parenthesized
// when its level is below what its position requires. A negative constant
// prints with a leading minus, so it carries the unary-minus level.
inline int print_precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Bin:
      switch (n.bin) {
        case BinOp::Add:
        case BinOp::Sub: return 1;
        case BinOp::Mul:
        case BinOp::Div: return 2;
        case BinOp::Pow: return 4;
      }
      return 1;
    case ExprNode::Kind::Neg:
      return 3;
    case ExprNode::Kind::Const:
      return n.value < 0.0 ? 3 : 5;
    default:
      return 5;
  }
}

inline void print_node(const Expr& e, std::uint32_t id, int min_prec, std::string& out) {
  const ExprNode& n = e.nodes()[id];
  const int prec = print_precedence(n);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (n.kind) {
    case ExprNode::Kind::Const:
      out += format_double(n.value);
      break;
    case ExprNode::Kind::Var:
      out += variable_names(e.mode())[n.var];
      break;
    case ExprNode::Kind::Neg:
      out += '-';
      print_node(e, n.a, 3, out);
      break;
    case ExprNode::Kind::Bin: {
      const char* op = n.bin == BinOp::Add ? "+" : n.bin == BinOp::Sub ? "-"
                       : n.bin == BinOp::Mul ? "*" : n.bin == BinOp::Div ? "/" : "^";
      // The exponent is always a constant; level 3 lets a negated literal
      // print bare ("u^-2") while the parser folds it back into one node.
      const int left = n.bin == BinOp::Pow ? 5 : prec;
      const int right = n.bin == BinOp::Pow ? 3 : prec + 1;
      print_node(e, n.a, left, out);
      out += op;
      print_node(e, n.b, right, out);
      break;
    }
    case ExprNode::Kind::Call: {
      const char* name = n.func == Func::Sin ? "sin" : n.func == Func::Cos ? "cos"
                         : n.func == Func::Tan ? "tan" : n.func == Func::Exp ? "exp"
                         : n.func == Func::Log ? "log" : "sqrt";
      out += name;
      out += '(';
      print_node(e, n.a, 1, out);
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

inline bool nodes_equal(const Expr& x, std::uint32_t i, const Expr& y, std::uint32_t j) {
  const ExprNode& a = x.nodes()[i];
  const ExprNode& b = y.nodes()[j];
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::Const: return a.value == b.value;
    case ExprNode::Kind::Var: return a.var == b.var;
    case ExprNode::Kind::Neg: return nodes_equal(x, a.a, y, b.a);
    case ExprNode::Kind::Bin:
      return a.bin == b.bin && nodes_equal(x, a.a, y, b.a) && nodes_equal(x, a.b, y, b.b);
    case ExprNode::Kind::Call: return a.func == b.func && nodes_equal(x, a.a, y, b.a);
  }
  return false;
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_node(e, e.root(), 1, out);
  return out;
}

/// Tree-shape equality (same structure, operators and constants).
inline bool structurally_equal(const Expr& a, const Expr& b) {
  return a.mode() == b.mode() && detail::nodes_equal(a, a.root(), b, b.root());
}

}  // namespace h4
