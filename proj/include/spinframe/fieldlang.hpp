// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fieldlang.hpp
 * @brief Expression language for field definitions.
 *
 * Grammar (EBNF):
 *
 *   expr    = term , { ( "+" | "-" ) , term } ;
 *   term    = unary , { ( "*" | "/" ) , unary } ;
 *   unary   = ( "-" | "+" ) , unary | power ;
 *   power   = primary , [ "^" , unary ] ;          (* right-associative *)
 *   primary = number | "pi" | coord
 *           | func , "(" , expr , { "," , expr } , ")"
 *           | "(" , expr , ")" ;
 *   func    = "sin" | "cos" | "tan" | "exp" | "log" | "sqrt"
 *           | "sinh" | "cosh" | "atan2" ;
 *   number  = digits , [ "." , [ digits ] ] , [ exponent ]
 *           | "." , digits , [ exponent ] ;
 *
 * Precedence is ^ > unary minus > * / > + −, so "-r^2" is −(r²) and
 * "2^3^2" is 2^9. There is no implicit multiplication: "2r" is an error.
 */

#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spinframe::fieldlang {

enum class Func : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Atan2 };

struct FuncInfo {
  std::string_view name;
  Func func;
  int arity;
};

inline constexpr std::array<FuncInfo, 9> kFunctions{{
    {"sin", Func::Sin, 1},
    {"cos", Func::Cos, 1},
    {"tan", Func::Tan, 1},
    {"exp", Func::Exp, 1},
    {"log", Func::Log, 1},
    {"sqrt", Func::Sqrt, 1},
    {"sinh", Func::Sinh, 1},
    {"cosh", Func::Cosh, 1},
    {"atan2", Func::Atan2, 2},
}};

inline const FuncInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return &f;
  return nullptr;
}

inline bool is_reserved_name(std::string_view name) {
  return name == "pi" || find_function(name) != nullptr;
}

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, UnknownFunction, WrongArity, TooDeep };

  ParseError(Kind kind, std::size_t offset, const std::string& msg)
      : std::runtime_error(msg + " at byte " + std::to_string(offset)), kind_(kind), offset_(offset) {}

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

struct Node {
  enum class Kind : std::uint8_t { Number, Coord, Neg, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Number;
  Func func = Func::Sin;
  int coord = -1;
  int lhs = -1;
  int rhs = -1;
  double value = 0.0;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Immutable expression tree stored in post-order; the root is the last node.
class Expr {
 public:
  Expr() = default;

  [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<std::string>& coords() const noexcept { return coords_; }
  [[nodiscard]] int root() const noexcept { return static_cast<int>(nodes_.size()) - 1; }

  friend bool operator==(const Expr&, const Expr&) = default;

 private:
  friend class Parser;
  std::vector<Node> nodes_;
  std::vector<std::string> coords_;
};

/// Recursive-descent parser. Nesting deeper than kMaxDepth is a positioned error.
class Parser {
 public:
  static constexpr int kMaxDepth = 256;

  Parser(std::string_view src, std::vector<std::string> coords) : src_(src) {
    expr_.coords_ = std::move(coords);
  }

  Expr run() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(ParseError::Kind::Syntax, pos_, "empty expression");
    parse_expr();
    skip_ws();
    if (pos_ < src_.size()) throw ParseError(ParseError::Kind::Syntax, pos_, unexpected());
    return std::move(expr_);
  }

 private:
  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth)
        throw ParseError(ParseError::Kind::TooDeep, p.pos_, "expression nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;
  };

  int push(Node n) {
    expr_.nodes_.push_back(n);
    return static_cast<int>(expr_.nodes_.size()) - 1;
  }
  int push_binary(Node::Kind kind, int lhs, int rhs) {
    Node n;
    n.kind = kind;
    n.lhs = lhs;
    n.rhs = rhs;
    return push(n);
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
  }
  [[nodiscard]] char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }
  [[nodiscard]] std::string unexpected() const {
    if (pos_ >= src_.size()) return "unexpected end of input";
    const unsigned char c = static_cast<unsigned char>(src_[pos_]);
    if (c >= 0x20 && c < 0x7f) return std::string("unexpected '") + src_[pos_] + "'";
    return "unexpected byte 0x" + std::to_string(static_cast<int>(c));
  }
  void expect(char c) {
    if (peek() != c)
      throw ParseError(ParseError::Kind::Syntax, pos_, unexpected() + ", expected '" + std::string(1, c) + "'");
    ++pos_;
  }

  static bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
  static bool digit(char c) { return c >= '0' && c <= '9'; }

  int parse_expr() {
    DepthGuard guard(*this);
    int lhs = parse_term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      const int rhs = parse_term();
      lhs = push_binary(c == '+' ? Node::Kind::Add : Node::Kind::Sub, lhs, rhs);
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      const int rhs = parse_unary();
      lhs = push_binary(c == '*' ? Node::Kind::Mul : Node::Kind::Div, lhs, rhs);
    }
  }

  int parse_unary() {
    DepthGuard guard(*this);
    const char c = peek();
    if (c == '-' || c == '+') {
      ++pos_;
      const int operand = parse_unary();
      if (c == '+') return operand;
      Node n;
      n.kind = Node::Kind::Neg;
      n.lhs = operand;
      return push(n);
    }
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (peek() != '^') return base;
    ++pos_;
    const int exponent = parse_unary();
    return push_binary(Node::Kind::Pow, base, exponent);
  }

  int parse_primary() {
    const char c = peek();
    const std::size_t start = pos_;
    if (c == '(') {
      ++pos_;
      const int inner = parse_expr();
      expect(')');
      return inner;
    }
    if (digit(c) || c == '.') return parse_number();
    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      if (peek() == '(') return parse_call(name, start);
      if (name == "pi") {
        Node n;
        n.value = std::numbers::pi;
        return push(n);
      }
      for (std::size_t i = 0; i < expr_.coords_.size(); ++i)
        if (expr_.coords_[i] == name) {
          Node n;
          n.kind = Node::Kind::Coord;
          n.coord = static_cast<int>(i);
          return push(n);
        }
      if (find_function(name) != nullptr)
        throw ParseError(ParseError::Kind::Syntax, start, "function '" + std::string(name) + "' needs arguments");
      throw ParseError(ParseError::Kind::UnknownIdentifier, start, "unknown identifier '" + std::string(name) + "'");
    }
    throw ParseError(ParseError::Kind::Syntax, pos_, unexpected());
  }

  int parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && digit(src_[p])) {
        pos_ = p;
        while (pos_ < src_.size() && digit(src_[pos_])) ++pos_;
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    if (text == ".") throw ParseError(ParseError::Kind::Syntax, start, "malformed number");
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec == std::errc::invalid_argument || res.ptr != text.data() + text.size())
      throw ParseError(ParseError::Kind::Syntax, start, "malformed number");
    if (res.ec == std::errc::result_out_of_range) value = HUGE_VAL;  // IEEE overflow semantics
    if (pos_ < src_.size() && ident_start(src_[pos_]))
      throw ParseError(ParseError::Kind::Syntax, pos_, "implicit multiplication is not supported");
    Node n;
    n.value = value;
    return push(n);
  }

  int parse_call(std::string_view name, std::size_t start) {
    const FuncInfo* info = find_function(name);
    if (info == nullptr)
      throw ParseError(ParseError::Kind::UnknownFunction, start, "unknown function '" + std::string(name) + "'");
    expect('(');
    std::vector<int> args;
    if (peek() != ')') {
      args.push_back(parse_expr());
      while (peek() == ',') {
        ++pos_;
        args.push_back(parse_expr());
      }
    }
    expect(')');
    if (static_cast<int>(args.size()) != info->arity)
      throw ParseError(ParseError::Kind::WrongArity, start,
                       "function '" + std::string(name) + "' takes " + std::to_string(info->arity) +
                           " argument(s), got " + std::to_string(args.size()));
    Node n;
    n.kind = Node::Kind::Call;
    n.func = info->func;
    n.lhs = args[0];
    if (info->arity == 2) n.rhs = args[1];
    return push(n);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  Expr expr_;
};

inline Expr parse(std::string_view src, const std::vector<std::string>& coords) {
  return Parser(src, coords).run();
}

inline double apply(Func f, double a, double b) {
  switch (f) {
    case Func::Sin: return std::sin(a);
    case Func::Cos: return std::cos(a);
    case Func::Tan: return std::tan(a);
    case Func::Exp: return std::exp(a);
    case Func::Log: return std::log(a);
    case Func::Sqrt: return std::sqrt(a);
    case Func::Sinh: return std::sinh(a);
    case Func::Cosh: return std::cosh(a);
    case Func::Atan2: return std::atan2(a, b);
  }
  return std::nan("");
}

/// IEEE evaluation at a coordinate tuple. Non-finite results propagate.
inline double eval(const Expr& e, std::span<const double> point) {
  if (point.size() != e.coords().size())
    throw std::invalid_argument("eval: point has " + std::to_string(point.size()) + " coordinates, expression expects " +
                                std::to_string(e.coords().size()));
  const auto& nodes = e.nodes();
  thread_local std::vector<double> vals;
  vals.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    double v = 0.0;
    switch (n.kind) {
      case Node::Kind::Number: v = n.value; break;
      case Node::Kind::Coord: v = point[static_cast<std::size_t>(n.coord)]; break;
      case Node::Kind::Neg: v = -vals[n.lhs]; break;
      case Node::Kind::Add: v = vals[n.lhs] + vals[n.rhs]; break;
      case Node::Kind::Sub: v = vals[n.lhs] - vals[n.rhs]; break;
      case Node::Kind::Mul: v = vals[n.lhs] * vals[n.rhs]; break;
      case Node::Kind::Div: v = vals[n.lhs] / vals[n.rhs]; break;
      case Node::Kind::Pow: v = std::pow(vals[n.lhs], vals[n.rhs]); break;
      case Node::Kind::Call: v = apply(n.func, vals[n.lhs], n.rhs >= 0 ? vals[n.rhs] : 0.0); break;
    }
    vals[i] = v;
  }
  return nodes.empty() ? std::nan("") : vals.back();
}

namespace detail {

inline void print_node(const Expr& e, int idx, std::string& out) {
  const Node& n = e.nodes()[static_cast<std::size_t>(idx)];
  switch (n.kind) {
    case Node::Kind::Number: {
      std::array<char, 32> buf{};
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
      out.append(buf.data(), res.ptr);
      return;
    }
    case Node::Kind::Coord: out += e.coords()[static_cast<std::size_t>(n.coord)]; return;
    case Node::Kind::Neg:
      out += "(-";
      print_node(e, n.lhs, out);
      out += ')';
      return;
    case Node::Kind::Call:
      for (const auto& f : kFunctions)
        if (f.func == n.func) out += f.name;
      out += '(';
      print_node(e, n.lhs, out);
      if (n.rhs >= 0) {
        out += ',';
        print_node(e, n.rhs, out);
      }
      out += ')';
      return;
    default: break;
  }
  const char op = n.kind == Node::Kind::Add   ? '+'
                  : n.kind == Node::Kind::Sub ? '-'
                  : n.kind == Node::Kind::Mul ? '*'
                  : n.kind == Node::Kind::Div ? '/'
                                              : '^';
  out += '(';
  print_node(e, n.lhs, out);
  out += op;
  print_node(e, n.rhs, out);
  out += ')';
}

}  // namespace detail

/// Fully parenthesised source text; parse(print(e)) evaluates identically to e.
inline std::string print(const Expr& e) {
  std::string out;
  if (!e.nodes().empty()) detail::print_node(e, e.root(), out);
  return out;
}

/// A shaped collection of expressions over one coordinate list, row-major.
struct FieldDef {
  std::vector<std::string> coords;
  std::vector<std::size_t> shape;  ///< {} scalar, {m}, {m,m} or {m,m,m}
  std::vector<Expr> exprs;

  [[nodiscard]] std::size_t size() const noexcept { return exprs.size(); }

  static FieldDef from_sources(std::vector<std::string> coords, std::vector<std::size_t> shape,
                               const std::vector<std::string>& sources) {
    std::size_t expect = 1;
    for (std::size_t d : shape) expect *= d;
    if (sources.size() != expect)
      throw std::invalid_argument("FieldDef: " + std::to_string(sources.size()) + " expressions for a shape of " +
                                  std::to_string(expect) + " entries");
    FieldDef def{std::move(coords), std::move(shape), {}};
    def.exprs.reserve(sources.size());
    for (const auto& s : sources) def.exprs.push_back(parse(s, def.coords));
    return def;
  }

  void evaluate(std::span<const double> point, std::span<double> out) const {
    for (std::size_t i = 0; i < exprs.size(); ++i) out[i] = eval(exprs[i], point);
  }
};

}  // namespace spinframe::fieldlang
