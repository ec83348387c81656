#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gla {

struct Arity {
  int m = 0;  // base coordinates x1..xm
  int r = 0;  // fiber coordinates y1..yr
  int total() const { return m + r; }
  bool operator==(const Arity&) const = default;
};

struct Point {
  std::vector<double> x;
};

struct FiberPoint {
  std::vector<double> x;
  std::vector<double> y;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class ArityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Op : std::uint8_t { Const, Var, Neg, Sin, Cos, Exp, Log, Sqrt, Add, Sub, Mul, Div, Pow };
enum class VarKind : std::uint8_t { Base, Fiber };

struct Node;

// Immutable handle to a shared expression DAG node. Default-constructed is the constant 0.
class Expr {
 public:
  Expr();
  Expr(double c);  // NOLINT(google-explicit-constructor)

  static Expr x(int i);  // 0-based base coordinate
  static Expr y(int a);  // 0-based fiber coordinate
  static Expr var(VarKind k, int index);

  Op op() const;
  double value() const;
  VarKind var_kind() const;
  int var_index() const;
  int exponent() const;
  const Expr& arg(int k) const;

  bool is_const() const { return op() == Op::Const; }
  bool is_const(double c) const { return is_const() && value() == c; }
  bool is_zero() const { return is_const(0.0); }
  const Node* id() const { return node_.get(); }

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  VarKind kind = VarKind::Base;
  int index = 0;
  int exponent = 0;
  std::array<Expr, 2> args{Expr(std::shared_ptr<const Node>()), Expr(std::shared_ptr<const Node>())};
};

// Folding constructors.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }
Expr pow(const Expr& a, int n);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);

// Non-folding node construction, used by the parser so that parse/print round-trips exactly.
namespace raw {
Expr constant(double c);
Expr unary(Op op, const Expr& a);
Expr binary(Op op, const Expr& a, const Expr& b);
Expr power(const Expr& a, int n);
}  // namespace raw

Expr parse(std::string_view text, Arity arity);
std::string to_string(const Expr& e);
bool structurally_equal(const Expr& a, const Expr& b);

// Smallest arity containing every variable of e.
Arity used_arity(const Expr& e);
bool depends_on_fiber(const Expr& e);
void check_arity(const Expr& e, Arity arity);

Expr diff(const Expr& e, VarKind kind, int index);
inline Expr dx(const Expr& e, int i) { return diff(e, VarKind::Base, i); }
inline Expr dy(const Expr& e, int a) { return diff(e, VarKind::Fiber, a); }

// Replaces every base variable x_i by base[i] (fiber variables untouched).
Expr substitute_base(const Expr& e, std::span<const Expr> base);
// Replaces every variable; vars = base values followed by fiber values.
Expr substitute(const Expr& e, std::span<const Expr> base, std::span<const Expr> fiber);

double eval(const Expr& e, const FiberPoint& p);

std::size_t node_count(const Expr& e);

}  // namespace gla
