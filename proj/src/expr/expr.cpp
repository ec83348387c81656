#include "algebroid/expr.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "algebroid/tape.hpp"

namespace gla {

namespace {

std::shared_ptr<const Node> make_const(double c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = c;
  return n;
}

const std::shared_ptr<const Node>& zero_node() {
  static const std::shared_ptr<const Node> z = make_const(0.0);
  return z;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}
Expr::Expr(double c) : node_(c == 0.0 && !std::signbit(c) ? zero_node() : make_const(c)) {}

Expr Expr::var(VarKind k, int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->kind = k;
  n->index = index;
  return Expr(std::move(n));
}
Expr Expr::x(int i) { return var(VarKind::Base, i); }
Expr Expr::y(int a) { return var(VarKind::Fiber, a); }

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
VarKind Expr::var_kind() const { return node_->kind; }
int Expr::var_index() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
const Expr& Expr::arg(int k) const { return node_->args[static_cast<std::size_t>(k)]; }

namespace raw {

Expr constant(double c) { return Expr(c); }

Expr unary(Op op, const Expr& a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args[0] = a;
  return Expr(std::move(n));
}

Expr binary(Op op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args[0] = a;
  n->args[1] = b;
  return Expr(std::move(n));
}

Expr power(const Expr& a, int k) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->args[0] = a;
  n->exponent = k;
  return Expr(std::move(n));
}

}  // namespace raw

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return raw::binary(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() - b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return raw::binary(Op::Sub, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_const()) return Expr(-a.value());
  if (a.op() == Op::Neg) return a.arg(0);
  return raw::unary(Op::Neg, a);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr(0.0);
  if (a.is_const(1.0)) return b;
  if (b.is_const(1.0)) return a;
  if (b.is_const()) return b * a;
  if (a.is_const()) {
    if (a.is_const(-1.0)) return -b;
    if (b.op() == Op::Mul && b.arg(0).is_const()) return Expr(a.value() * b.arg(0).value()) * b.arg(1);
  }
  return raw::binary(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const() && b.value() != 0.0) return Expr(a.value() / b.value());
  if (b.is_const(1.0)) return a;
  if (a.is_zero() && b.is_const() && b.value() != 0.0) return Expr(0.0);
  return raw::binary(Op::Div, a, b);
}

Expr pow(const Expr& a, int n) {
  if (n == 0) return Expr(1.0);
  if (n == 1) return a;
  if (a.is_const() && (a.value() != 0.0 || n > 0)) {
    double v = std::pow(a.value(), n);
    if (std::isfinite(v)) return Expr(v);
  }
  if (a.op() == Op::Pow) {
    long long k = static_cast<long long>(a.exponent()) * n;
    if (k == static_cast<int>(k) && a.exponent() > 0 && n > 0) return pow(a.arg(0), static_cast<int>(k));
  }
  return raw::power(a, n);
}

Expr sin(const Expr& a) { return a.is_const() ? Expr(std::sin(a.value())) : raw::unary(Op::Sin, a); }
Expr cos(const Expr& a) { return a.is_const() ? Expr(std::cos(a.value())) : raw::unary(Op::Cos, a); }
Expr exp(const Expr& a) {
  if (a.is_const() && std::isfinite(std::exp(a.value()))) return Expr(std::exp(a.value()));
  return raw::unary(Op::Exp, a);
}
Expr log(const Expr& a) {
  if (a.is_const() && a.value() > 0.0) return Expr(std::log(a.value()));
  return raw::unary(Op::Log, a);
}
Expr sqrt(const Expr& a) {
  if (a.is_const() && a.value() >= 0.0) return Expr(std::sqrt(a.value()));
  return raw::unary(Op::Sqrt, a);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Const:
      return a.value() == b.value() && std::signbit(a.value()) == std::signbit(b.value());
    case Op::Var:
      return a.var_kind() == b.var_kind() && a.var_index() == b.var_index();
    case Op::Pow:
      return a.exponent() == b.exponent() && structurally_equal(a.arg(0), b.arg(0));
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return structurally_equal(a.arg(0), b.arg(0)) && structurally_equal(a.arg(1), b.arg(1));
    default:
      return structurally_equal(a.arg(0), b.arg(0));
  }
}

namespace {

int arg_count(Op op) {
  switch (op) {
    case Op::Const:
    case Op::Var:
      return 0;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return 2;
    default:
      return 1;
  }
}

template <class F>
void visit_dag(const Expr& root, F&& f) {
  std::unordered_set<const Node*> seen;
  std::vector<Expr> stack{root};
  while (!stack.empty()) {
    Expr e = stack.back();
    stack.pop_back();
    if (!seen.insert(e.id()).second) continue;
    f(e);
    for (int k = 0; k < arg_count(e.op()); ++k) stack.push_back(e.arg(k));
  }
}

}  // namespace

Arity used_arity(const Expr& e) {
  Arity a;
  visit_dag(e, [&](const Expr& n) {
    if (n.op() != Op::Var) return;
    if (n.var_kind() == VarKind::Base) a.m = std::max(a.m, n.var_index() + 1);
    else a.r = std::max(a.r, n.var_index() + 1);
  });
  return a;
}

bool depends_on_fiber(const Expr& e) { return used_arity(e).r > 0; }

void check_arity(const Expr& e, Arity arity) {
  Arity u = used_arity(e);
  if (u.m > arity.m || u.r > arity.r)
    throw ArityError("expression uses variables beyond arity (m=" + std::to_string(arity.m) +
                     ", r=" + std::to_string(arity.r) + ")");
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 0;
  visit_dag(e, [&](const Expr&) { ++n; });
  return n;
}

namespace {

struct Differ {
  VarKind kind;
  int index;
  std::unordered_map<const Node*, Expr> memo;

  Expr run(const Expr& e) {
    if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
    Expr d = step(e);
    memo.emplace(e.id(), d);
    return d;
  }

  Expr step(const Expr& e) {
    switch (e.op()) {
      case Op::Const:
        return Expr(0.0);
      case Op::Var:
        return (e.var_kind() == kind && e.var_index() == index) ? Expr(1.0) : Expr(0.0);
      case Op::Neg:
        return -run(e.arg(0));
      case Op::Sin: {
        Expr du = run(e.arg(0));
        return du.is_zero() ? du : cos(e.arg(0)) * du;
      }
      case Op::Cos: {
        Expr du = run(e.arg(0));
        return du.is_zero() ? du : -(sin(e.arg(0)) * du);
      }
      case Op::Exp: {
        Expr du = run(e.arg(0));
        return du.is_zero() ? du : e * du;
      }
      case Op::Log: {
        Expr du = run(e.arg(0));
        return du.is_zero() ? du : du / e.arg(0);
      }
      case Op::Sqrt: {
        Expr du = run(e.arg(0));
        return du.is_zero() ? du : du / (Expr(2.0) * e);
      }
      case Op::Add:
        return run(e.arg(0)) + run(e.arg(1));
      case Op::Sub:
        return run(e.arg(0)) - run(e.arg(1));
      case Op::Mul:
        return run(e.arg(0)) * e.arg(1) + e.arg(0) * run(e.arg(1));
      case Op::Div: {
        Expr da = run(e.arg(0));
        Expr db = run(e.arg(1));
        if (db.is_zero()) return da / e.arg(1);
        return (da * e.arg(1) - e.arg(0) * db) / pow(e.arg(1), 2);
      }
      case Op::Pow: {
        Expr du = run(e.arg(0));
        if (du.is_zero()) return du;
        int n = e.exponent();
        return Expr(static_cast<double>(n)) * pow(e.arg(0), n - 1) * du;
      }
    }
    return Expr(0.0);
  }
};

struct Substituter {
  std::span<const Expr> base;
  std::span<const Expr> fiber;
  bool fiber_too;
  std::unordered_map<const Node*, Expr> memo;

  Expr run(const Expr& e) {
    if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
    Expr s = step(e);
    memo.emplace(e.id(), s);
    return s;
  }

  Expr step(const Expr& e) {
    switch (e.op()) {
      case Op::Const:
        return e;
      case Op::Var: {
        auto idx = static_cast<std::size_t>(e.var_index());
        if (e.var_kind() == VarKind::Base) {
          if (idx >= base.size()) throw ArityError("substitution: base variable out of range");
          return base[idx];
        }
        if (!fiber_too) return e;
        if (idx >= fiber.size()) throw ArityError("substitution: fiber variable out of range");
        return fiber[idx];
      }
      case Op::Neg:
        return -run(e.arg(0));
      case Op::Sin:
        return sin(run(e.arg(0)));
      case Op::Cos:
        return cos(run(e.arg(0)));
      case Op::Exp:
        return exp(run(e.arg(0)));
      case Op::Log:
        return log(run(e.arg(0)));
      case Op::Sqrt:
        return sqrt(run(e.arg(0)));
      case Op::Add:
        return run(e.arg(0)) + run(e.arg(1));
      case Op::Sub:
        return run(e.arg(0)) - run(e.arg(1));
      case Op::Mul:
        return run(e.arg(0)) * run(e.arg(1));
      case Op::Div:
        return run(e.arg(0)) / run(e.arg(1));
      case Op::Pow:
        return pow(run(e.arg(0)), e.exponent());
    }
    return e;
  }
};

}  // namespace

Expr diff(const Expr& e, VarKind kind, int index) {
  Differ d{kind, index, {}};
  return d.run(e);
}

Expr substitute_base(const Expr& e, std::span<const Expr> base) {
  Substituter s{base, {}, false, {}};
  return s.run(e);
}

Expr substitute(const Expr& e, std::span<const Expr> base, std::span<const Expr> fiber) {
  Substituter s{base, fiber, true, {}};
  return s.run(e);
}

double eval(const Expr& e, const FiberPoint& p) {
  Arity arity{static_cast<int>(p.x.size()), static_cast<int>(p.y.size())};
  check_arity(e, arity);
  std::vector<double> vars(p.x);
  vars.insert(vars.end(), p.y.begin(), p.y.end());
  Tape t = Tape::compile(std::span<const Expr>(&e, 1), arity);
  double out = 0.0;
  t.eval(vars, std::span<double>(&out, 1));
  return out;
}

}  // namespace gla
