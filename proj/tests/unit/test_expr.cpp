#include <doctest.h>

#include <cmath>

#include "algebroid/expr.hpp"
#include "random_expr.hpp"

using namespace gla;

namespace {

double fd_partial(const Expr& e, FiberPoint p, VarKind kind, int idx, double h) {
  auto& slot = kind == VarKind::Base ? p.x[idx] : p.y[idx];
  double c = slot;
  slot = c + h;
  double fp = eval(e, p);
  slot = c - h;
  double fm = eval(e, p);
  return (fp - fm) / (2 * h);
}

}  // namespace

TEST_CASE("parse builds the tree the grammar prescribes") {
  Arity a{2, 2};
  Expr e = parse("x1*y2 + 3", a);
  REQUIRE(e.op() == Op::Add);
  CHECK(e.arg(0).op() == Op::Mul);
  CHECK(e.arg(0).arg(0).var_kind() == VarKind::Base);
  CHECK(e.arg(0).arg(1).var_kind() == VarKind::Fiber);
  CHECK(e.arg(0).arg(1).var_index() == 1);
  CHECK(e.arg(1).is_const(3.0));

  Expr s = parse("sin(x1)^2", a);
  REQUIRE(s.op() == Op::Pow);
  CHECK(s.exponent() == 2);
  CHECK(s.arg(0).op() == Op::Sin);
}

TEST_CASE("parse rejects bad input") {
  Arity a{2, 2};
  CHECK_THROWS_AS(parse("y3", a), ArityError);
  CHECK_THROWS_AS(parse("x0", a), ArityError);
  CHECK_THROWS_AS(parse("x1 +", a), ParseError);
  CHECK_THROWS_AS(parse("tan(x1)", a), ParseError);
  CHECK_THROWS_AS(parse("(x1", a), ParseError);
  CHECK_THROWS_AS(parse("x1^y1", a), ParseError);
  CHECK_THROWS_AS(parse("-x1", a), ParseError);
  try {
    parse("x1 + * 2", a);
    FAIL("expected error");
  } catch (const ParseError& err) {
    CHECK(err.position() == 5);
  }
}

TEST_CASE("eval arithmetic and domain errors") {
  Arity a{2, 2};
  FiberPoint p{{2, 0}, {0, 5}};
  CHECK(eval(parse("x1*y2+3", a), p) == 13.0);
  CHECK_THROWS_AS(eval(parse("1/x2", a), p), DomainError);
  CHECK_THROWS_AS(eval(parse("log(x2)", a), p), DomainError);
  CHECK_THROWS_AS(eval(parse("log(neg(x1))", a), p), DomainError);
  CHECK_THROWS_AS(eval(parse("sqrt(neg(x1))", a), p), DomainError);
  CHECK_THROWS_AS(eval(parse("x2^-2", a), p), DomainError);
  CHECK(eval(parse("x1^-2", a), p) == doctest::Approx(0.25));
  CHECK(eval(parse("exp(0)*2.5e-1", a), p) == 0.25);
  CHECK(eval(dx(parse("sin(x1)", a), 0), FiberPoint{{0, 0}, {0, 0}}) == 1.0);
}

TEST_CASE("diff prints in folded form") {
  Arity a{2, 2};
  CHECK(to_string(dx(parse("x1^2*y1", a), 0)) == "2*x1*y1");
  CHECK(to_string(dy(dy(parse("y1^3", a), 0), 0)) == "6*y1");
  CHECK(dx(parse("y1*y2 + 7", a), 0).is_zero());
}

TEST_CASE("symbolic derivatives agree with central differences on 50 random polynomials") {
  Arity a{3, 3};
  testing::ExprGen gen(a, 7);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    Expr e = gen.polynomial(6, 4);
    FiberPoint p = gen.point();
    for (int v = 0; v < a.total(); ++v) {
      VarKind kind = v < a.m ? VarKind::Base : VarKind::Fiber;
      int idx = v < a.m ? v : v - a.m;
      double d = eval(diff(e, kind, idx), p);
      double fd = fd_partial(e, p, kind, idx, 1e-6);
      worst = std::max(worst, std::abs(d - fd) / (1 + std::abs(d)));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("derivatives of transcendental expressions agree with central differences") {
  Arity a{2, 2};
  testing::ExprGen gen(a, 11);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    Expr e = gen.smooth(4);
    FiberPoint p = gen.point();
    for (int v = 0; v < a.total(); ++v) {
      VarKind kind = v < a.m ? VarKind::Base : VarKind::Fiber;
      int idx = v < a.m ? v : v - a.m;
      double d = eval(diff(e, kind, idx), p);
      double fd = fd_partial(e, p, kind, idx, 1e-6);
      worst = std::max(worst, std::abs(d - fd) / (1 + std::abs(d)));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("sum and product rules hold pointwise") {
  Arity a{2, 2};
  testing::ExprGen gen(a, 3);
  for (int k = 0; k < 10; ++k) {
    Expr e1 = gen.smooth(3), e2 = gen.smooth(3);
    for (int v = 0; v < a.total(); ++v) {
      VarKind kind = v < a.m ? VarKind::Base : VarKind::Fiber;
      int idx = v < a.m ? v : v - a.m;
      Expr ds = diff(e1 + e2, kind, idx);
      Expr dp = diff(e1 * e2, kind, idx);
      Expr d1 = diff(e1, kind, idx), d2 = diff(e2, kind, idx);
      for (int s = 0; s < 100; ++s) {
        FiberPoint p = gen.point();
        double lhs = eval(ds, p), rhs = eval(d1, p) + eval(d2, p);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));
        double lp = eval(dp, p), rp = eval(d1, p) * eval(e2, p) + eval(e1, p) * eval(d2, p);
        CHECK(std::abs(lp - rp) <= 1e-12 * (1 + std::abs(rp)));
      }
    }
  }
}

TEST_CASE("mixed partials commute") {
  Arity a{2, 2};
  testing::ExprGen gen(a, 5);
  for (int k = 0; k < 20; ++k) {
    Expr e = gen.smooth(4);
    Expr uv = dy(dx(e, 0), 1);
    Expr vu = dx(dy(e, 1), 0);
    Expr xx = dx(dx(e, 1), 0);
    Expr xx2 = dx(dx(e, 0), 1);
    for (int s = 0; s < 20; ++s) {
      FiberPoint p = gen.point();
      double l = eval(uv, p), r = eval(vu, p);
      CHECK(std::abs(l - r) <= 1e-12 * (1 + std::abs(l)));
      double l2 = eval(xx, p), r2 = eval(xx2, p);
      CHECK(std::abs(l2 - r2) <= 1e-12 * (1 + std::abs(l2)));
    }
  }
}

TEST_CASE("print then parse reproduces the parsed tree") {
  Arity a{3, 2};
  testing::ExprGen gen(a, 13);
  for (int k = 0; k < 500; ++k) {
    Expr e = gen.raw_tree(5);
    std::string text = to_string(e);
    Expr back = parse(text, a);
    CHECK_MESSAGE(structurally_equal(e, back), text);
    CHECK(to_string(back) == text);
  }
  for (const char* s : {"x1 - (x2 - x3)", "x1/(y1*y2)", "(x1^2)^3", "neg(2.5)*x1", "1e-05 + x1",
                        "((x1))", "x1 - x2 - x3", "sqrt(x1)^-2"}) {
    Expr e = parse(s, a);
    CHECK(structurally_equal(parse(to_string(e), a), e));
  }
}

TEST_CASE("derivatives of printed expressions survive a round trip") {
  Arity a{2, 2};
  testing::ExprGen gen(a, 17);
  for (int k = 0; k < 50; ++k) {
    Expr d = dy(gen.smooth(3), 0);
    Expr back = parse(to_string(d), a);
    FiberPoint p = gen.point();
    CHECK(eval(back, p) == doctest::Approx(eval(d, p)).epsilon(1e-15));
  }
}

TEST_CASE("substitution composes fields") {
  Arity a{2, 1};
  Expr f = parse("x1*x2 + y1", a);
  std::vector<Expr> h{parse("x1 + 1", a), parse("2*x2", a)};
  Expr g = substitute_base(f, h);
  FiberPoint p{{0.5, -0.25}, {3}};
  CHECK(eval(g, p) == doctest::Approx(1.5 * -0.5 + 3));
  CHECK(used_arity(parse("x2*y1", a)) == Arity{2, 1});
  CHECK_FALSE(depends_on_fiber(parse("x2", a)));
}
