#include <doctest.h>

#include "algebroid/connection.hpp"
#include "fixtures.hpp"

using namespace gla;
using gla::testing::samples;

namespace {

double section_residual(const TangentSection& A, const TangentSection& B, const SampleSet& s) {
  return max_residual(flatten(A - B), s).max_abs;
}

NlConnection nontrivial_connection() {
  auto cfg = gla::testing::bundled("nontrivial");
  return NlConnection(cfg.alg, cfg.gamma);
}

}  // namespace

TEST_CASE("projector algebra on adapted sections") {
  auto cfg = gla::testing::bundled("nontrivial");
  NlConnection conn(cfg.alg, cfg.gamma);
  SampleSet s = samples(cfg.arity(), 40);
  for (const TangentSection& X : probe_sections(cfg.arity(), 3)) {
    CHECK(section_residual(apply_H(X) + apply_V(X), X, s) == 0.0);
    CHECK(section_residual(apply_H(apply_H(X)), apply_H(X), s) == 0.0);
    CHECK(max_residual(flatten(apply_V(apply_H(X))), s).max_abs == 0.0);
    CHECK(section_residual(apply_P(apply_P(X)), X, s) == 0.0);
    CHECK(section_residual(apply_P(X), apply_H(X) - apply_V(X), s) == 0.0);
    // J is vertical-valued, kills verticals, and squares to zero
    TangentSection JX = apply_J(conn, cfg.gh, X);
    CHECK(max_residual(flatten(apply_H(JX)), s).max_abs == 0.0);
    CHECK(max_residual(flatten(apply_J(conn, cfg.gh, apply_V(X))), s).max_abs == 0.0);
    CHECK(max_residual(flatten(apply_J(conn, cfg.gh, JX)), s).max_abs == 0.0);
  }
}

TEST_CASE("adapted frame round trip") {
  NlConnection conn = nontrivial_connection();
  SampleSet s = samples(conn.arity(), 40);
  for (const TangentSection& X : probe_sections(conn.arity(), 3))
    CHECK(section_residual(from_natural(conn, to_natural(conn, X)), X, s) < 1e-13);
}

TEST_CASE("horizontal frame action") {
  const Arity a{2, 2};
  SUBCASE("zero connection reduces to the anchored derivative") {
    auto alg = gla::testing::standard_algebroid(2, 2);
    NlConnection conn(alg, std::vector<Expr>(4));
    Expr f = parse("x1^2*x2 + y1*y2", a);
    std::vector<Expr> res{conn.delta(0, f) - parse("2*x1*x2", a)};
    CHECK(max_residual(res, samples(a, 20)).max_abs == 0.0);
    CHECK(conn.delta(1, Expr::y(0)).is_zero());
  }
  SUBCASE("connection term acts on the fiber") {
    auto alg = gla::testing::standard_algebroid(2, 2);
    NlConnection conn(alg, {Expr(0.0), Expr::y(0), Expr(0.0), Expr(0.0)});
    // delta_1 y1 = -Gamma^1_1 = 0 ; delta_2 y1 = -Gamma^1_2 = -y1
    CHECK(conn.delta(0, Expr::y(0)).is_zero());
    SampleSet s = samples(a, 20);
    std::vector<Expr> res{conn.delta(1, Expr::y(0)) + Expr::y(0)};
    CHECK(max_residual(res, s).max_abs == 0.0);
  }
  SUBCASE("matches a finite difference along the anchor") {
    auto cfg = gla::testing::bundled("nontrivial");
    NlConnection conn(cfg.alg, cfg.gamma);
    Expr f = parse("sin(x1)*y2 + x2*y1^2", a);
    FiberPoint p{{0.3, -0.2}, {0.5, 0.7}};
    const double eps = 1e-6;
    for (int b = 0; b < 2; ++b) {
      // direction: anchor of e_b at h(x) on the base, -Gamma^c_b on the fiber
      std::vector<double> dxv(2), dyv(2);
      for (int i = 0; i < 2; ++i) dxv[static_cast<std::size_t>(i)] = eval(cfg.alg->rho_h(i, b), p);
      for (int c = 0; c < 2; ++c) dyv[static_cast<std::size_t>(c)] = -eval(conn.gamma(c, b), p);
      auto shifted = [&](double t) {
        FiberPoint q = p;
        for (int i = 0; i < 2; ++i) q.x[static_cast<std::size_t>(i)] += t * dxv[static_cast<std::size_t>(i)];
        for (int c = 0; c < 2; ++c) q.y[static_cast<std::size_t>(c)] += t * dyv[static_cast<std::size_t>(c)];
        return eval(f, q);
      };
      CHECK(eval(conn.delta(b, f), p) == doctest::Approx((shifted(eps) - shifted(-eps)) / (2 * eps)).epsilon(1e-7));
    }
  }
}

TEST_CASE("frame brackets agree with the adapted-frame formulas") {
  NlConnection conn = nontrivial_connection();
  Report rep = frame_bracket_check(conn, samples(conn.arity(), 60), 1e-9);
  CHECK_FALSE(rep.any_failed());
}

TEST_CASE("bracket is antisymmetric on random adapted sections") {
  NlConnection conn = nontrivial_connection();
  SampleSet s = samples(conn.arity(), 40);
  auto probes = probe_sections(conn.arity(), 2);
  CHECK(section_residual(bracket(conn, probes[0], probes[1]), zero_section(2) - bracket(conn, probes[1], probes[0]),
                         s) < 1e-11);
}

TEST_CASE("flat connection has zero curvature") {
  auto alg = gla::testing::standard_algebroid(2, 2);
  NlConnection conn(alg, std::vector<Expr>(4));
  for (const Expr& e : curvature_R(conn)) CHECK(e.is_zero());
}
