#include <doctest.h>

#include "algebroid/mech.hpp"
#include "fixtures.hpp"

using namespace gla;
using gla::testing::samples;

namespace {

const Arity kA{2, 2};

// classical second-order system with x-dependent symmetric Christoffel symbols
MechSystem classical() {
  auto alg = gla::testing::standard_algebroid(2, 2);
  std::vector<Expr> G{parse("0.5*(x2*y1^2 + 2*sin(x1)*y1*y2)", kA), parse("0.5*(x1^2*y2^2 - y1^2)", kA)};
  return make_system(alg, GhMorphism::identity(2), G, {Expr(0.0), Expr(0.0)});
}

}  // namespace

TEST_CASE("classical quadratic spray: canonical connection is the fiber derivative") {
  MechSystem sys = classical();
  SampleSet s = samples(kA, 60);
  NlConnection conn = canonical_connection(sys);
  std::vector<Expr> res;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) res.push_back(conn.gamma(a, c) - dy(sys.G[static_cast<std::size_t>(a)], c));
  CHECK(max_residual(res, s).max_abs < 1e-13);
  CHECK(is_spray(sys, s, 1e-9));
  for (auto* check : {&spray_condition, &closure_check, &homogeneity_check, &liouville_transport_check, &spray_mixed_curvature_check,
                      &projector_oracle_check}) {
    Report rep = (*check)(sys, s, 1e-9);
    for (const auto& c : rep.checks) {
      INFO(c.check);
      CHECK(c.status == Status::Pass);
    }
  }
}

TEST_CASE("reduced coefficients subtract a quarter of the external force") {
  auto alg = gla::testing::standard_algebroid(2, 2);
  MechSystem sys = make_system(alg, GhMorphism::identity(2), {parse("y1^2", kA), Expr(0.0)},
                               {parse("4*y1*y2", kA), parse("x1*y2^2", kA)});
  SampleSet s = samples(kA, 20);
  std::vector<Expr> res{sys.reduced(0) - parse("y1^2 - y1*y2", kA), sys.reduced(1) + parse("0.25*x1*y2^2", kA)};
  CHECK(max_residual(res, s).max_abs < 1e-15);
}

TEST_CASE("a cubic semispray is not a spray and the Berwald curvature statement is inconclusive") {
  auto alg = gla::testing::standard_algebroid(2, 2);
  MechSystem sys = make_system(alg, GhMorphism::identity(2), {parse("y1^3", kA), parse("x1*y2^2", kA)},
                               {Expr(0.0), Expr(0.0)});
  SampleSet s = samples(kA, 60);
  CHECK_FALSE(is_spray(sys, s, 1e-9));
  CHECK(spray_condition(sys, s, 1e-9).any_failed());
  Report p = spray_mixed_curvature_check(sys, s, 1e-9);
  REQUIRE(p.checks.size() == 1);
  CHECK(p.checks[0].status == Status::Inconclusive);
  // the semispray part of the condition still holds
  CHECK(spray_condition(sys, s, 1e-9).find("semispray J(S) = C")->status == Status::Pass);
}

TEST_CASE("non-polynomial spray on a nontrivial morphism passes every spray check") {
  MechSystem sys = gla::testing::nonpolynomial_spray();
  SampleSet s = samples(kA, 80, 5, 0.1);
  CHECK(is_spray(sys, s, 1e-9));
  for (auto* check : {&spray_condition, &closure_check, &homogeneity_check, &liouville_transport_check, &spray_mixed_curvature_check,
                      &projector_oracle_check}) {
    Report rep = (*check)(sys, s, 1e-8);
    for (const auto& c : rep.checks) {
      INFO(c.check);
      CHECK(c.status == Status::Pass);
    }
  }
}

TEST_CASE("bundled configs satisfy the spray checks") {
  for (const char* name : {"flat", "quadratic_spray", "nontrivial"}) {
    auto cfg = gla::testing::bundled(name);
    MechSystem sys = cfg.system();
    SampleSet s = samples(cfg.arity(), 60, 9, 0.1);
    INFO(std::string(name));
    CHECK(is_spray(sys, s, 1e-9));
    CHECK_FALSE(closure_check(sys, s, 1e-9).any_failed());
    CHECK_FALSE(spray_mixed_curvature_check(sys, s, 1e-8).any_failed());
  }
}

TEST_CASE("induced connection is minus the horizontal projector") {
  auto cfg = gla::testing::bundled("nontrivial");
  MechSystem sys = cfg.system();
  HorizontalProjector hp = horizontal_projector(sys);
  NlConnection conn = induced_connection(sys, hp);
  SampleSet s = samples(cfg.arity(), 30);
  std::vector<Expr> res;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) res.push_back(conn.gamma(a, b) + hp(a, b));
  CHECK(max_residual(res, s).max_abs == 0.0);
}

TEST_CASE("homogeneity and the Hessian lemma") {
  SampleSet s = samples(kA, 60, 3, 0.1);
  for (const char* f : {"y1", "2*y1 - 3*y2", "sqrt(y1^2 + y2^2)", "x1*sqrt(y1^2 + 4*y2^2) + x2*y1"}) {
    INFO(std::string(f));
    Expr e = parse(f, kA);
    CHECK_FALSE(homog1_check(e, s, 1e-10).any_failed());
    CHECK_FALSE(hessian_lemma_check(e, 2, s, 1e-10).any_failed());
  }
  for (const char* f : {"y1^2", "y1*y2 + y2"}) {
    INFO(std::string(f));
    Expr e = parse(f, kA);
    CHECK(homog1_check(e, s, 1e-10).any_failed());
    CHECK(hessian_lemma_check(e, 2, s, 1e-10).any_failed());
  }
  // affine in the fiber: not homogeneous, yet the Hessian vanishes
  CHECK(homog1_check(parse("1 + y1", kA), s, 1e-10).any_failed());
  CHECK_FALSE(hessian_lemma_check(parse("1 + y1", kA), 2, s, 1e-10).any_failed());
}

TEST_CASE("vertical derivative and Hessian") {
  Expr f = parse("y1^2*y2 + x1*y2", kA);
  TangentSection X{{Expr(0.0), Expr(0.0)}, {Expr(1.0), Expr(2.0)}};
  SampleSet s = samples(kA, 20);
  std::vector<Expr> res{v_derivative(X, f) - parse("2*y1*y2 + 2*(y1^2 + x1)", kA)};
  CHECK(max_residual(res, s).max_abs < 1e-14);
  TensorField H = hessian(f, 2);
  CHECK(H.sig() == TensorSig{0, 0, 0, 2});
  std::vector<Expr> hres{H[{0, 0}] - parse("2*y2", kA), H[{0, 1}] - parse("2*y1", kA), H[{1, 1}]};
  CHECK(max_residual(hres, s).max_abs < 1e-14);
}
