#include <doctest.h>

#include <cmath>

#include "algebroid/weyl.hpp"
#include "fixtures.hpp"

using namespace gla;
using gla::testing::samples;

namespace {

const Arity kA{2, 2};

void expect_all_pass(const Report& rep, bool allow_flags) {
  for (const auto& c : rep.checks) {
    INFO(c.check);
    if (allow_flags && c.check.find("printed") != std::string::npos)
      CHECK(c.status != Status::Fail);
    else
      CHECK(c.status == Status::Pass);
  }
}

}  // namespace

TEST_CASE("zero factor changes nothing") {
  auto cfg = gla::testing::bundled("nontrivial");
  SampleSet s = samples(kA, 40, 1, 0.1);
  ProjChange pc = make_projective_change(cfg.system(), Expr(0.0), s, 1e-9);
  for (const Expr& e : pc.A) CHECK(e.is_zero());
  std::vector<Expr> res;
  for (int a = 0; a < 2; ++a) res.push_back(pc.changed.reduced(a) - pc.base.reduced(a));
  CHECK(max_residual(res, s).max_abs == 0.0);
  Report rep = projector_change_check(pc, s, 1e-12);
  for (const auto& c : rep.checks) CHECK(c.max_residual == 0.0);
  GeodesicComparison cmp = compare_geodesics(pc, OdeState{0.0, cfg.x0, cfg.y0}, cfg.t1, 1e-3);
  CHECK(cmp.deviation < 1e-12);
  CHECK(cmp.s.back() == doctest::Approx(cfg.t1).epsilon(1e-12));
}

TEST_CASE("a factor that is not 1-homogeneous is rejected") {
  auto cfg = gla::testing::bundled("quadratic_spray");
  SampleSet s = samples(kA, 40, 1, 0.1);
  CHECK_THROWS_AS(make_projective_change(cfg.system(), parse("y1^2", kA), s, 1e-9), ProjectiveChangeError);
  try {
    make_projective_change(cfg.system(), parse("y1^2", kA), s, 1e-9);
  } catch (const ProjectiveChangeError& e) {
    CHECK(e.report.any_failed());
  }
}

TEST_CASE("line case: parameter follows the closed form") {
  const Arity a1{1, 1};
  auto alg = gla::testing::standard_algebroid(1, 1);
  MechSystem sys = make_system(alg, GhMorphism::identity(1), {Expr(0.0)}, {Expr(0.0)});
  SampleSet s = samples(a1, 20, 1, 0.1);
  ProjChange pc = make_projective_change(sys, Expr::y(0), s, 1e-9);
  std::vector<Expr> res{pc.changed.reduced(0) + parse("0.5*y1^2", a1)};
  CHECK(max_residual(res, s).max_abs < 1e-15);
  const double y0 = 0.6, T = 1.5;
  GeodesicComparison cmp = compare_geodesics(pc, OdeState{0.0, {0.2}, {y0}}, T, 1e-3);
  REQUIRE(cmp.original.ok());
  REQUIRE(cmp.changed.ok());
  // f is constant y0 along the straight line, so s = (1 - exp(-y0 t)) / y0
  double worst = 0.0;
  for (std::size_t k = 0; k < cmp.s.size(); ++k) {
    const double t = cmp.original.states[k].t;
    worst = std::max(worst, std::abs(cmp.s[k] - (1.0 - std::exp(-y0 * t)) / y0));
  }
  CHECK(worst < 1e-10);
  CHECK(cmp.s_increasing);
  CHECK(cmp.changed.states.back().x[0] == doctest::Approx(cmp.original.states.back().x[0]).epsilon(1e-8));
}

TEST_CASE("projective factor recovery") {
  MechSystem sys = gla::testing::nonpolynomial_spray();
  SampleSet s = samples(kA, 60, 2, 0.1);
  Expr f = parse("sqrt(y1^2 + y2^2) + x1*y2", kA);
  ProjChange pc = make_projective_change(sys, f, s, 1e-9);
  FactorRecovery rec = projective_factor(pc.base, pc.changed, s);
  CHECK_FALSE(rec.report.any_failed());
  CHECK(rec.spread < 1e-12);
  for (std::size_t p = 0; p < s.size(); ++p) {
    if (std::isnan(rec.f[p])) continue;
    CHECK(rec.f[p] == doctest::Approx(eval(f, s.point(p))).epsilon(1e-10));
  }

  SUBCASE("perturbing one coefficient breaks the relation") {
    std::vector<Expr> G = pc.changed.G;
    G[1] = G[1] + parse("0.01*y1^2", kA);
    MechSystem bad = make_system(pc.changed.alg, pc.changed.gh, G, pc.changed.F);
    FactorRecovery r2 = projective_factor(pc.base, bad, s);
    CHECK(r2.report.any_failed());
    CHECK(r2.spread > 1e-4);
  }
}

TEST_CASE("non-polynomial spray with the Euclidean norm as factor") {
  MechSystem sys = gla::testing::nonpolynomial_spray();
  SampleSet s = samples(kA, 60, 4, 0.1);
  ProjChange pc = make_projective_change(sys, parse("sqrt(y1^2 + y2^2)", kA), s, 1e-9);
  CHECK(is_spray(pc.changed, s, 1e-9));
  expect_all_pass(projector_change_check(pc, s, 1e-9), false);
  auto probes = probe_sections(kA, 3);
  expect_all_pass(berwald_relation_check(pc, probes[0], probes[1], s, 1e-8), true);
  expect_all_pass(mixed_curvature_change_check(pc, probes[0], probes[1], probes[2], s, 1e-8), true);
  expect_all_pass(geodesic_equivalence_check(pc, OdeState{0.0, {0.1, -0.1}, {0.4, 0.3}}, 1.0, 1e-3, 1e-4), false);
}

TEST_CASE("bundled configs under their configured factor") {
  for (const char* name : {"flat", "quadratic_spray", "nontrivial"}) {
    auto cfg = gla::testing::bundled(name);
    INFO(std::string(name));
    REQUIRE(cfg.f.has_value());
    SampleSet s = samples(cfg.arity(), 60, 8, 0.1);
    ProjChange pc = make_projective_change(cfg.system(), *cfg.f, s, 1e-9);
    expect_all_pass(projector_change_check(pc, s, 1e-9), false);
    expect_all_pass(geodesic_equivalence_check(pc, OdeState{0.0, cfg.x0, cfg.y0}, cfg.t1, 1e-3, 1e-4), false);
  }
}
