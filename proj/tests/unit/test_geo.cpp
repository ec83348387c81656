#include <doctest.h>

#include <cmath>
#include <sstream>

#include "algebroid/geo.hpp"
#include "fixtures.hpp"

using namespace gla;

namespace {

MechSystem line_system(const char* G) {
  const Arity a{1, 1};
  auto alg = gla::testing::standard_algebroid(1, 1);
  return make_system(alg, GhMorphism::identity(1), {parse(G, a)}, {Expr(0.0)});
}

}  // namespace

TEST_CASE("flat geodesics are straight lines") {
  auto cfg = gla::testing::bundled("flat");
  MechSystem sys = cfg.system();
  OdeState s0{0.0, {0.0, 0.0}, {1.0, 2.0}};
  Trajectory tr = integrate(sys, s0, 1.0, 1e-3);
  REQUIRE(tr.ok());
  REQUIRE(tr.states.size() == 1001);
  for (const auto& st : tr.states) {
    CHECK(std::abs(st.x[0] - st.t) < 1e-12);
    CHECK(std::abs(st.x[1] - 2.0 * st.t) < 1e-12);
    CHECK(st.y[0] == 1.0);
    CHECK(st.y[1] == 2.0);
  }
}

TEST_CASE("one-dimensional quadratic force matches the closed form") {
  MechSystem sys = line_system("0.5*y1^2");
  const double y0 = 0.8;
  Trajectory tr = integrate(sys, OdeState{0.0, {0.0}, {y0}}, 2.0, 1e-3);
  REQUIRE(tr.ok());
  double worst = 0.0;
  for (const auto& st : tr.states) {
    worst = std::max(worst, std::abs(st.y[0] - y0 / (1.0 + y0 * st.t)));
    worst = std::max(worst, std::abs(st.x[0] - std::log(1.0 + y0 * st.t)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("RK4 converges at fourth order") {
  const double ratio = rk4_order_ratio();
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
  CHECK_FALSE(rk4_order_check().any_failed());
}

TEST_CASE("generic RK4 on exponential growth") {
  OdeSolution sol = rk4([](double, std::span<const double> s, std::span<double> d) { d[0] = s[0]; }, {1.0}, 0.0, 1.0,
                        0.01);
  REQUIRE(sol.error.empty());
  CHECK(sol.t.size() == 101);
  CHECK(sol.s.back()[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
}

TEST_CASE("integration stops cleanly on a domain error") {
  MechSystem sys = line_system("sqrt(x1)*y1^2");
  Trajectory tr = integrate(sys, OdeState{0.0, {0.05}, {-1.0}}, 1.0, 1e-3);
  CHECK_FALSE(tr.ok());
  CHECK(tr.states.size() > 1);
  CHECK(tr.states.size() < 1001);
}

TEST_CASE("zero connection leaves the lifted vector constant") {
  auto alg = gla::testing::standard_algebroid(2, 2);
  NlConnection conn(alg, std::vector<Expr>(4));
  auto cfg = gla::testing::bundled("quadratic_spray");
  Trajectory curve = integrate(cfg.system(), OdeState{0.0, {0.1, -0.2}, {0.5, 0.3}}, 1.0, 1e-3);
  REQUIRE(curve.ok());
  ParallelLift lift = parallel_lift(conn, GhMorphism::identity(2), curve, {0.7, -1.1});
  REQUIRE(lift.error.empty());
  for (const auto& u : lift.u) {
    CHECK(u[0] == 0.7);
    CHECK(u[1] == -1.1);
  }
  CHECK(lift.max_residual < 1e-12);  // stencil rounding only
}

TEST_CASE("parallel lift along a nontrivial connection satisfies its equation") {
  auto cfg = gla::testing::bundled("nontrivial");
  NlConnection conn(cfg.alg, cfg.gamma);
  Trajectory curve = integrate(cfg.system(), OdeState{0.0, {0.1, 0.2}, {0.4, -0.3}}, 0.5, 1e-3);
  REQUIRE(curve.ok());
  CHECK_FALSE(parallel_lift_check(conn, cfg.gh, curve, {1.0, 0.5}, 1e-7).any_failed());
}

TEST_CASE("geodesic image is invariant under fiber rescaling") {
  for (const char* name : {"quadratic_spray", "nontrivial"}) {
    auto cfg = gla::testing::bundled(name);
    INFO(std::string(name));
    Report rep = rescaling_check(cfg.system(), OdeState{0.0, cfg.x0, cfg.y0}, cfg.t1, 1e-3, 2.0, 1e-6);
    CHECK_FALSE(rep.any_failed());
  }
}

TEST_CASE("path deviation ignores parametrization") {
  auto cfg = gla::testing::bundled("flat");
  Trajectory a = integrate(cfg.system(), OdeState{0.0, {0.0, 0.0}, {1.0, 2.0}}, 1.0, 1e-3);
  Trajectory b = integrate(cfg.system(), OdeState{0.0, {0.0, 0.0}, {0.5, 1.0}}, 2.0, 1e-3);
  CHECK(path_deviation(a, b) < 1e-12);
  Trajectory c = integrate(cfg.system(), OdeState{0.0, {0.0, 0.0}, {1.0, 1.0}}, 1.0, 1e-3);
  CHECK(path_deviation(a, c) > 0.1);
}

TEST_CASE("trajectory CSV layout") {
  auto cfg = gla::testing::bundled("flat");
  Trajectory tr = integrate(cfg.system(), OdeState{0.0, {0.0, 0.0}, {1.0, 2.0}}, 0.01, 1e-3);
  std::string csv = trajectory_csv(tr);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x1,x2,y1,y2");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 11);
  double vals[5];
  std::istringstream row(last);
  for (double& v : vals) {
    std::string cell;
    std::getline(row, cell, ',');
    v = std::stod(cell);
  }
  CHECK(vals[0] == tr.states.back().t);
  CHECK(vals[1] == tr.states.back().x[0]);
  CHECK(vals[4] == 2.0);
}
