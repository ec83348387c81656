#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "algebroid/mech.hpp"
#include "algebroid/tape.hpp"

namespace gla {

struct OdeState {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> y;
};

struct Trajectory {
  std::vector<OdeState> states;
  double dt = 0.0;
  double t0 = 0.0, t1 = 0.0;
  std::string system;
  std::string error;  // set when integration stopped early
  bool ok() const { return error.empty(); }
};

// Generic first-order system d/dt s = rhs(t, s).
using OdeRhs = std::function<void(double, std::span<const double>, std::span<double>)>;

// Classical RK4 on a uniform grid of round((t1-t0)/dt) steps; rows hold the full state.
struct OdeSolution {
  std::vector<double> t;
  std::vector<std::vector<double>> s;
  double dt = 0.0;
  std::string error;
};
OdeSolution rk4(const OdeRhs& rhs, std::vector<double> s0, double t0, double t1, double dt);

// dx^i/dt = rho^i_b(eta(h(x))) g^b_a(h(x)) y^a,  dy^a/dt = -2(G^a - F^a/4)(x, y)
class GeodesicRhs {
 public:
  explicit GeodesicRhs(const MechSystem& sys);
  void operator()(std::span<const double> x, std::span<const double> y, std::span<double> dx,
                  std::span<double> dy) const;
  const std::vector<Expr>& velocity() const { return velocity_; }
  const std::vector<Expr>& acceleration() const { return accel_; }

 private:
  Arity arity_;
  std::vector<Expr> velocity_, accel_;
  Tape tape_;
};

void geodesic_rhs(const MechSystem& sys, const OdeState& state, std::vector<double>& dx, std::vector<double>& dy);

Trajectory integrate(const MechSystem& sys, const OdeState& state0, double t1, double dt);

// Lift of u0 along a sampled base curve: du^a/dt = -Gamma^a_d(eta(h(c)), u) g^d_b(h(c)) u^b.
// Uses every other base sample as an RK4 midpoint, so the lift step is twice the curve step.
struct ParallelLift {
  std::vector<double> t;
  std::vector<std::vector<double>> u;
  double max_residual = 0.0;
  std::string error;
};
ParallelLift parallel_lift(const NlConnection& conn, const GhMorphism& gh, const Trajectory& base_curve,
                           std::vector<double> u0);
Report parallel_lift_check(const NlConnection& conn, const GhMorphism& gh, const Trajectory& base_curve,
                           std::vector<double> u0, double tol);

// Max distance between the two x-paths after resampling each by normalized arc length.
double path_deviation(const Trajectory& a, const Trajectory& b, int nodes = 256);

std::string trajectory_csv(const Trajectory& traj);
void write_csv(const Trajectory& traj, const std::string& path);

// Error ratio of RK4 on dy/dt = -y^2, y(0) = 1 over [0, 1] at steps 0.1 and 0.05.
double rk4_order_ratio();
Report rk4_order_check();
// Positive rescaling of the initial fiber keeps the geodesic image.
Report rescaling_check(const MechSystem& sys, const OdeState& state0, double t1, double dt, double lambda,
                       double tol);

}  // namespace gla
