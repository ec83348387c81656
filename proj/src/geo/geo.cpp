#include "algebroid/geo.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gla {

namespace {
inline std::size_t at(int k) { return static_cast<std::size_t>(k); }

void axpy(std::vector<double>& out, const std::vector<double>& s, double h, const std::vector<double>& k) {
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] + h * k[i];
}

}  // namespace

OdeSolution rk4(const OdeRhs& rhs, std::vector<double> s0, double t0, double t1, double dt) {
  if (!(dt > 0.0) || !(t1 > t0)) throw std::invalid_argument("rk4 needs dt > 0 and t1 > t0");
  const long steps = std::max(1L, std::lround((t1 - t0) / dt));
  const double h = (t1 - t0) / static_cast<double>(steps);
  OdeSolution sol;
  sol.dt = h;
  sol.t.push_back(t0);
  sol.s.push_back(s0);
  const std::size_t n = s0.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), s = std::move(s0);
  try {
    for (long i = 0; i < steps; ++i) {
      const double t = t0 + h * static_cast<double>(i);
      rhs(t, s, k1);
      axpy(tmp, s, 0.5 * h, k1);
      rhs(t + 0.5 * h, tmp, k2);
      axpy(tmp, s, 0.5 * h, k2);
      rhs(t + 0.5 * h, tmp, k3);
      axpy(tmp, s, h, k3);
      rhs(t + h, tmp, k4);
      for (std::size_t j = 0; j < n; ++j) s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      for (double v : s)
        if (!std::isfinite(v)) throw DomainError("non-finite state");
      sol.t.push_back(t0 + h * static_cast<double>(i + 1));
      sol.s.push_back(s);
    }
  } catch (const DomainError& e) {
    sol.error = std::string(e.what()) + " at t = " + std::to_string(sol.t.back());
  }
  return sol;
}

GeodesicRhs::GeodesicRhs(const MechSystem& sys) : arity_(sys.arity()) {
  const GenAlgebroid& alg = *sys.alg;
  const int m = alg.m(), r = alg.r();
  // eta o h as a base map
  std::vector<Expr> eta_h;
  for (const Expr& e : alg.eta().fwd) eta_h.push_back(substitute_base(e, alg.h().fwd));
  for (int i = 0; i < m; ++i) {
    Expr s(0.0);
    for (int b = 0; b < r; ++b) {
      Expr rho = substitute_base(alg.rho(i, b), eta_h);
      if (rho.is_zero()) continue;
      for (int a = 0; a < r; ++a) s += rho * sys.g_h(b, a) * Expr::y(a);
    }
    velocity_.push_back(s);
  }
  for (int a = 0; a < r; ++a) accel_.push_back(-2.0 * sys.reduced(a));
  std::vector<Expr> all(velocity_);
  all.insert(all.end(), accel_.begin(), accel_.end());
  tape_ = Tape::compile(all, arity_);
}

void GeodesicRhs::operator()(std::span<const double> x, std::span<const double> y, std::span<double> dx,
                             std::span<double> dy) const {
  std::vector<double> vars(x.begin(), x.end());
  vars.insert(vars.end(), y.begin(), y.end());
  std::vector<double> out(tape_.num_outputs());
  tape_.eval(vars, out);
  std::copy(out.begin(), out.begin() + arity_.m, dx.begin());
  std::copy(out.begin() + arity_.m, out.end(), dy.begin());
}

void geodesic_rhs(const MechSystem& sys, const OdeState& state, std::vector<double>& dx, std::vector<double>& dy) {
  GeodesicRhs rhs(sys);
  dx.assign(state.x.size(), 0.0);
  dy.assign(state.y.size(), 0.0);
  rhs(state.x, state.y, dx, dy);
}

Trajectory integrate(const MechSystem& sys, const OdeState& state0, double t1, double dt) {
  const int m = sys.alg->m(), r = sys.r();
  if (state0.x.size() != at(m) || state0.y.size() != at(r)) throw ArityError("initial state has wrong dimensions");
  GeodesicRhs field(sys);
  OdeRhs rhs = [&](double, std::span<const double> s, std::span<double> d) {
    field(s.subspan(0, at(m)), s.subspan(at(m)), d.subspan(0, at(m)), d.subspan(at(m)));
  };
  std::vector<double> s0(state0.x);
  s0.insert(s0.end(), state0.y.begin(), state0.y.end());
  OdeSolution sol = rk4(rhs, s0, state0.t, t1, dt);
  Trajectory traj;
  traj.dt = sol.dt;
  traj.t0 = state0.t;
  traj.t1 = t1;
  traj.error = sol.error;
  for (std::size_t k = 0; k < sol.t.size(); ++k) {
    OdeState st;
    st.t = sol.t[k];
    st.x.assign(sol.s[k].begin(), sol.s[k].begin() + m);
    st.y.assign(sol.s[k].begin() + m, sol.s[k].end());
    traj.states.push_back(std::move(st));
  }
  return traj;
}

ParallelLift parallel_lift(const NlConnection& conn, const GhMorphism& gh, const Trajectory& base_curve,
                           std::vector<double> u0) {
  const GenAlgebroid& alg = conn.alg();
  const int m = alg.m(), r = alg.r();
  // du^a/dt = -sum Gamma^a_d(eta(h(x)), y) g^d_b(h(x)) y^b, evaluated with x = c(t), y = u
  std::vector<Expr> eta_h;
  for (const Expr& e : alg.eta().fwd) eta_h.push_back(substitute_base(e, alg.h().fwd));
  std::vector<Expr> rate;
  for (int a = 0; a < r; ++a) {
    Expr s(0.0);
    for (int d = 0; d < r; ++d) {
      Expr gam = substitute_base(conn.gamma(a, d), eta_h);
      if (gam.is_zero()) continue;
      for (int b = 0; b < r; ++b) s -= gam * alg.compose_h(gh.G(d, b)) * Expr::y(b);
    }
    rate.push_back(s);
  }
  const Tape tape = Tape::compile(rate, alg.arity());
  auto eval = [&](const std::vector<double>& x, const std::vector<double>& u, std::vector<double>& out) {
    std::vector<double> vars(x);
    vars.insert(vars.end(), u.begin(), u.end());
    tape.eval(vars, out);
  };

  ParallelLift lift;
  const std::size_t n = base_curve.states.size();
  const double H = 2.0 * base_curve.dt;
  std::vector<double> u = std::move(u0), k1(at(r)), k2(at(r)), k3(at(r)), k4(at(r)), tmp(at(r));
  lift.t.push_back(base_curve.states.front().t);
  lift.u.push_back(u);
  try {
    for (std::size_t k = 0; k + 2 < n; k += 2) {
      const auto& c0 = base_curve.states[k].x;
      const auto& c1 = base_curve.states[k + 1].x;
      const auto& c2 = base_curve.states[k + 2].x;
      eval(c0, u, k1);
      axpy(tmp, u, 0.5 * H, k1);
      eval(c1, tmp, k2);
      axpy(tmp, u, 0.5 * H, k2);
      eval(c1, tmp, k3);
      axpy(tmp, u, H, k3);
      eval(c2, tmp, k4);
      for (int j = 0; j < r; ++j)
        u[at(j)] += H / 6.0 * (k1[at(j)] + 2.0 * k2[at(j)] + 2.0 * k3[at(j)] + k4[at(j)]);
      lift.t.push_back(base_curve.states[k + 2].t);
      lift.u.push_back(u);
    }
    // five-point derivative stencil against the defining equation
    std::vector<double> rhs(at(r));
    for (std::size_t k = 2; k + 2 < lift.u.size(); ++k) {
      eval(base_curve.states[2 * k].x, lift.u[k], rhs);
      for (int a = 0; a < r; ++a) {
        const std::size_t j = at(a);
        double d = (-lift.u[k + 2][j] + 8.0 * lift.u[k + 1][j] - 8.0 * lift.u[k - 1][j] + lift.u[k - 2][j]) / (12.0 * H);
        lift.max_residual = std::max(lift.max_residual, std::abs(d - rhs[j]));
      }
    }
  } catch (const DomainError& e) {
    lift.error = e.what();
  }
  (void)m;
  return lift;
}

Report parallel_lift_check(const NlConnection& conn, const GhMorphism& gh, const Trajectory& base_curve,
                           std::vector<double> u0, double tol) {
  ParallelLift lift = parallel_lift(conn, gh, base_curve, std::move(u0));
  CheckResult c;
  c.check = "parallel lift equation along the curve";
  c.anchor = "parallel lift of a curve";
  c.max_residual = lift.max_residual;
  if (!base_curve.states.empty()) c.worst_point = FiberPoint{base_curve.states.front().x, lift.u.front()};
  c.status = lift.error.empty() && lift.max_residual <= tol ? Status::Pass : Status::Fail;
  c.note = lift.error;
  Report rep;
  rep.add(c);
  return rep;
}

namespace {

std::vector<std::vector<double>> resample(const Trajectory& tr, int nodes) {
  const auto& st = tr.states;
  std::vector<double> s(st.size(), 0.0);
  for (std::size_t k = 1; k < st.size(); ++k) {
    double d = 0.0;
    for (std::size_t i = 0; i < st[k].x.size(); ++i) d += std::pow(st[k].x[i] - st[k - 1].x[i], 2);
    s[k] = s[k - 1] + std::sqrt(d);
  }
  const double total = s.back();
  std::vector<std::vector<double>> out;
  std::size_t seg = 0;
  for (int j = 0; j < nodes; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(nodes - 1);
    while (seg + 2 < st.size() && s[seg + 1] < target) ++seg;
    if (st.size() == 1 || total == 0.0) {
      out.push_back(st[seg].x);
      continue;
    }
    const double len = s[seg + 1] - s[seg];
    const double w = len > 0.0 ? std::clamp((target - s[seg]) / len, 0.0, 1.0) : 0.0;
    std::vector<double> p(st[seg].x.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0 - w) * st[seg].x[i] + w * st[seg + 1].x[i];
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

double path_deviation(const Trajectory& a, const Trajectory& b, int nodes) {
  if (a.states.empty() || b.states.empty()) return INFINITY;
  auto pa = resample(a, nodes), pb = resample(b, nodes);
  double worst = 0.0;
  for (int j = 0; j < nodes; ++j) {
    double d = 0.0;
    for (std::size_t i = 0; i < pa[at(j)].size(); ++i) d += std::pow(pa[at(j)][i] - pb[at(j)][i], 2);
    worst = std::max(worst, std::sqrt(d));
  }
  return worst;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  if (!traj.states.empty()) {
    for (std::size_t i = 0; i < traj.states.front().x.size(); ++i) out += ",x" + std::to_string(i + 1);
    for (std::size_t a = 0; a < traj.states.front().y.size(); ++a) out += ",y" + std::to_string(a + 1);
  }
  out += '\n';
  char buf[64];
  for (const auto& st : traj.states) {
    std::snprintf(buf, sizeof buf, "%.17g", st.t);
    out += buf;
    for (double v : st.x) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    for (double v : st.y) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << trajectory_csv(traj);
}

double rk4_order_ratio() {
  OdeRhs rhs = [](double, std::span<const double> s, std::span<double> d) { d[0] = -s[0] * s[0]; };
  auto err = [&](double dt) {
    OdeSolution sol = rk4(rhs, {1.0}, 0.0, 1.0, dt);
    double e = 0.0;
    for (std::size_t k = 0; k < sol.t.size(); ++k) e = std::max(e, std::abs(sol.s[k][0] - 1.0 / (1.0 + sol.t[k])));
    return e;
  };
  return err(0.1) / err(0.05);
}

Report rk4_order_check() {
  const double ratio = rk4_order_ratio();
  CheckResult c;
  c.check = "RK4 convergence order";
  c.anchor = "integral curves of the spray (numerics)";
  c.max_residual = ratio;
  c.status = ratio >= 12.0 && ratio <= 20.0 ? Status::Pass : Status::Fail;
  c.note = "error ratio for a halved step on dy/dt = -y^2";
  Report rep;
  rep.add(c);
  return rep;
}

Report rescaling_check(const MechSystem& sys, const OdeState& state0, double t1, double dt, double lambda,
                       double tol) {
  Trajectory a = integrate(sys, state0, t1, dt);
  OdeState s1 = state0;
  for (double& v : s1.y) v *= lambda;
  Trajectory b = integrate(sys, s1, state0.t + (t1 - state0.t) / lambda, dt / lambda);
  CheckResult c;
  c.check = "geodesic image invariant under fiber rescaling";
  c.anchor = "geodesics of a spray";
  c.max_residual = path_deviation(a, b);
  c.worst_point = FiberPoint{state0.x, state0.y};
  c.status = a.ok() && b.ok() && c.max_residual <= tol ? Status::Pass : Status::Fail;
  if (!a.ok()) c.note = a.error;
  if (!b.ok()) c.note = b.error;
  Report rep;
  rep.add(c);
  return rep;
}

}  // namespace gla
