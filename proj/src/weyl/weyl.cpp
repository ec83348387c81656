#include "algebroid/weyl.hpp"

#include <cmath>
#include <limits>

namespace gla {

namespace {

inline std::size_t at(int k) { return static_cast<std::size_t>(k); }

std::vector<Expr> sub(const TangentSection& a, const TangentSection& b, const TangentSection& c) {
  return flatten(a - b - c);
}

}  // namespace

ProjChange make_projective_change(const MechSystem& sys, const Expr& f, const SampleSet& samples, double tol) {
  check_arity(f, sys.arity());
  Report hom = homog1_check(f, samples, tol);
  if (hom.any_failed()) throw ProjectiveChangeError("projective factor is not 1-homogeneous", hom);
  const int r = sys.r();
  ProjChange pc;
  pc.base = sys;
  pc.f = f;
  std::vector<Expr> G;
  for (int a = 0; a < r; ++a) G.push_back(sys.G[at(a)] - 0.5 * f * Expr::y(a));
  pc.changed = make_system(sys.alg, sys.gh, std::move(G), sys.F);
  for (int b = 0; b < r; ++b)
    for (int a = 0; a < r; ++a) {
      Expr s(0.0);
      for (int c = 0; c < r; ++c) s += sys.gtil_h(c, a) * dy(f, c);
      pc.A.push_back(0.5 * s * Expr::y(b) + 0.5 * f * sys.gtil_h(b, a));
    }
  return pc;
}

Report projector_change_check(const ProjChange& pc, const SampleSet& samples, double tol) {
  const int r = pc.r();
  const HorizontalProjector H = horizontal_projector(pc.base);
  const HorizontalProjector Hb = horizontal_projector(pc.changed);
  std::vector<Expr> comp, action;
  for (int b = 0; b < r; ++b)
    for (int a = 0; a < r; ++a) comp.push_back(Hb(b, a) - H(b, a) - pc.coeff(b, a));
  for (int a = 0; a < r; ++a) {
    NaturalSection X{std::vector<Expr>(at(r)), std::vector<Expr>(at(r))};
    X.h[at(a)] = Expr(1.0);
    const NaturalSection d1 = Hb.apply(X), d0 = H.apply(X);
    // J X = gtil^b_a ddot_b, and its v-derivative of f
    Expr jf(0.0);
    for (int c = 0; c < r; ++c) jf += pc.base.gtil_h(c, a) * dy(pc.f, c);
    for (int b = 0; b < r; ++b) {
      action.push_back(d1.h[at(b)] - d0.h[at(b)]);
      action.push_back(d1.v[at(b)] - d0.v[at(b)] - 0.5 * (pc.f * pc.base.gtil_h(b, a) + jf * Expr::y(b)));
    }
  }
  Report rep;
  const std::string anchor = "horizontal projectors of projectively related sprays";
  rep.add(judge("projective change: projector coefficients Hbar - H - A", anchor, max_residual(comp, samples),
                samples, tol));
  rep.add(judge("projective change: projector action", anchor, max_residual(action, samples), samples, tol));
  return rep;
}

Report berwald_relation_check(const ProjChange& pc, const TangentSection& X, const TangentSection& Y,
                              const SampleSet& samples, double tol) {
  const int r = pc.r();
  const HorizontalProjector hp = horizontal_projector(pc.base);
  const NlConnection conn = induced_connection(pc.base, hp);
  const NlConnection connb = induced_connection(pc.changed, horizontal_projector(pc.changed));
  const DConnection dc = berwald_nabla(conn), dcb = berwald_nabla(connb);
  const GenAlgebroid& alg = *pc.base.alg;
  auto A = [&](int b, int a) -> const Expr& { return pc.coeff(b, a); };

  // both sides independently, expressed in the adapted frame of the original spray
  const TangentSection direct = reframe(connb, conn, cov_deriv(dcb, X, Y));
  const TangentSection plain = cov_deriv(dc, reframe(connb, conn, X), reframe(connb, conn, Y));
  const TangentSection diff = direct - plain;

  TangentSection derived = zero_section(r), printed = zero_section(r);
  auto delta_bar = [&](int c, const Expr& f) {
    Expr s = conn.delta(c, f);
    for (int d = 0; d < r; ++d) s += A(d, c) * dy(f, d);
    return s;
  };
  std::vector<Expr> hbar;
  for (int b = 0; b < r; ++b) {
    Expr s(0.0);
    for (int c = 0; c < r; ++c) {
      Expr t = delta_bar(c, Y.h[at(b)]);
      for (int e = 0; e < r; ++e) t += dy(connb.gamma(b, c), e) * Y.h[at(e)];
      s += X.h[at(c)] * t + X.v[at(c)] * dy(Y.h[at(b)], c);
    }
    hbar.push_back(s);
  }
  for (int a = 0; a < r; ++a) {
    Expr h(0.0), v(0.0);
    for (int c = 0; c < r; ++c)
      for (int e = 0; e < r; ++e) h -= X.h[at(c)] * Y.h[at(e)] * dy(A(a, c), e);
    Expr ay(0.0);
    for (int b = 0; b < r; ++b) ay += A(a, b) * Y.h[at(b)];
    for (int b = 0; b < r; ++b) v += A(a, b) * hbar[at(b)];
    for (int c = 0; c < r; ++c) {
      for (int e = 0; e < r; ++e) {
        v -= X.h[at(c)] * dy(A(a, c), e) * Y.v[at(e)];
        Expr ae(0.0);
        for (int b = 0; b < r; ++b) ae += A(e, b) * Y.h[at(b)];
        v -= X.h[at(c)] * dy(conn.gamma(a, c), e) * ae;
      }
      v -= X.h[at(c)] * conn.delta(c, ay);
      v -= X.v[at(c)] * dy(ay, c);
      Expr ax(0.0);
      for (int b = 0; b < r; ++b) ax += A(c, b) * X.h[at(b)];
      v -= ax * dy(ay, c);
    }
    derived.h[at(a)] = h;
    derived.v[at(a)] = v;
    printed.h[at(a)] = h;
  }
  // printed vertical correction, free index c
  for (int c = 0; c < r; ++c) {
    Expr v(0.0);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        const Expr xy = X.h[at(a)] * Y.h[at(b)];
        for (int m = 0; m < r; ++m) {
          v -= xy * A(c, m) * dy(hp(m, a), b);
          v -= xy * A(c, m) * dy(A(m, a), b);
          v -= X.h[at(a)] * A(m, a) * Y.h[at(b)] * dy(A(c, b), m);
          v -= xy * hp(m, a) * dy(A(c, b), m);
          v += xy * A(m, b) * dy(hp(c, a), m);
        }
        v -= X.h[at(a)] * Y.v[at(b)] * dy(A(c, a), b);
        v -= xy * alg.anchor_derivative(a, A(c, b));
        v -= X.v[at(a)] * Y.h[at(b)] * dy(A(c, b), a);
      }
    printed.v[at(c)] = v;
  }

  std::vector<Expr> dh, dv;
  for (int a = 0; a < r; ++a) {
    dh.push_back(diff.h[at(a)] - printed.h[at(a)]);
    dv.push_back(diff.v[at(a)] - printed.v[at(a)]);
  }
  Report rep;
  const std::string anchor = "Berwald derivatives of projectively related sprays";
  rep.add(judge("berwald relation: dual evaluation vs component form", anchor,
                max_residual(flatten(diff - derived), samples), samples, tol));
  rep.add(judge_flag("berwald relation: printed correction, horizontal", anchor + " (printed reading)",
                     max_residual(dh, samples), samples, tol));
  rep.add(judge_flag("berwald relation: printed correction, vertical", anchor + " (printed reading)",
                     max_residual(dv, samples), samples, tol));
  return rep;
}

Report mixed_curvature_change_check(const ProjChange& pc, const TangentSection& X, const TangentSection& Y,
                                    const TangentSection& Z, const SampleSet& samples, double tol) {
  const int r = pc.r();
  const NlConnection conn = induced_connection(pc.base, horizontal_projector(pc.base));
  const NlConnection connb = induced_connection(pc.changed, horizontal_projector(pc.changed));
  const DConnection dc = berwald_nabla(conn), dcb = berwald_nabla(connb);
  auto A = [&](int b, int a) -> const Expr& { return pc.coeff(b, a); };

  const TangentSection direct = reframe(connb, conn, mixed_curvature(dcb, curvature_components(dcb), X, Y, Z));
  const TangentSection plain = mixed_curvature(dc, curvature_components(dc), reframe(connb, conn, X),
                                               reframe(connb, conn, Y), reframe(connb, conn, Z));
  // second fiber derivatives: d2A(a,c,d,b) = ddot_d ddot_b A^a_c, likewise for Gamma
  auto d2A = [&](int a, int c, int d, int b) { return dy(dy(A(a, c), b), d); };
  auto d2G = [&](int a, int c, int d, int b) { return dy(dy(conn.gamma(a, c), b), d); };
  // gtil^e_c ddot_d ddot_b ddot_e (G - F/4)^a
  auto third = [&](int a, int d, int b, int c) {
    Expr s(0.0);
    for (int e = 0; e < r; ++e) s += pc.base.gtil_h(e, c) * dy(dy(dy(pc.base.reduced(a), e), b), d);
    return s;
  };
  std::vector<Expr> AX, AZ;
  for (int d = 0; d < r; ++d) {
    Expr sx(0.0), sz(0.0);
    for (int f = 0; f < r; ++f) {
      sx += A(d, f) * X.h[at(f)];
      sz += A(d, f) * Z.h[at(f)];
    }
    AX.push_back(sx);
    AZ.push_back(sz);
  }

  TangentSection derived = zero_section(r), printed = zero_section(r);
  for (int a = 0; a < r; ++a) {
    Expr dh(0.0), dv(0.0), ph(0.0), pv(0.0);
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d) {
          const Expr xyz = X.v[at(d)] * Y.h[at(c)] * Z.h[at(b)];
          const Expr xyzd = X.v[at(d)] * Y.h[at(c)] * Z.v[at(b)];
          const Expr axy = AX[at(d)] * Y.h[at(c)];
          dh -= xyz * d2A(a, c, d, b) + axy * Z.h[at(b)] * d2G(a, c, d, b);
          ph -= xyz * d2A(a, c, d, b) + axy * Z.h[at(b)] * third(a, d, b, c);
          dv -= xyzd * d2A(a, c, d, b);
          pv -= xyzd * d2A(a, c, d, b);
          for (int e = 0; e < r; ++e) {
            dv += A(a, e) * xyz * (d2G(e, c, d, b) - d2A(e, c, d, b));
            pv -= xyz * (A(a, e) * d2A(e, c, d, b) - third(e, d, b, c) * A(a, e));
          }
          dv -= X.v[at(d)] * Y.h[at(c)] * AZ[at(b)] * d2G(a, c, d, b);
          dv -= axy * (Z.v[at(b)] + AZ[at(b)]) * d2G(a, c, d, b);
          pv -= axy * (AZ[at(b)] + Z.v[at(b)]) * third(a, d, b, c);
          pv -= X.v[at(d)] * Y.h[at(c)] * AZ[at(b)] * third(a, d, b, c);
        }
    derived.h[at(a)] = dh;
    derived.v[at(a)] = dv;
    printed.h[at(a)] = ph;
    printed.v[at(a)] = pv;
  }
  Report rep;
  const std::string anchor = "mixed curvatures of projectively related sprays";
  rep.add(judge("mixed curvature change: component form", anchor, max_residual(sub(direct, plain, derived), samples),
                samples, tol));
  rep.add(judge_flag("mixed curvature change: printed expansion", anchor + " (printed reading)",
                     max_residual(sub(direct, plain, printed), samples), samples, tol));
  return rep;
}

GeodesicComparison compare_geodesics(const ProjChange& pc, const OdeState& initial, double horizon, double dt) {
  const int m = pc.base.alg->m(), r = pc.r();
  GeodesicRhs field(pc.base);
  const Tape ftape = Tape::compile(std::vector<Expr>{pc.f}, pc.base.arity());
  OdeRhs rhs = [&](double, std::span<const double> s, std::span<double> d) {
    const std::size_t n = at(m + r);
    field(s.subspan(0, at(m)), s.subspan(at(m), at(r)), d.subspan(0, at(m)), d.subspan(at(m), at(r)));
    double fv = 0.0;
    ftape.eval(s.subspan(0, n), std::span<double>(&fv, 1));
    d[n] = s[n + 1];
    d[n + 1] = -fv * s[n + 1];
  };
  std::vector<double> s0(initial.x);
  s0.insert(s0.end(), initial.y.begin(), initial.y.end());
  s0.push_back(0.0);
  s0.push_back(1.0);
  OdeSolution sol = rk4(rhs, s0, initial.t, initial.t + horizon, dt);

  GeodesicComparison out;
  out.original.dt = sol.dt;
  out.original.t0 = initial.t;
  out.original.t1 = initial.t + horizon;
  out.original.error = sol.error;
  for (std::size_t k = 0; k < sol.t.size(); ++k) {
    OdeState st;
    st.t = sol.t[k];
    st.x.assign(sol.s[k].begin(), sol.s[k].begin() + m);
    st.y.assign(sol.s[k].begin() + m, sol.s[k].begin() + m + r);
    out.original.states.push_back(std::move(st));
    out.s.push_back(sol.s[k][at(m + r)]);
  }
  out.s_increasing = true;
  for (std::size_t k = 1; k < out.s.size(); ++k)
    if (!(out.s[k] > out.s[k - 1])) out.s_increasing = false;
  if (!sol.error.empty() || !(out.s.back() > 0.0)) {
    out.deviation = std::numeric_limits<double>::infinity();
    return out;
  }
  out.changed = integrate(pc.changed, initial, initial.t + out.s.back(), dt);
  out.deviation = out.changed.ok() ? path_deviation(out.original, out.changed)
                                   : std::numeric_limits<double>::infinity();
  return out;
}

Report geodesic_equivalence_check(const ProjChange& pc, const OdeState& initial, double horizon, double dt,
                                  double tol) {
  GeodesicComparison cmp = compare_geodesics(pc, initial, horizon, dt);
  Report rep;
  const std::string anchor = "geodesics of projectively related sprays coincide up to parametrization";
  CheckResult c;
  c.check = "projective change: geodesic path deviation";
  c.anchor = anchor;
  c.max_residual = cmp.deviation;
  c.worst_point = FiberPoint{initial.x, initial.y};
  c.status = std::isfinite(cmp.deviation) && cmp.deviation <= tol ? Status::Pass : Status::Fail;
  if (!cmp.original.ok()) c.note = cmp.original.error;
  else if (!cmp.changed.ok()) c.note = cmp.changed.error;
  rep.add(c);
  CheckResult m;
  m.check = "projective change: parameter strictly increasing";
  m.anchor = anchor;
  m.max_residual = 0.0;
  m.worst_point = c.worst_point;
  m.status = cmp.s_increasing ? Status::Pass : Status::Fail;
  if (!cmp.s.empty()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "s(T) = %.17g", cmp.s.back());
    m.note = buf;
  }
  rep.add(m);
  return rep;
}

FactorRecovery projective_factor(const MechSystem& a, const MechSystem& b, const SampleSet& samples,
                                 double spread_tol) {
  const int r = a.r();
  std::vector<Expr> d;
  for (int k = 0; k < r; ++k) d.push_back(2.0 * a.reduced(k) - 2.0 * b.reduced(k));

  const std::size_t n = samples.size();
  std::vector<FiberPoint> doubled;
  for (std::size_t p = 0; p < n; ++p) {
    FiberPoint q = samples.point(p);
    for (double& v : q.y) v *= 2.0;
    doubled.push_back(std::move(q));
  }
  const SampleSet scaled = samples_from_points(samples.arity(), doubled);
  const auto vals = evaluate_all(d, samples);
  const auto vals2 = evaluate_all(d, scaled);

  FactorRecovery out;
  Residual spread, homog;
  for (std::size_t p = 0; p < n; ++p) {
    const FiberPoint q = samples.point(p);
    double lo = INFINITY, hi = -INFINITY, lo2 = INFINITY, hi2 = -INFINITY, first = NAN, first2 = NAN;
    for (int k = 0; k < r; ++k) {
      const double u = q.y[at(k)];
      if (std::abs(u) <= kZeroSectionRadius) continue;
      const double f = vals[at(k)][p] / u, f2 = vals2[at(k)][p] / (2.0 * u);
      if (std::isnan(first)) {
        first = f;
        first2 = f2;
      }
      lo = std::min(lo, f);
      hi = std::max(hi, f);
      lo2 = std::min(lo2, f2);
      hi2 = std::max(hi2, f2);
    }
    out.f.push_back(first);
    if (std::isnan(first)) continue;
    const double sp = std::max(hi - lo, hi2 - lo2);
    if (sp > spread.max_abs) spread = Residual{sp, p, {}};
    const double h = std::abs(first2 - 2.0 * first);
    if (h > homog.max_abs) homog = Residual{h, p, {}};
  }
  out.spread = spread.max_abs;
  const std::string anchor = "recovery of the projective factor";
  CheckResult c = judge("projective factor: cross-index consistency", anchor, spread, samples, spread_tol);
  if (c.status == Status::Fail) c.note = "not projectively related";
  out.report.add(c);
  out.report.add(judge("projective factor: 1-homogeneity of recovered values", anchor, homog, samples, spread_tol));
  return out;
}

}  // namespace gla
