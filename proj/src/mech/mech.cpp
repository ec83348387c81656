#include "algebroid/mech.hpp"

namespace gla {

namespace {
inline std::size_t at(int k) { return static_cast<std::size_t>(k); }
}  // namespace

Expr MechSystem::reduced(int a) const {
  return G[at(a)] - 0.25 * F[at(a)];
}

Expr MechSystem::transported(int a) const {
  Expr s(0.0);
  for (int b = 0; b < r(); ++b) s += g_h(a, b) * Expr::y(b);
  return s;
}

void MechSystem::prepare() {
  const int n = r();
  if (G.size() != at(n) || F.size() != at(n)) throw ArityError("spray and force need r components");
  if (gh.r != n) throw ArityError("bundle morphism rank differs from the algebroid rank");
  for (const Expr& e : G) check_arity(e, arity());
  for (const Expr& e : F) check_arity(e, arity());
  g_h_.clear();
  gtil_h_.clear();
  for (const Expr& e : gh.g) g_h_.push_back(alg->compose_h(e));
  for (const Expr& e : gh.gtil) gtil_h_.push_back(alg->compose_h(e));
}

MechSystem make_system(std::shared_ptr<const GenAlgebroid> alg, GhMorphism gh, std::vector<Expr> G,
                       std::vector<Expr> F) {
  MechSystem s;
  s.alg = std::move(alg);
  s.gh = std::move(gh);
  s.G = std::move(G);
  s.F = std::move(F);
  s.prepare();
  return s;
}

std::vector<Expr> fiber_field(int r) {
  std::vector<Expr> U;
  for (int a = 0; a < r; ++a) U.push_back(Expr::y(a));
  return U;
}

NaturalSection liouville(int r) {
  return NaturalSection{std::vector<Expr>(at(r)), fiber_field(r)};
}

NaturalSection semispray(const MechSystem& sys) {
  NaturalSection S;
  for (int a = 0; a < sys.r(); ++a) {
    S.h.push_back(sys.transported(a));
    S.v.push_back(-2.0 * sys.reduced(a));
  }
  return S;
}

NlConnection canonical_connection(const MechSystem& sys) {
  const int r = sys.r();
  const GenAlgebroid& alg = *sys.alg;
  std::vector<Expr> w;
  for (int a = 0; a < r; ++a) w.push_back(sys.transported(a));
  std::vector<Expr> gamma;
  for (int a = 0; a < r; ++a)
    for (int c = 0; c < r; ++c) {
      Expr s(0.0);
      for (int b = 0; b < r; ++b) s += sys.gtil_h(b, c) * dy(sys.reduced(a), b);
      Expr tail(0.0);
      for (int d = 0; d < r; ++d)
        for (int f = 0; f < r; ++f) {
          Expr l = alg.L_h(f, d, c);
          if (!l.is_zero()) tail -= w[at(d)] * l * sys.gtil_h(a, f);
        }
      for (int b = 0; b < r; ++b)
        for (int e = 0; e < r; ++e) {
          Expr dg = alg.anchor_derivative(c, sys.g_h(b, e));
          if (!dg.is_zero()) tail += dg * Expr::y(e) * sys.gtil_h(a, b);
        }
      for (int b = 0; b < r; ++b) {
        Expr dgt = alg.anchor_derivative(b, sys.gtil_h(a, c));
        if (!dgt.is_zero()) tail -= w[at(b)] * dgt;
      }
      gamma.push_back(s + 0.5 * tail);
    }
  return NlConnection(sys.alg, std::move(gamma));
}

Report spray_condition(const MechSystem& sys, const SampleSet& samples, double tol) {
  const int r = sys.r();
  std::vector<Expr> euler, deviation, liouville_pair;
  const NaturalSection S = semispray(sys);
  const NaturalSection C = liouville(r);
  const NaturalSection dev = bracket_natural(*sys.alg, C, S);
  for (int a = 0; a < r; ++a) {
    Expr g = sys.reduced(a);
    Expr ug(0.0);
    for (int b = 0; b < r; ++b) ug += Expr::y(b) * dy(g, b);
    euler.push_back(ug - 2.0 * g);
    // [C,S] - S has vertical part 2(2G - U ddot G) and no horizontal part
    deviation.push_back(dev.h[at(a)] - S.h[at(a)]);
    deviation.push_back(dev.v[at(a)] - S.v[at(a)] - 2.0 * (2.0 * g - ug));
    Expr js(0.0);
    for (int b = 0; b < r; ++b) js += sys.gtil_h(a, b) * S.h[at(b)];
    liouville_pair.push_back(js - C.v[at(a)]);
  }
  Report rep;
  rep.add(judge("spray condition", "spray condition: U ddot(G - F/4) = 2(G - F/4)",
                max_residual(euler, samples), samples, tol));
  rep.add(judge("spray deviation bracket", "deviation [C,S] - S of the semispray", max_residual(deviation, samples),
                samples, 1e-9));
  rep.add(judge("semispray J(S) = C", "almost tangent structure maps the semispray to the Liouville section",
                max_residual(liouville_pair, samples), samples, 1e-9));
  return rep;
}

bool is_spray(const MechSystem& sys, const SampleSet& samples, double tol) {
  const Report rep = spray_condition(sys, samples, tol);
  return rep.checks.front().status == Status::Pass;
}

NaturalSection HorizontalProjector::apply(const NaturalSection& X) const {
  NaturalSection out{X.h, {}};
  for (int b = 0; b < r; ++b) {
    Expr s(0.0);
    for (int a = 0; a < r; ++a) s += (*this)(b, a) * X.h[at(a)];
    out.v.push_back(s);
  }
  return out;
}

HorizontalProjector horizontal_projector(const MechSystem& sys) {
  const int r = sys.r();
  const GenAlgebroid& alg = *sys.alg;
  HorizontalProjector hp;
  hp.r = r;
  for (int b = 0; b < r; ++b)
    for (int a = 0; a < r; ++a) {
      Expr s(0.0);
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d)
          for (int e = 0; e < r; ++e) {
            Expr l = alg.L_h(e, d, a);
            if (!l.is_zero()) s += Expr::y(c) * sys.g_h(d, c) * sys.gtil_h(b, e) * l;
          }
      for (int c = 0; c < r; ++c)
        for (int e = 0; e < r; ++e) {
          Expr dg = alg.anchor_derivative(a, sys.g_h(e, c));
          if (!dg.is_zero()) s -= Expr::y(c) * dg * sys.gtil_h(b, e);
        }
      for (int c = 0; c < r; ++c) {
        Expr dgt = alg.anchor_derivative(c, sys.gtil_h(b, a));
        if (!dgt.is_zero()) s -= sys.transported(c) * dgt;
      }
      for (int c = 0; c < r; ++c) s -= 2.0 * sys.gtil_h(c, a) * dy(sys.reduced(b), c);
      hp.coeff.push_back(0.5 * s);
    }
  return hp;
}

NlConnection induced_connection(const MechSystem& sys, const HorizontalProjector& hp) {
  std::vector<Expr> gamma;
  for (const Expr& e : hp.coeff) gamma.push_back(-e);
  return NlConnection(sys.alg, std::move(gamma));
}

namespace {

NaturalSection apply_J_natural(const MechSystem& sys, const NaturalSection& X) {
  NaturalSection out{std::vector<Expr>(at(sys.r())), {}};
  for (int b = 0; b < sys.r(); ++b) {
    Expr s(0.0);
    for (int a = 0; a < sys.r(); ++a) s += sys.gtil_h(b, a) * X.h[at(a)];
    out.v.push_back(s);
  }
  return out;
}

NaturalSection natural_frame(int r, int k) {
  NaturalSection s{std::vector<Expr>(at(r)), std::vector<Expr>(at(r))};
  if (k < r) s.h[at(k)] = Expr(1.0);
  else s.v[at(k - r)] = Expr(1.0);
  return s;
}

}  // namespace

Report projector_oracle_check(const MechSystem& sys, const SampleSet& samples, double tol) {
  const int r = sys.r();
  const HorizontalProjector hp = horizontal_projector(sys);
  const NaturalSection S = semispray(sys);
  std::vector<Expr> oracle, idem;
  for (int k = 0; k < 2 * r; ++k) {
    const NaturalSection X = natural_frame(r, k);
    const NaturalSection JX = apply_J_natural(sys, X);
    const NaturalSection b1 = bracket_natural(*sys.alg, JX, S);
    const NaturalSection b2 = apply_J_natural(sys, bracket_natural(*sys.alg, X, S));
    const NaturalSection comp = hp.apply(X);
    const NaturalSection twice = hp.apply(comp);
    for (int a = 0; a < r; ++a) {
      oracle.push_back(0.5 * (X.h[at(a)] + b1.h[at(a)] - b2.h[at(a)]) - comp.h[at(a)]);
      oracle.push_back(0.5 * (X.v[at(a)] + b1.v[at(a)] - b2.v[at(a)]) - comp.v[at(a)]);
      idem.push_back(twice.h[at(a)] - comp.h[at(a)]);
      idem.push_back(twice.v[at(a)] - comp.v[at(a)]);
    }
  }
  Report rep;
  rep.add(judge("horizontal projector: definition vs components", "horizontal projector of the semispray",
                max_residual(oracle, samples), samples, tol));
  rep.add(judge("horizontal projector idempotent", "horizontal projector of the semispray",
                max_residual(idem, samples), samples, tol));
  return rep;
}

DConnection berwald_nabla(const NlConnection& conn) {
  return DConnection::berwald(conn);
}

Expr v_derivative(const TangentSection& X, const Expr& f) {
  Expr s(0.0);
  for (std::size_t a = 0; a < X.v.size(); ++a)
    if (!X.v[a].is_zero()) s += X.v[a] * dy(f, static_cast<int>(a));
  return s;
}

TensorField hessian(const Expr& f, int r) {
  TensorField H({0, 0, 0, 2}, r);
  for (int a = 0; a < r; ++a) {
    Expr da = dy(f, a);
    for (int b = 0; b < r; ++b) H[{a, b}] = dy(da, b);
  }
  return H;
}

Report homog1_check(const Expr& f, const SampleSet& samples, double tol) {
  const int r = samples.arity().r;
  Expr s(0.0);
  for (int a = 0; a < r; ++a) s += Expr::y(a) * dy(f, a);
  std::vector<Expr> res{s - f};
  Report rep;
  rep.add(judge("1-homogeneity of f", "1-homogeneity: U ddot f = f", max_residual(res, samples), samples, tol));
  return rep;
}

Report hessian_lemma_check(const Expr& f, int r, const SampleSet& samples, double tol) {
  const TensorField H = hessian(f, r);
  std::vector<Expr> res;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      Expr s(0.0);
      for (int c = 0; c < r; ++c) s += Expr::y(c) * dy(H[{a, b}], c);
      res.push_back(s + H[{a, b}]);
    }
  Report rep;
  rep.add(judge("hessian lemma: " + to_string(f), "v-derivative of the Hessian along U equals minus the Hessian",
                max_residual(res, samples), samples, tol));
  return rep;
}

Report liouville_transport_check(const MechSystem& sys, const SampleSet& samples, double tol) {
  const int r = sys.r();
  const NlConnection conn = induced_connection(sys, horizontal_projector(sys));
  const DConnection dc = berwald_nabla(conn);
  const TangentSection S = from_natural(conn, semispray(sys));
  const TangentSection U{fiber_field(r), fiber_field(r)};
  const TangentSection D = cov_deriv(dc, S, U);
  Report rep;
  rep.add(judge("Berwald derivative of U along S", "Berwald derivative of the canonical section along the spray",
                max_residual(flatten(D), samples), samples, tol));
  return rep;
}

Report homogeneity_check(const MechSystem& sys, const SampleSet& samples, double tol) {
  const int r = sys.r();
  auto homog = [&](const NlConnection& conn) {
    std::vector<Expr> res;
    for (int b = 0; b < r; ++b)
      for (int a = 0; a < r; ++a) {
        Expr s(0.0);
        for (int c = 0; c < r; ++c) s += Expr::y(c) * dy(conn.gamma(b, a), c);
        res.push_back(s - conn.gamma(b, a));
      }
    return max_residual(res, samples);
  };
  Report rep;
  rep.add(judge("canonical connection 1-homogeneous", "homogeneity of the canonical connection of a spray",
                homog(canonical_connection(sys)), samples, tol));
  rep.add(judge("horizontal projector 1-homogeneous", "homogeneity of the horizontal projector of a spray",
                homog(induced_connection(sys, horizontal_projector(sys))), samples, tol));
  return rep;
}

Report closure_check(const MechSystem& sys, const SampleSet& samples, double tol) {
  const int r = sys.r();
  const GenAlgebroid& alg = *sys.alg;
  const NlConnection conn = canonical_connection(sys);
  std::vector<Expr> w;
  for (int a = 0; a < r; ++a) w.push_back(sys.transported(a));
  std::vector<Expr> res;
  for (int a = 0; a < r; ++a) {
    Expr s(0.0);
    for (int c = 0; c < r; ++c) s += conn.gamma(a, c) * w[at(c)];
    Expr tail(0.0);
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        for (int d = 0; d < r; ++d) {
          Expr l = alg.L_h(b, d, c);
          if (!l.is_zero()) tail += w[at(d)] * l * sys.gtil_h(a, b) * w[at(c)];
        }
        for (int e = 0; e < r; ++e) {
          Expr dg = alg.anchor_derivative(c, sys.g_h(b, e));
          if (!dg.is_zero()) tail -= dg * Expr::y(e) * sys.gtil_h(a, b) * w[at(c)];
        }
        Expr dgt = alg.anchor_derivative(b, sys.gtil_h(a, c));
        if (!dgt.is_zero()) tail += w[at(b)] * dgt * w[at(c)];
      }
    res.push_back(s + 0.5 * tail - 2.0 * sys.reduced(a));
  }
  Report rep;
  rep.add(judge("canonical spray closure", "canonical connection reproduces the spray coefficients",
                max_residual(res, samples), samples, tol));
  return rep;
}

Report spray_mixed_curvature_check(const MechSystem& sys, const SampleSet& samples, double tol) {
  const int r = sys.r();
  Report rep;
  const std::string anchor = "mixed curvature of the Berwald derivative of a spray";
  if (!is_spray(sys, samples, tol)) {
    CheckResult c;
    c.check = "mixed curvature with U";
    c.status = Status::Inconclusive;
    c.anchor = anchor;
    c.note = "spray condition fails, precondition not met";
    rep.add(c);
    return rep;
  }
  const NlConnection conn = induced_connection(sys, horizontal_projector(sys));
  const DConnection dc = berwald_nabla(conn);
  const CurvatureComponents K = curvature_components(dc);
  const TangentSection U{fiber_field(r), fiber_field(r)};
  const auto probes = probe_sections(sys.arity(), 2);
  std::vector<Expr> first, second;
  for (const auto& X : probes)
    for (const auto& Y : probes) {
      auto a = flatten(mixed_curvature(dc, K, X, Y, U));
      auto b = flatten(mixed_curvature(dc, K, U, X, Y));
      first.insert(first.end(), a.begin(), a.end());
      second.insert(second.end(), b.begin(), b.end());
    }
  rep.add(judge("mixed curvature P(X,Y)U = 0", anchor, max_residual(first, samples), samples, tol));
  rep.add(judge("mixed curvature P(U,X)Y = 0", anchor, max_residual(second, samples), samples, tol));
  return rep;
}

}  // namespace gla
