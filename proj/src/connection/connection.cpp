#include "algebroid/connection.hpp"

namespace gla {

namespace {
inline std::size_t at(int k) { return static_cast<std::size_t>(k); }
}  // namespace

TangentSection operator+(const TangentSection& A, const TangentSection& B) {
  TangentSection C;
  for (std::size_t a = 0; a < A.h.size(); ++a) {
    C.h.push_back(A.h[a] + B.h[a]);
    C.v.push_back(A.v[a] + B.v[a]);
  }
  return C;
}

TangentSection operator-(const TangentSection& A, const TangentSection& B) {
  TangentSection C;
  for (std::size_t a = 0; a < A.h.size(); ++a) {
    C.h.push_back(A.h[a] - B.h[a]);
    C.v.push_back(A.v[a] - B.v[a]);
  }
  return C;
}

TangentSection operator*(const Expr& f, const TangentSection& A) {
  TangentSection C;
  for (std::size_t a = 0; a < A.h.size(); ++a) {
    C.h.push_back(f * A.h[a]);
    C.v.push_back(f * A.v[a]);
  }
  return C;
}

TangentSection zero_section(int r) {
  return TangentSection{std::vector<Expr>(at(r)), std::vector<Expr>(at(r))};
}

TangentSection horizontal_frame(int r, int a) {
  TangentSection s = zero_section(r);
  s.h[at(a)] = Expr(1.0);
  return s;
}

TangentSection vertical_frame(int r, int a) {
  TangentSection s = zero_section(r);
  s.v[at(a)] = Expr(1.0);
  return s;
}

std::vector<Expr> flatten(const TangentSection& X) {
  std::vector<Expr> out(X.h);
  out.insert(out.end(), X.v.begin(), X.v.end());
  return out;
}

std::vector<TangentSection> probe_sections(Arity arity, int count) {
  const int m = arity.m, r = arity.r;
  std::vector<TangentSection> out;
  for (int k = 0; k < count; ++k) {
    TangentSection s;
    for (int a = 0; a < r; ++a) {
      const double c1 = 0.5 + 0.25 * ((k + a) % 3), c2 = 0.3 - 0.2 * ((k * 2 + a) % 2);
      Expr xa = m > 0 ? Expr::x((a + k) % m) : Expr(0.0);
      s.h.push_back(Expr(c1) + c2 * xa * Expr::y((a + k + 1) % r));
      s.v.push_back(Expr(c2) * Expr::y((a + k) % r) - Expr(0.4 * ((k + 1) % 2)) * xa + Expr(0.1 * (a + 1)));
    }
    out.push_back(std::move(s));
  }
  return out;
}

NlConnection::NlConnection(std::shared_ptr<const GenAlgebroid> alg, std::vector<Expr> gamma)
    : alg_(std::move(alg)), gamma_(std::move(gamma)) {
  if (gamma_.size() != static_cast<std::size_t>(r() * r()))
    throw ArityError("connection needs r*r coefficients");
  for (const Expr& e : gamma_) check_arity(e, arity());
}

Expr NlConnection::delta(int a, const Expr& f) const {
  Expr s = alg_->anchor_derivative(a, f);
  for (int b = 0; b < r(); ++b) {
    const Expr& g = gamma(b, a);
    if (g.is_zero()) continue;
    Expr d = dy(f, b);
    if (!d.is_zero()) s -= g * d;
  }
  return s;
}

Expr NlConnection::act(const TangentSection& X, const Expr& f) const {
  Expr s(0.0);
  for (int a = 0; a < r(); ++a) {
    if (!X.h[at(a)].is_zero()) s += X.h[at(a)] * delta(a, f);
    if (!X.v[at(a)].is_zero()) {
      Expr d = dy(f, a);
      if (!d.is_zero()) s += X.v[at(a)] * d;
    }
  }
  return s;
}

NaturalSection to_natural(const NlConnection& conn, const TangentSection& X) {
  NaturalSection N{X.h, {}};
  for (int a = 0; a < conn.r(); ++a) {
    Expr s = X.v[at(a)];
    for (int b = 0; b < conn.r(); ++b) s -= conn.gamma(a, b) * X.h[at(b)];
    N.v.push_back(s);
  }
  return N;
}

TangentSection from_natural(const NlConnection& conn, const NaturalSection& X) {
  TangentSection T{X.h, {}};
  for (int a = 0; a < conn.r(); ++a) {
    Expr s = X.v[at(a)];
    for (int b = 0; b < conn.r(); ++b) s += conn.gamma(a, b) * X.h[at(b)];
    T.v.push_back(s);
  }
  return T;
}

TangentSection reframe(const NlConnection& from, const NlConnection& to, const TangentSection& X) {
  return from_natural(to, to_natural(from, X));
}

namespace {

Expr natural_act(const GenAlgebroid& alg, const NaturalSection& A, const Expr& f) {
  Expr s(0.0);
  for (int a = 0; a < alg.r(); ++a) {
    if (!A.h[at(a)].is_zero()) s += A.h[at(a)] * alg.anchor_derivative(a, f);
    if (!A.v[at(a)].is_zero()) {
      Expr d = dy(f, a);
      if (!d.is_zero()) s += A.v[at(a)] * d;
    }
  }
  return s;
}

}  // namespace

NaturalSection bracket_natural(const GenAlgebroid& alg, const NaturalSection& A, const NaturalSection& B) {
  const int r = alg.r();
  NaturalSection C;
  for (int c = 0; c < r; ++c) {
    Expr s = natural_act(alg, A, B.h[at(c)]) - natural_act(alg, B, A.h[at(c)]);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        Expr l = alg.L_h(c, a, b);
        if (!l.is_zero()) s += A.h[at(a)] * B.h[at(b)] * l;
      }
    C.h.push_back(s);
    C.v.push_back(natural_act(alg, A, B.v[at(c)]) - natural_act(alg, B, A.v[at(c)]));
  }
  return C;
}

TangentSection bracket(const NlConnection& conn, const TangentSection& A, const TangentSection& B) {
  return from_natural(conn, bracket_natural(conn.alg(), to_natural(conn, A), to_natural(conn, B)));
}

std::vector<Expr> curvature_R(const NlConnection& conn) {
  const int r = conn.r();
  std::vector<Expr> R(static_cast<std::size_t>(r * r * r));
  for (int c = 0; c < r; ++c)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        Expr s = conn.delta(b, conn.gamma(c, a)) - conn.delta(a, conn.gamma(c, b));
        for (int d = 0; d < r; ++d) {
          Expr l = conn.alg().L_h(d, a, b);
          if (!l.is_zero()) s += l * conn.gamma(c, d);
        }
        R[static_cast<std::size_t>((c * r + a) * r + b)] = s;
      }
  return R;
}

Report frame_bracket_check(const NlConnection& conn, const SampleSet& samples, double tol) {
  const int r = conn.r(), m = conn.alg().m();
  const auto R = curvature_R(conn);
  std::vector<Expr> probes;
  for (int i = 0; i < m; ++i) probes.push_back(Expr::x(i));
  for (int a = 0; a < r; ++a) probes.push_back(Expr::y(a));

  std::vector<Expr> hh_vertical, hh_anchor, hv, vv, antisym;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      for (std::size_t k = 0; k < probes.size(); ++k) {
        const Expr& phi = probes[k];
        bool fiber_probe = k >= static_cast<std::size_t>(m);
        // [delta_a, delta_b] against L delta_c + R ddot_c
        Expr lhs = conn.delta(a, conn.delta(b, phi)) - conn.delta(b, conn.delta(a, phi));
        Expr rhs(0.0);
        for (int c = 0; c < r; ++c) {
          Expr l = conn.alg().L_h(c, a, b);
          if (!l.is_zero()) rhs += l * conn.delta(c, phi);
          Expr dphi = dy(phi, c);
          if (!dphi.is_zero()) rhs += R[static_cast<std::size_t>((c * r + a) * r + b)] * dphi;
        }
        (fiber_probe ? hh_vertical : hh_anchor).push_back(lhs - rhs);
        // [delta_a, ddot_b] against (ddot_b Gamma^c_a) ddot_c
        Expr lhs2 = conn.delta(a, dy(phi, b)) - dy(conn.delta(a, phi), b);
        Expr rhs2(0.0);
        for (int c = 0; c < r; ++c) {
          Expr dphi = dy(phi, c);
          if (!dphi.is_zero()) rhs2 += dy(conn.gamma(c, a), b) * dphi;
        }
        hv.push_back(lhs2 - rhs2);
        vv.push_back(dy(dy(phi, b), a) - dy(dy(phi, a), b));
      }
      for (int c = 0; c < r; ++c)
        antisym.push_back(R[static_cast<std::size_t>((c * r + a) * r + b)] +
                          R[static_cast<std::size_t>((c * r + b) * r + a)]);
    }
  Report rep;
  rep.add(judge("frame bracket [delta_a,delta_b]: curvature R on fiber probes",
                "adapted-frame brackets: horizontal-horizontal", max_residual(hh_vertical, samples), samples, tol));
  rep.add(judge("frame bracket [delta_a,delta_b]: anchor part on base probes",
                "adapted-frame brackets: horizontal-horizontal", max_residual(hh_anchor, samples), samples, tol));
  rep.add(judge("frame bracket [delta_a,ddot_b]", "adapted-frame brackets: horizontal-vertical",
                max_residual(hv, samples), samples, tol));
  rep.add(judge("frame bracket [ddot_a,ddot_b] = 0", "adapted-frame brackets: vertical-vertical",
                max_residual(vv, samples), samples, tol));
  rep.add(judge("curvature R antisymmetry", "connection curvature R^c_ab",
                max_residual(antisym, samples), samples, tol));
  return rep;
}

TangentSection apply_V(const TangentSection& X) {
  return TangentSection{std::vector<Expr>(X.h.size()), X.v};
}

TangentSection apply_H(const TangentSection& X) {
  return TangentSection{X.h, std::vector<Expr>(X.v.size())};
}

TangentSection apply_P(const TangentSection& X) {
  TangentSection P{X.h, {}};
  for (const Expr& e : X.v) P.v.push_back(-e);
  return P;
}

TangentSection apply_J(const NlConnection& conn, const GhMorphism& gh, const TangentSection& X) {
  const int r = conn.r();
  TangentSection J{std::vector<Expr>(at(r)), {}};
  for (int b = 0; b < r; ++b) {
    Expr s(0.0);
    for (int a = 0; a < r; ++a) s += conn.alg().compose_h(gh.Gtil(b, a)) * X.h[at(a)];
    J.v.push_back(s);
  }
  return J;
}

}  // namespace gla
