#include "algebroid/algebroid.hpp"

#include <stdexcept>

namespace gla {

DiffeoMap DiffeoMap::identity(int m) {
  DiffeoMap d;
  for (int i = 0; i < m; ++i) {
    d.fwd.push_back(Expr::x(i));
    d.inv.push_back(Expr::x(i));
  }
  return d;
}

GhMorphism GhMorphism::identity(int r) {
  GhMorphism gh;
  gh.r = r;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      gh.g.emplace_back(a == b ? 1.0 : 0.0);
      gh.gtil.emplace_back(a == b ? 1.0 : 0.0);
    }
  return gh;
}

GenAlgebroid::GenAlgebroid(int m, int r, std::vector<Expr> rho, DiffeoMap h, DiffeoMap eta)
    : m_(m), r_(r), rho_(std::move(rho)), h_(std::move(h)), eta_(std::move(eta)) {
  if (m < 1 || r < 1) throw ArityError("algebroid dimensions must be positive");
  if (rho_.size() != static_cast<std::size_t>(m * r)) throw ArityError("anchor needs m*r components");
  if (h_.fwd.size() != static_cast<std::size_t>(m) || h_.inv.size() != static_cast<std::size_t>(m) ||
      eta_.fwd.size() != static_cast<std::size_t>(m) || eta_.inv.size() != static_cast<std::size_t>(m))
    throw ArityError("diffeomorphisms need m components each way");
  Arity base{m, 0};
  for (const auto* v : {&rho_, &h_.fwd, &h_.inv, &eta_.fwd, &eta_.inv})
    for (const Expr& e : *v) check_arity(e, base);
  for (const Expr& e : rho_) rho_h_.push_back(compose_h(e));
  upper_.assign(static_cast<std::size_t>(r * r * r), Expr(0.0));
  upper_h_ = upper_;
}

void GenAlgebroid::set_structure(int c, int a, int b, const Expr& value) {
  if (!(a < b)) throw std::invalid_argument("structure functions are stored for a < b only");
  check_arity(value, Arity{m_, 0});
  upper_[idx3(c, a, b)] = value;
  upper_h_[idx3(c, a, b)] = compose_h(value);
}

Expr GenAlgebroid::L(int c, int a, int b) const {
  if (a == b) return Expr(0.0);
  return a < b ? upper_[idx3(c, a, b)] : -upper_[idx3(c, b, a)];
}

Expr GenAlgebroid::L_h(int c, int a, int b) const {
  if (a == b) return Expr(0.0);
  return a < b ? upper_h_[idx3(c, a, b)] : -upper_h_[idx3(c, b, a)];
}

Expr GenAlgebroid::anchor_derivative(int a, const Expr& f) const {
  Expr s(0.0);
  for (int i = 0; i < m_; ++i) {
    Expr d = dx(f, i);
    if (!d.is_zero()) s += rho_h(i, a) * d;
  }
  return s;
}

Expr anchored_action(const GenAlgebroid& alg, const PullbackSection& u, const Expr& f) {
  const int m = alg.m(), r = alg.r();
  if (u.coeff.size() != static_cast<std::size_t>(r)) throw ArityError("section needs r coefficients");
  Arity base{m, 0};
  check_arity(f, base);
  for (const Expr& e : u.coeff) check_arity(e, base);
  // z = eta^{-1}(h^{-1}(x))
  std::vector<Expr> z;
  for (int i = 0; i < m; ++i) z.push_back(substitute_base(alg.eta().inv[static_cast<std::size_t>(i)], alg.h().inv));
  std::vector<Expr> eta_z;
  for (int i = 0; i < m; ++i) eta_z.push_back(substitute_base(alg.eta().fwd[static_cast<std::size_t>(i)], z));
  Expr out(0.0);
  for (int j = 0; j < m; ++j) {
    Expr dfj = dx(f, j);
    if (dfj.is_zero()) continue;
    Expr vj(0.0);
    for (int i = 0; i < m; ++i) {
      Expr jac = substitute_base(dx(alg.h().fwd[static_cast<std::size_t>(j)], i), eta_z);
      Expr push(0.0);
      for (int a = 0; a < r; ++a)
        push += substitute_base(alg.rho(i, a), z) * substitute_base(u.coeff[static_cast<std::size_t>(a)], z);
      vj += jac * push;
    }
    out += vj * dfj;
  }
  return out;
}

PullbackSection pullback_bracket(const GenAlgebroid& alg, const PullbackSection& X,
                                 const PullbackSection& Y) {
  const int r = alg.r();
  if (X.coeff.size() != static_cast<std::size_t>(r) || Y.coeff.size() != static_cast<std::size_t>(r))
    throw ArityError("section needs r coefficients");
  PullbackSection out;
  for (int c = 0; c < r; ++c) {
    Expr s(0.0);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        Expr l = alg.L_h(c, a, b);
        if (!l.is_zero()) s += X.coeff[static_cast<std::size_t>(a)] * Y.coeff[static_cast<std::size_t>(b)] * l;
      }
    for (int a = 0; a < r; ++a) {
      s += X.coeff[static_cast<std::size_t>(a)] * alg.anchor_derivative(a, Y.coeff[static_cast<std::size_t>(c)]);
      s -= Y.coeff[static_cast<std::size_t>(a)] * alg.anchor_derivative(a, X.coeff[static_cast<std::size_t>(c)]);
    }
    out.coeff.push_back(s);
  }
  return out;
}

namespace {

PullbackSection coordinate_section(int r, int a) {
  PullbackSection s;
  for (int b = 0; b < r; ++b) s.coeff.emplace_back(a == b ? 1.0 : 0.0);
  return s;
}

}  // namespace

Report validate_axioms(const GenAlgebroid& alg, const GhMorphism* gh, const SampleSet& samples,
                       double tol) {
  const int m = alg.m(), r = alg.r();
  Report rep;
  auto inverse_residuals = [&](const DiffeoMap& d) {
    std::vector<Expr> res;
    for (int i = 0; i < m; ++i) {
      res.push_back(substitute_base(d.fwd[static_cast<std::size_t>(i)], d.inv) - Expr::x(i));
      res.push_back(substitute_base(d.inv[static_cast<std::size_t>(i)], d.fwd) - Expr::x(i));
    }
    return res;
  };
  auto hres = inverse_residuals(alg.h());
  rep.add(judge("diffeomorphism h: inverse composition", "generalized Lie algebroid: h is a diffeomorphism",
                max_residual(hres, samples), samples, tol));
  auto eres = inverse_residuals(alg.eta());
  rep.add(judge("diffeomorphism eta: inverse composition", "generalized Lie algebroid: eta is a diffeomorphism",
                max_residual(eres, samples), samples, tol));
  if (gh != nullptr) {
    std::vector<Expr> res;
    for (int b = 0; b < r; ++b)
      for (int a = 0; a < r; ++a) {
        Expr s(0.0);
        for (int c = 0; c < r; ++c) s += gh->Gtil(b, c) * gh->G(c, a);
        res.push_back(s - Expr(a == b ? 1.0 : 0.0));
      }
    rep.add(judge("morphism (g,h): inverse g~ g = Id", "locally invertible morphism (g,h)",
                  max_residual(res, samples), samples, tol));
  }
  std::vector<Expr> jac;
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b)
      for (int c = b + 1; c < r; ++c) {
        auto Sa = coordinate_section(r, a), Sb = coordinate_section(r, b), Sc = coordinate_section(r, c);
        auto t1 = pullback_bracket(alg, pullback_bracket(alg, Sa, Sb), Sc);
        auto t2 = pullback_bracket(alg, pullback_bracket(alg, Sb, Sc), Sa);
        auto t3 = pullback_bracket(alg, pullback_bracket(alg, Sc, Sa), Sb);
        for (int e = 0; e < r; ++e)
          jac.push_back(t1.coeff[static_cast<std::size_t>(e)] + t2.coeff[static_cast<std::size_t>(e)] +
                        t3.coeff[static_cast<std::size_t>(e)]);
      }
  rep.add(judge("Jacobi identity on coordinate sections", "generalized Lie algebroid: Lie algebra bracket",
                max_residual(jac, samples), samples, tol));
  return rep;
}

}  // namespace gla
