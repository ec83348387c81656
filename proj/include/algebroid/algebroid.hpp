#pragma once

#include <optional>
#include <vector>

#include "algebroid/expr.hpp"
#include "algebroid/report.hpp"
#include "algebroid/sampling.hpp"

namespace gla {

struct DiffeoMap {
  std::vector<Expr> fwd;  // fwd[i], functions of x only
  std::vector<Expr> inv;
  static DiffeoMap identity(int m);
};

// Locally invertible bundle morphism: g[a*r+b] = g^a_b, gtil[a*r+b] = g~^a_b.
struct GhMorphism {
  int r = 0;
  std::vector<Expr> g;
  std::vector<Expr> gtil;
  static GhMorphism identity(int r);
  const Expr& G(int a, int b) const { return g[static_cast<std::size_t>(a * r + b)]; }
  const Expr& Gtil(int a, int b) const { return gtil[static_cast<std::size_t>(a * r + b)]; }
};

struct PullbackSection {
  std::vector<Expr> coeff;
};

class GenAlgebroid {
 public:
  // rho[i*r+a] = rho^i_a; structure functions are set per (c, a<b)
  GenAlgebroid(int m, int r, std::vector<Expr> rho, DiffeoMap h, DiffeoMap eta);

  void set_structure(int c, int a, int b, const Expr& value);  // requires a < b

  int m() const { return m_; }
  int r() const { return r_; }
  Arity arity() const { return {m_, r_}; }
  const DiffeoMap& h() const { return h_; }
  const DiffeoMap& eta() const { return eta_; }

  const Expr& rho(int i, int a) const { return rho_[idx2(i, a)]; }
  Expr L(int c, int a, int b) const;

  // Fields composed with h (pulled back to E): rho^i_a o h o pi, L^c_ab o h o pi.
  const Expr& rho_h(int i, int a) const { return rho_h_[idx2(i, a)]; }
  Expr L_h(int c, int a, int b) const;
  Expr compose_h(const Expr& base_field) const { return substitute_base(base_field, h_.fwd); }

  // sum_i (rho^i_a o h) d_i f
  Expr anchor_derivative(int a, const Expr& f) const;

 private:
  int m_, r_;
  std::vector<Expr> rho_, rho_h_;
  std::vector<Expr> upper_, upper_h_;  // L^c_ab for a<b, dense r*r*r, lower half unused
  DiffeoMap h_, eta_;
  std::size_t idx2(int i, int a) const { return static_cast<std::size_t>(i * r_ + a); }
  std::size_t idx3(int c, int a, int b) const { return static_cast<std::size_t>((c * r_ + a) * r_ + b); }
};

// x -> Th(rho(u)) f evaluated at z = (h o eta)^{-1}(x); u and f depend on x only.
Expr anchored_action(const GenAlgebroid& alg, const PullbackSection& u, const Expr& f);

PullbackSection pullback_bracket(const GenAlgebroid& alg, const PullbackSection& X,
                                 const PullbackSection& Y);

// Diffeomorphism inverses, morphism inverse (when supplied) and the Jacobi identity on coordinate sections.
Report validate_axioms(const GenAlgebroid& alg, const GhMorphism* gh, const SampleSet& samples,
                       double tol);

}  // namespace gla
