#pragma once

#include <memory>
#include <vector>

#include "algebroid/dconn.hpp"

namespace gla {

// Mechanical system: algebroid, bundle morphism, spray coefficients G^a and external force F^a.
struct MechSystem {
  std::shared_ptr<const GenAlgebroid> alg;
  GhMorphism gh;
  std::vector<Expr> G;
  std::vector<Expr> F;

  int r() const { return alg->r(); }
  Arity arity() const { return alg->arity(); }
  // G^a - F^a / 4
  Expr reduced(int a) const;
  // (g^a_b o h) U^b
  Expr transported(int a) const;
  const Expr& gtil_h(int a, int b) const { return gtil_h_.at(static_cast<std::size_t>(a * r() + b)); }
  const Expr& g_h(int a, int b) const { return g_h_.at(static_cast<std::size_t>(a * r() + b)); }

  // fills the h-composed morphism caches; called by make_system
  void prepare();

 private:
  std::vector<Expr> g_h_, gtil_h_;
};

MechSystem make_system(std::shared_ptr<const GenAlgebroid> alg, GhMorphism gh, std::vector<Expr> G,
                       std::vector<Expr> F);

// U^a = y^a
std::vector<Expr> fiber_field(int r);
// Liouville section U^a ddot_a, natural components
NaturalSection liouville(int r);
// Canonical semispray in natural components: ((g o h) U, -2(G - F/4))
NaturalSection semispray(const MechSystem& sys);

NlConnection canonical_connection(const MechSystem& sys);

// U^b ddot_b (G - F/4) - 2 (G - F/4), plus the bracket cross-check of the deviation [C,S] - S.
Report spray_condition(const MechSystem& sys, const SampleSet& samples, double tol);
bool is_spray(const MechSystem& sys, const SampleSet& samples, double tol);

// Horizontal projector of the semispray: h_S(d~_a) = d~_a + Hs^b_a ddot_b, h_S(ddot_a) = 0.
struct HorizontalProjector {
  int r = 0;
  std::vector<Expr> coeff;  // coeff[b*r+a] = Hs^b_a
  const Expr& operator()(int b, int a) const { return coeff[static_cast<std::size_t>(b * r + a)]; }
  NaturalSection apply(const NaturalSection& X) const;
};
HorizontalProjector horizontal_projector(const MechSystem& sys);
// Induced nonlinear connection, Gamma^b_a = -Hs^b_a.
NlConnection induced_connection(const MechSystem& sys, const HorizontalProjector& hp);
// 1/2 (X + [J X, S] - J [X, S]) on natural frame sections against the component form; idempotency.
Report projector_oracle_check(const MechSystem& sys, const SampleSet& samples, double tol);

DConnection berwald_nabla(const NlConnection& conn);

// sum Xdot^a ddot_a f
Expr v_derivative(const TangentSection& X, const Expr& f);
TensorField hessian(const Expr& f, int r);
Report homog1_check(const Expr& f, const SampleSet& samples, double tol);
// v-derivative of the Hessian along U plus the Hessian itself
Report hessian_lemma_check(const Expr& f, int r, const SampleSet& samples, double tol);

// Covariant derivative of the canonical section along the semispray, Berwald derivative of the projector.
Report liouville_transport_check(const MechSystem& sys, const SampleSet& samples, double tol);
// U^c ddot_c Gamma^b_a - Gamma^b_a for the canonical connection and for the projector's connection.
Report homogeneity_check(const MechSystem& sys, const SampleSet& samples, double tol);
// The canonical connection reproduces 2(G - F/4) through the closure formula.
Report closure_check(const MechSystem& sys, const SampleSet& samples, double tol);
// Mixed curvature of the Berwald derivative with U inserted in either slot.
Report spray_mixed_curvature_check(const MechSystem& sys, const SampleSet& samples, double tol);

}  // namespace gla
