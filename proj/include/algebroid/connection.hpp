#pragma once

#include <memory>
#include <vector>

#include "algebroid/algebroid.hpp"

namespace gla {

// Components on the adapted frame (delta~_a, d~dot_a) of some nonlinear connection.
struct TangentSection {
  std::vector<Expr> h;  // X^a
  std::vector<Expr> v;  // Xdot^a
};

// Components on the natural frame (d~_a, d~dot_a).
struct NaturalSection {
  std::vector<Expr> h;  // X^a
  std::vector<Expr> v;  // X~^a
};

TangentSection operator+(const TangentSection& A, const TangentSection& B);
TangentSection operator-(const TangentSection& A, const TangentSection& B);
TangentSection operator*(const Expr& f, const TangentSection& A);
TangentSection zero_section(int r);
TangentSection horizontal_frame(int r, int a);  // delta~_a
TangentSection vertical_frame(int r, int a);    // d~dot_a
std::vector<Expr> flatten(const TangentSection& X);
// Fixed low-degree polynomial sections used as probes by the identity checks.
std::vector<TangentSection> probe_sections(Arity arity, int count);

class NlConnection {
 public:
  // gamma[a*r+c] = Gamma^a_c(x, y)
  NlConnection(std::shared_ptr<const GenAlgebroid> alg, std::vector<Expr> gamma);

  const GenAlgebroid& alg() const { return *alg_; }
  const std::shared_ptr<const GenAlgebroid>& alg_ptr() const { return alg_; }
  int r() const { return alg_->r(); }
  Arity arity() const { return alg_->arity(); }
  const Expr& gamma(int a, int c) const { return gamma_[static_cast<std::size_t>(a * r() + c)]; }
  const std::vector<Expr>& gamma() const { return gamma_; }

  // delta~_a f = (rho^i_a o h) d_i f - Gamma^b_a ddot_b f
  Expr delta(int a, const Expr& f) const;
  // anchored action of an adapted section on a function
  Expr act(const TangentSection& X, const Expr& f) const;

 private:
  std::shared_ptr<const GenAlgebroid> alg_;
  std::vector<Expr> gamma_;
};

NaturalSection to_natural(const NlConnection& conn, const TangentSection& X);
TangentSection from_natural(const NlConnection& conn, const NaturalSection& X);
// Same geometric section, re-expressed in the adapted frame of another connection.
TangentSection reframe(const NlConnection& from, const NlConnection& to, const TangentSection& X);

// Bracket on the generalized tangent bundle in natural components, full anchor on both parts.
NaturalSection bracket_natural(const GenAlgebroid& alg, const NaturalSection& A, const NaturalSection& B);
TangentSection bracket(const NlConnection& conn, const TangentSection& A, const TangentSection& B);

// R[(c*r+a)*r+b] = R^c_ab = delta_b Gamma^c_a - delta_a Gamma^c_b + (L^d_ab o h) Gamma^c_d
std::vector<Expr> curvature_R(const NlConnection& conn);

Report frame_bracket_check(const NlConnection& conn, const SampleSet& samples, double tol);

TangentSection apply_V(const TangentSection& X);
TangentSection apply_H(const TangentSection& X);
TangentSection apply_P(const TangentSection& X);
TangentSection apply_J(const NlConnection& conn, const GhMorphism& gh, const TangentSection& X);

}  // namespace gla
