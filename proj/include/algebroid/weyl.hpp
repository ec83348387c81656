#pragma once

#include <stdexcept>
#include <vector>

#include "algebroid/geo.hpp"

namespace gla {

// Projective change S -> S + f C of a spray.
struct ProjChange {
  MechSystem base;
  Expr f;
  MechSystem changed;    // reduced coefficients G - F/4 - f U / 2
  std::vector<Expr> A;   // A[b*r+a] = A^b_a

  int r() const { return base.r(); }
  const Expr& coeff(int b, int a) const { return A[static_cast<std::size_t>(b * r() + a)]; }
};

struct ProjectiveChangeError : std::runtime_error {
  Report report;
  ProjectiveChangeError(const std::string& what, Report rep) : std::runtime_error(what), report(std::move(rep)) {}
};

// Rejects f when its 1-homogeneity residual exceeds tol on the samples.
ProjChange make_projective_change(const MechSystem& sys, const Expr& f, const SampleSet& samples, double tol);

// Changed projector minus the old one against A, both componentwise and through the projector action.
Report projector_change_check(const ProjChange& pc, const SampleSet& samples, double tol);

// Sections X, Y are given in the adapted frame of the changed spray.
Report berwald_relation_check(const ProjChange& pc, const TangentSection& X, const TangentSection& Y,
                              const SampleSet& samples, double tol);
Report mixed_curvature_change_check(const ProjChange& pc, const TangentSection& X, const TangentSection& Y,
                                    const TangentSection& Z, const SampleSet& samples, double tol);

// Integrates both geodesics and compares their images; the parameter ODE is s'' = -f s', s(0) = 0, s'(0) = 1.
struct GeodesicComparison {
  Trajectory original, changed;
  std::vector<double> s;  // s(t) on the original grid
  double deviation = 0.0;
  bool s_increasing = false;
};
GeodesicComparison compare_geodesics(const ProjChange& pc, const OdeState& initial, double horizon, double dt);
Report geodesic_equivalence_check(const ProjChange& pc, const OdeState& initial, double horizon, double dt,
                                  double tol);

struct FactorRecovery {
  Report report;
  std::vector<double> f;       // recovered value per sample, NaN where undefined
  double spread = 0.0;         // worst cross-index disagreement
};
// Recovers f from 2(G - F/4) - 2(Gbar - Fbar/4) = f U using indices with |U^a| > 0.1.
FactorRecovery projective_factor(const MechSystem& a, const MechSystem& b, const SampleSet& samples,
                                 double spread_tol = 1e-6);

}  // namespace gla
