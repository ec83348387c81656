#pragma once

#include <memory>
#include <string>

#include "algebroid/config.hpp"
#include "algebroid/dconn.hpp"
#include "algebroid/mech.hpp"
#include "random_expr.hpp"

namespace gla::testing {

inline SystemConfig bundled(const std::string& name) {
  return load_config(std::string(ALGEBROID_CONFIG_DIR) + "/" + name + ".cfg");
}

inline std::shared_ptr<GenAlgebroid> standard_algebroid(int m, int r) {
  std::vector<Expr> rho;
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < r; ++a) rho.emplace_back(i == a ? 1.0 : 0.0);
  return std::make_shared<GenAlgebroid>(m, r, rho, DiffeoMap::identity(m), DiffeoMap::identity(m));
}

inline SampleSet samples(Arity a, int count = 100, std::uint64_t seed = 42, double min_norm = 0.0) {
  SampleSpec spec;
  spec.count = count;
  spec.seed = seed;
  return draw_samples(a, spec, min_norm);
}

inline double worst(const Report& rep) {
  double w = 0.0;
  for (const auto& c : rep.checks) w = std::max(w, c.max_residual);
  return w;
}

// identity morphisms on R^2 with a 2-homogeneous, non-polynomial spray
inline MechSystem nonpolynomial_spray() {
  const Arity a{2, 2};
  auto alg = standard_algebroid(2, 2);
  std::vector<Expr> G{parse("0.3*y1*sqrt(y1^2 + y2^2) + x1*y2^2", a),
                      parse("0.2*y2^3/sqrt(y1^2 + y2^2) + 0.1*x2*y1*y2", a)};
  std::vector<Expr> F{parse("0.2*x1*y1*y2", a), Expr(0.0)};
  return make_system(alg, GhMorphism::identity(2), G, F);
}

// random distinguished connection with polynomial components
inline DConnection random_dconnection(const NlConnection& conn, std::uint64_t seed) {
  ExprGen gen(conn.arity(), seed);
  const int r = conn.r();
  std::vector<std::vector<Expr>> fam(4);
  for (auto& f : fam)
    for (int k = 0; k < r * r * r; ++k) f.push_back(gen.polynomial(2, 2));
  return DConnection(conn, fam[0], fam[1], fam[2], fam[3]);
}

}  // namespace gla::testing
