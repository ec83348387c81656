#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "algebroid/mech.hpp"

namespace gla {

struct ConfigError : std::runtime_error {
  int line = 0;  // 0 when not tied to a line
  ConfigError(const std::string& what, int line_no = 0) : std::runtime_error(what), line(line_no) {}
};

struct SystemConfig {
  std::string name = "system";
  int m = 0, r = 0;
  std::shared_ptr<const GenAlgebroid> alg;
  GhMorphism gh;
  std::vector<Expr> gamma;  // empty unless given
  std::vector<Expr> G, F;
  std::optional<Expr> f;
  std::vector<Expr> H, Htil, V, Vtil;  // empty unless any distinguished-connection key is given

  SampleSpec sample;
  double tol_symbolic = 1e-9;
  double tol_fd = 1e-6;
  double ode_dt = 1e-3;
  std::vector<double> x0, y0;
  double t1 = 1.0;

  Arity arity() const { return {m, r}; }
  MechSystem system() const { return make_system(alg, gh, G, F); }
  bool has_gamma() const { return !gamma.empty(); }
  bool has_dconn() const { return !H.empty(); }
};

// Flat "key = value" text; '#' starts a comment. Indices are 1-based.
SystemConfig parse_config(const std::string& text);
SystemConfig load_config(const std::string& path);

}  // namespace gla
