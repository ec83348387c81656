#include "algebroid/run.hpp"

#include <cmath>
#include <stdexcept>

#include "algebroid/weyl.hpp"

namespace gla {

namespace {

constexpr double kRemarkTol = 1e-10;
constexpr double kGeodesicTol = 1e-4;

SampleSet general_samples(const SystemConfig& cfg) { return draw_samples(cfg.arity(), cfg.sample); }
SampleSet fiber_samples(const SystemConfig& cfg) { return draw_samples(cfg.arity(), cfg.sample, kZeroSectionRadius); }

OdeState initial_state(const SystemConfig& cfg) {
  OdeState s;
  s.x = cfg.x0;
  s.y = cfg.y0;
  return s;
}

RunResult cmd_validate(const SystemConfig& cfg) {
  RunResult res;
  res.report = validate_axioms(*cfg.alg, &cfg.gh, general_samples(cfg), cfg.tol_symbolic);
  return res;
}

RunResult cmd_frame(const SystemConfig& cfg) {
  RunResult res;
  res.report = frame_bracket_check(working_connection(cfg), general_samples(cfg), cfg.tol_symbolic);
  return res;
}

RunResult cmd_curvature(const SystemConfig& cfg) {
  const SampleSet samples = general_samples(cfg);
  const DConnection dc = working_dconnection(cfg);
  RunResult res;
  for (const auto& c : frame_bracket_check(dc.conn(), samples, cfg.tol_symbolic).checks)
    if (c.check == "curvature R antisymmetry") res.report.add(c);
  res.report.append(torsion_curvature_oracle_check(dc, samples, cfg.tol_symbolic));
  res.report.append(curvature_family_check(dc, samples, cfg.tol_symbolic));
  return res;
}

RunResult cmd_identities(const SystemConfig& cfg) {
  const SampleSet samples = general_samples(cfg);
  const DConnection dc = working_dconnection(cfg);
  const auto probes = probe_sections(cfg.arity(), 4);
  RunResult res;
  res.report = ricci_check(dc, probes[0], samples, cfg.tol_symbolic);
  res.report.append(bianchi_check(dc, probes, samples, cfg.tol_symbolic, kRemarkTol));
  res.notices.push_back("identities of Cartan type are not evaluated (outside the scope of this engine)");
  return res;
}

RunResult cmd_spray(const SystemConfig& cfg) {
  const SampleSet samples = fiber_samples(cfg);
  const MechSystem sys = cfg.system();
  const double tol = cfg.tol_symbolic;
  RunResult res;
  res.report = spray_condition(sys, samples, tol);
  res.report.append(closure_check(sys, samples, tol));
  res.report.append(projector_oracle_check(sys, samples, tol));
  res.report.append(liouville_transport_check(sys, samples, tol));
  res.report.append(homogeneity_check(sys, samples, tol));
  res.report.append(spray_mixed_curvature_check(sys, samples, tol));
  std::vector<Expr> fs;
  Expr sum(0.0);
  for (int a = 0; a < cfg.r; ++a) {
    sum += (0.5 + a) * Expr::y(a);
    fs.push_back(Expr::y(a));
  }
  fs.push_back(sum);
  Expr norm2(0.0);
  for (int a = 0; a < cfg.r; ++a) norm2 += Expr::y(a) * Expr::y(a);
  fs.push_back(sqrt(norm2));
  for (const Expr& f : fs) res.report.append(hessian_lemma_check(f, cfg.r, samples, tol));
  if (cfg.f) {
    Report hom = homog1_check(*cfg.f, samples, tol);
    res.report.append(hom);
    if (!hom.any_failed()) res.report.append(hessian_lemma_check(*cfg.f, cfg.r, samples, tol));
  }
  return res;
}

RunResult cmd_geodesic(const SystemConfig& cfg) {
  const MechSystem sys = cfg.system();
  const OdeState s0 = initial_state(cfg);
  RunResult res;
  Trajectory traj = integrate(sys, s0, cfg.t1, cfg.ode_dt);
  traj.system = cfg.name;
  Trajectory half = integrate(sys, s0, cfg.t1, 0.5 * cfg.ode_dt);

  CheckResult run;
  run.check = "geodesic integration";
  run.anchor = "geodesics of the mechanical system";
  run.worst_point = FiberPoint{s0.x, s0.y};
  if (!traj.ok()) {
    run.status = Status::Fail;
    run.note = traj.error;
  } else if (half.ok()) {
    // step-halving estimate of the endpoint error
    double e = 0.0;
    const auto& a = traj.states.back();
    const auto& b = half.states.back();
    for (std::size_t i = 0; i < a.x.size(); ++i) e = std::max(e, std::abs(a.x[i] - b.x[i]));
    for (std::size_t i = 0; i < a.y.size(); ++i) e = std::max(e, std::abs(a.y[i] - b.y[i]));
    run.max_residual = e;
    run.status = e <= cfg.tol_fd ? Status::Pass : Status::Fail;
    run.note = "endpoint change when the step is halved";
  }
  res.report.add(run);
  res.report.append(rk4_order_check());
  if (traj.ok()) {
    std::vector<double> u0 = cfg.y0;
    res.report.append(parallel_lift_check(working_connection(cfg), cfg.gh, traj, u0, 1e-7));
    if (is_spray(sys, fiber_samples(cfg), cfg.tol_symbolic))
      res.report.append(rescaling_check(sys, s0, cfg.t1, cfg.ode_dt, 2.0, 1e-5));
  }
  res.trajectory = std::move(traj);
  return res;
}

RunResult cmd_weyl(const SystemConfig& cfg) {
  RunResult res;
  if (!cfg.f) throw ConfigError("the weyl command needs a projective factor 'f'");
  const SampleSet samples = fiber_samples(cfg);
  const MechSystem sys = cfg.system();
  const double tol = cfg.tol_symbolic;
  ProjChange pc;
  try {
    pc = make_projective_change(sys, *cfg.f, samples, tol);
  } catch (const ProjectiveChangeError& e) {
    res.report = e.report;
    res.notices.push_back(e.what());
    return res;
  }
  res.report = projector_change_check(pc, samples, tol);
  const auto probes = probe_sections(cfg.arity(), 3);
  res.report.append(berwald_relation_check(pc, probes[0], probes[1], samples, tol));
  res.report.append(mixed_curvature_change_check(pc, probes[0], probes[1], probes[2], samples, tol));
  res.report.append(geodesic_equivalence_check(pc, initial_state(cfg), cfg.t1, cfg.ode_dt, kGeodesicTol));
  FactorRecovery fr = projective_factor(pc.base, pc.changed, samples);
  res.report.append(fr.report);
  // recovered values against the configured factor
  const auto expected = evaluate_all(std::vector<Expr>{pc.f}, samples);
  Residual r;
  for (std::size_t p = 0; p < fr.f.size(); ++p) {
    if (std::isnan(fr.f[p])) continue;
    const double d = std::abs(fr.f[p] - expected[0][p]);
    if (d > r.max_abs) r = Residual{d, p, {}};
  }
  res.report.add(judge("projective factor: round trip", "recovery of the projective factor", r, samples, 1e-8));
  return res;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "frame", "curvature", "identities",
                                              "spray",    "geodesic", "weyl"};
  return names;
}

NlConnection working_connection(const SystemConfig& cfg) {
  if (cfg.has_gamma()) return NlConnection(cfg.alg, cfg.gamma);
  return canonical_connection(cfg.system());
}

DConnection working_dconnection(const SystemConfig& cfg) {
  NlConnection conn = working_connection(cfg);
  if (cfg.has_dconn()) return DConnection(conn, cfg.H, cfg.Htil, cfg.V, cfg.Vtil);
  return DConnection::berwald(conn);
}

RunResult run_command(const std::string& command, SystemConfig cfg, const RunOptions& opts) {
  if (opts.seed) cfg.sample.seed = *opts.seed;
  if (opts.tol) cfg.tol_symbolic = *opts.tol;
  if (opts.dt) {
    if (!(*opts.dt > 0.0)) throw ConfigError("--dt must be positive");
    cfg.ode_dt = *opts.dt;
  }
  if (command == "validate") return cmd_validate(cfg);
  if (command == "frame") return cmd_frame(cfg);
  if (command == "curvature") return cmd_curvature(cfg);
  if (command == "identities") return cmd_identities(cfg);
  if (command == "spray") return cmd_spray(cfg);
  if (command == "geodesic") return cmd_geodesic(cfg);
  if (command == "weyl") return cmd_weyl(cfg);
  throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace gla
