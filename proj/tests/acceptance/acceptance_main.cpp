// One line per acceptance criterion; exit status is non-zero when any criterion fails.
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "algebroid/run.hpp"
#include "algebroid/weyl.hpp"
#include "random_expr.hpp"

using namespace gla;

namespace {

SystemConfig bundled(const std::string& name) {
  return load_config(std::string(ALGEBROID_CONFIG_DIR) + "/" + name + ".cfg");
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

double worst_of(const Report& rep, bool skip_printed = false) {
  double w = 0.0;
  for (const auto& c : rep.checks) {
    if (skip_printed && c.check.find("printed") != std::string::npos) continue;
    w = std::max(w, c.max_residual);
  }
  return w;
}

bool all_pass(const Report& rep, bool skip_printed = false) {
  for (const auto& c : rep.checks) {
    if (skip_printed && c.check.find("printed") != std::string::npos) continue;
    if (c.status != Status::Pass) return false;
  }
  return !rep.checks.empty();
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome classical_reduction() {
  SystemConfig cfg = bundled("flat");
  SampleSet s = draw_samples(cfg.arity(), cfg.sample);
  NlConnection conn = working_connection(cfg);
  double curv = max_residual(curvature_R(conn), s).max_abs;
  CurvatureComponents K = curvature_components(DConnection::berwald(conn));
  for (const auto* fam : {&K.R, &K.Rtil, &K.P, &K.Ptil, &K.S, &K.Stil})
    curv = std::max(curv, max_residual(*fam, s).max_abs);
  Trajectory tr = integrate(cfg.system(), OdeState{0.0, cfg.x0, cfg.y0}, cfg.t1, 1e-3);
  double end = tr.ok() ? 0.0 : INFINITY;
  if (tr.ok())
    for (std::size_t i = 0; i < cfg.x0.size(); ++i)
      end = std::max(end, std::abs(tr.states.back().x[i] - (cfg.x0[i] + cfg.y0[i] * cfg.t1)));
  return {curv == 0.0 && end < 1e-10, fmt("curvature max %.3g", curv) + fmt(", endpoint error %.3g", end)};
}

Outcome frame_bracket() {
  SystemConfig cfg = bundled("nontrivial");
  Report rep = frame_bracket_check(NlConnection(cfg.alg, cfg.gamma), draw_samples(cfg.arity(), cfg.sample), 1e-9);
  return {all_pass(rep) && cfg.sample.count == 100, fmt("max residual %.3g on 100 points", worst_of(rep))};
}

Outcome operator_equivalence() {
  SystemConfig cfg = bundled("nontrivial");
  SampleSet s = draw_samples(cfg.arity(), cfg.sample);
  Report rep = torsion_curvature_oracle_check(working_dconnection(cfg), s, 1e-8);
  rep.append(torsion_curvature_oracle_check(DConnection::berwald(working_connection(cfg)), s, 1e-8));
  return {all_pass(rep), fmt("max residual %.3g over 5 torsion and 6 curvature families", worst_of(rep))};
}

Outcome ricci_bianchi() {
  SystemConfig cfg = bundled("quadratic_spray");
  SampleSet s = draw_samples(cfg.arity(), cfg.sample);
  DConnection dc = working_dconnection(cfg);
  auto probes = probe_sections(cfg.arity(), 4);
  Report rep = ricci_check(dc, probes[0], s, 1e-7);
  rep.append(bianchi_check(dc, probes, s, 1e-7, 1e-10));
  int flags = 0;
  double remark = 0.0;
  for (const auto& c : rep.checks) {
    if (c.status == Status::MismatchFlag) ++flags;
    if (c.check.find("curvature preserves") != std::string::npos) remark = c.max_residual;
  }
  return {dc.normal() && all_pass(rep, true),
          fmt("max residual %.3g", worst_of(rep, true)) + fmt(", splitting remark %.3g", remark) +
              ", printed readings flagged: " + std::to_string(flags)};
}

Outcome spray_calculus() {
  SystemConfig cfg = bundled("quadratic_spray");
  MechSystem sys = cfg.system();
  SampleSet s = draw_samples(cfg.arity(), cfg.sample, kZeroSectionRadius);
  Report cond = spray_condition(sys, s, 1e-12);
  Report rest = liouville_transport_check(sys, s, 1e-8);
  rest.append(homogeneity_check(sys, s, 1e-8));
  rest.append(spray_mixed_curvature_check(sys, s, 1e-8));
  return {all_pass(cond) && all_pass(rest),
          fmt("spray condition %.3g", worst_of(cond)) + fmt(", derivative/homogeneity/mixed curvature %.3g",
                                                            worst_of(rest))};
}

Outcome hessian_lemma() {
  const Arity a{2, 2};
  SampleSet s = draw_samples(a, SampleSpec{}, kZeroSectionRadius);
  Report rep;
  for (const char* f : {"y1", "y2", "2*y1 - 3*y2", "x1*y1 + exp(x2)*y2", "sin(x1 + x2)*y1 - x1^2*y2"})
    rep.append(hessian_lemma_check(parse(f, a), 2, s, 1e-9));
  return {all_pass(rep), fmt("max residual %.3g over 5 linear combinations", worst_of(rep))};
}

Outcome projector_change() {
  Report rep;
  for (const char* name : {"quadratic_spray", "nontrivial"}) {
    SystemConfig cfg = bundled(name);
    SampleSet s = draw_samples(cfg.arity(), cfg.sample, kZeroSectionRadius);
    ProjChange pc = make_projective_change(cfg.system(), *cfg.f, s, 1e-8);
    rep.append(projector_change_check(pc, s, 1e-8));
  }
  return {all_pass(rep), fmt("max residual %.3g on identity and non-identity morphisms", worst_of(rep))};
}

Outcome weyl_geodesics() {
  SystemConfig cfg = bundled("quadratic_spray");
  SampleSet s = draw_samples(cfg.arity(), cfg.sample, kZeroSectionRadius);
  ProjChange pc = make_projective_change(cfg.system(), *cfg.f, s, 1e-9);
  GeodesicComparison cmp = compare_geodesics(pc, OdeState{0.0, cfg.x0, cfg.y0}, cfg.t1, 1e-3);
  FactorRecovery fr = projective_factor(pc.base, pc.changed, s);
  double trip = 0.0;
  for (std::size_t p = 0; p < fr.f.size(); ++p)
    if (!std::isnan(fr.f[p])) trip = std::max(trip, std::abs(fr.f[p] - eval(pc.f, s.point(p))));
  const bool ok = cmp.original.ok() && cmp.changed.ok() && cmp.deviation < 1e-4 && cmp.s_increasing && trip < 1e-8;
  return {ok, fmt("path deviation %.3g", cmp.deviation) + (cmp.s_increasing ? ", s increasing" : ", s NOT increasing") +
                  fmt(", factor round trip %.3g", trip)};
}

Outcome numerics_hygiene() {
  const Arity a{2, 2};
  gla::testing::ExprGen gen(a, 2024);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    Expr e = k % 2 == 0 ? gen.polynomial(5, 4) : gen.smooth(4);
    FiberPoint p = gen.point();
    for (int v = 0; v < a.total(); ++v) {
      const bool base = v < a.m;
      const int idx = base ? v : v - a.m;
      const double d = eval(base ? dx(e, idx) : dy(e, idx), p);
      auto shifted = [&](double h) {
        FiberPoint q = p;
        (base ? q.x : q.y)[static_cast<std::size_t>(idx)] += h;
        return eval(e, q);
      };
      const double fd = (shifted(1e-6) - shifted(-1e-6)) / 2e-6;
      worst = std::max(worst, std::abs(d - fd) / std::max(1.0, std::abs(d)));
    }
  }
  const double ratio = rk4_order_ratio();
  return {worst < 1e-6 && ratio >= 12.0 && ratio <= 20.0,
          fmt("derivative relative error %.3g", worst) + fmt(", RK4 error ratio %.4g", ratio)};
}

Outcome determinism() {
  int runs = 0;
  for (const char* name : {"flat", "quadratic_spray", "nontrivial"})
    for (const std::string& cmd : command_names()) {
      SystemConfig cfg = bundled(name);
      if (to_json(run_command(cmd, cfg, {}).report) != to_json(run_command(cmd, cfg, {}).report))
        return {false, std::string("reports differ for ") + cmd + " on " + name};
      ++runs;
    }
  return {true, std::to_string(runs) + " command/config pairs byte-identical"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"classical reduction", classical_reduction},
      {"frame bracket curvature", frame_bracket},
      {"torsion/curvature operator equivalence", operator_equivalence},
      {"Ricci and Bianchi identities", ricci_bianchi},
      {"spray calculus", spray_calculus},
      {"Hessian lemma", hessian_lemma},
      {"projective change of the horizontal projector", projector_change},
      {"projectively related geodesics", weyl_geodesics},
      {"numerics hygiene", numerics_hygiene},
      {"determinism", determinism},
  };
  int failed = 0, k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", k - failed, k);
  return failed == 0 ? 0 : 1;
}
