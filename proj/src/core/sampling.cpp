#include "algebroid/sampling.hpp"

#include <cmath>
#include <random>

#include "algebroid/tape.hpp"

namespace gla {

SampleSet::SampleSet(Arity arity, std::vector<double> columns, std::size_t n)
    : arity_(arity), cols_(std::move(columns)), n_(n) {}

FiberPoint SampleSet::point(std::size_t k) const {
  FiberPoint p;
  for (int i = 0; i < arity_.m; ++i) p.x.push_back(cols_[static_cast<std::size_t>(i) * n_ + k]);
  for (int a = 0; a < arity_.r; ++a)
    p.y.push_back(cols_[static_cast<std::size_t>(arity_.m + a) * n_ + k]);
  return p;
}

double SampleSet::fiber_norm(std::size_t k) const {
  double s = 0.0;
  for (int a = 0; a < arity_.r; ++a) {
    double v = cols_[static_cast<std::size_t>(arity_.m + a) * n_ + k];
    s += v * v;
  }
  return std::sqrt(s);
}

SampleSet draw_samples(Arity arity, const SampleSpec& spec, double min_fiber_norm) {
  std::mt19937_64 rng(spec.seed);
  // explicit 53-bit mapping keeps the draws identical across standard libraries
  auto uniform = [&] {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return spec.lo + (spec.hi - spec.lo) * u;
  };
  const std::size_t n = static_cast<std::size_t>(std::max(spec.count, 0));
  std::vector<FiberPoint> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    FiberPoint p;
    for (int i = 0; i < arity.m; ++i) p.x.push_back(uniform());
    double norm2 = 0.0;
    for (int a = 0; a < arity.r; ++a) {
      p.y.push_back(uniform());
      norm2 += p.y.back() * p.y.back();
    }
    if (arity.r > 0 && min_fiber_norm > 0.0 && std::sqrt(norm2) < min_fiber_norm) continue;
    pts.push_back(std::move(p));
  }
  return samples_from_points(arity, pts);
}

SampleSet samples_from_points(Arity arity, std::span<const FiberPoint> pts) {
  const std::size_t n = pts.size();
  std::vector<double> cols(static_cast<std::size_t>(arity.total()) * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = 0; i < arity.m; ++i) cols[static_cast<std::size_t>(i) * n + k] = pts[k].x[static_cast<std::size_t>(i)];
    for (int a = 0; a < arity.r; ++a)
      cols[static_cast<std::size_t>(arity.m + a) * n + k] = pts[k].y[static_cast<std::size_t>(a)];
  }
  return SampleSet(arity, std::move(cols), n);
}

std::vector<std::vector<double>> evaluate_all(std::span<const Expr> exprs, const SampleSet& samples) {
  Tape tape = Tape::compile(exprs, samples.arity());
  const std::size_t n = samples.size();
  std::vector<double> out(exprs.size() * n);
  tape.eval_batch(samples.columns(), n, out);
  std::vector<std::vector<double>> res(exprs.size());
  for (std::size_t k = 0; k < exprs.size(); ++k)
    res[k].assign(out.begin() + static_cast<std::ptrdiff_t>(k * n),
                  out.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
  return res;
}

Residual max_residual(std::span<const Expr> exprs, const SampleSet& samples) {
  Residual r;
  if (exprs.empty() || samples.size() == 0) return r;
  try {
    auto vals = evaluate_all(exprs, samples);
    for (const auto& row : vals) {
      for (std::size_t p = 0; p < row.size(); ++p) {
        double v = std::abs(row[p]);
        if (v > r.max_abs) {
          r.max_abs = v;
          r.worst = p;
        }
      }
    }
  } catch (const DomainError& e) {
    r.error = e.what();
    r.max_abs = HUGE_VAL;
    std::string msg = e.what();
    auto pos = msg.rfind("sample ");
    if (pos != std::string::npos) r.worst = std::stoul(msg.substr(pos + 7));
  }
  return r;
}

}  // namespace gla
