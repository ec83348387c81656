#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "algebroid/expr.hpp"

namespace gla {

struct SampleSpec {
  double lo = -1.0;
  double hi = 1.0;
  int count = 100;
  std::uint64_t seed = 42;
};

// Points stored column-wise (x1..xm then y1..yr), ready for Tape::eval_batch.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(Arity arity, std::vector<double> columns, std::size_t n);

  Arity arity() const { return arity_; }
  std::size_t size() const { return n_; }
  std::span<const double> columns() const { return cols_; }
  FiberPoint point(std::size_t k) const;
  double fiber_norm(std::size_t k) const;

 private:
  Arity arity_;
  std::vector<double> cols_;
  std::size_t n_ = 0;
};

// Uniform draws from [lo,hi]^(m+r); points with |y| < min_fiber_norm are redrawn.
SampleSet draw_samples(Arity arity, const SampleSpec& spec, double min_fiber_norm = 0.0);
SampleSet samples_from_points(Arity arity, std::span<const FiberPoint> pts);

// Homogeneity checks stay away from the zero section.
inline constexpr double kZeroSectionRadius = 0.1;

struct Residual {
  double max_abs = 0.0;
  std::size_t worst = 0;
  std::string error;  // non-empty when evaluation hit a domain error
  bool ok() const { return error.empty(); }
};

// Largest |e(p)| over every expression and sample.
Residual max_residual(std::span<const Expr> exprs, const SampleSet& samples);

// Values of each expression at each sample: out[k][p].
std::vector<std::vector<double>> evaluate_all(std::span<const Expr> exprs, const SampleSet& samples);

}  // namespace gla
