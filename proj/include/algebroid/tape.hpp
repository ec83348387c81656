#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "algebroid/expr.hpp"

namespace gla {

struct TapeInstr {
  Op op;
  std::int32_t a = -1;  // operand slot, or variable slot for Op::Var
  std::int32_t b = -1;
  std::int32_t n = 0;   // integer exponent
  double c = 0.0;       // constant
};

enum class Isa { Scalar, Avx2, Neon };
const char* isa_name(Isa isa);

// Best kernel for this CPU, overridable with ALGEBROID_SIMD=scalar|avx2|neon.
Isa active_isa();
bool isa_available(Isa isa);

// Flat register program for a vector of expressions with common subexpressions merged.
class Tape {
 public:
  Tape() = default;
  static Tape compile(std::span<const Expr> outputs, Arity arity);

  Arity arity() const { return arity_; }
  std::size_t num_outputs() const { return outputs_.size(); }
  std::size_t size() const { return code_.size(); }
  const std::vector<TapeInstr>& code() const { return code_; }
  const std::vector<std::int32_t>& outputs() const { return outputs_; }

  // vars: x then y; out: num_outputs values. Throws DomainError.
  void eval(std::span<const double> vars, std::span<double> out) const;

  // Structure-of-arrays batch: vars[v * n + p], out[k * n + p]. Throws DomainError naming the point.
  void eval_batch(std::span<const double> vars, std::size_t n, std::span<double> out,
                  Isa isa) const;
  void eval_batch(std::span<const double> vars, std::size_t n, std::span<double> out) const {
    eval_batch(vars, n, out, active_isa());
  }

 private:
  Arity arity_;
  std::vector<TapeInstr> code_;
  std::vector<std::int32_t> outputs_;
};

namespace kernel {

enum class Fault : std::uint8_t { None, DivZero, LogDomain, SqrtDomain, PowZero, NonFinite };

struct Status {
  Fault fault = Fault::None;
  std::size_t point = 0;
};

struct Program {
  const TapeInstr* code;
  std::size_t len;
  const std::int32_t* outputs;
  std::size_t num_outputs;
};

Status run_scalar(const Program& prog, const double* vars, std::size_t n, std::size_t begin,
                  std::size_t end, double* out);
Status run_avx2(const Program& prog, const double* vars, std::size_t n, double* out);
Status run_neon(const Program& prog, const double* vars, std::size_t n, double* out);
bool avx2_compiled();
bool neon_compiled();

const char* fault_message(Fault f);

}  // namespace kernel

}  // namespace gla
