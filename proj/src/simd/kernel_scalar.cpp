#include <cmath>
#include <vector>

#include "algebroid/tape.hpp"

namespace gla::kernel {

const char* fault_message(Fault f) {
  switch (f) {
    case Fault::DivZero: return "division by zero";
    case Fault::LogDomain: return "log of non-positive value";
    case Fault::SqrtDomain: return "sqrt of negative value";
    case Fault::PowZero: return "negative power of zero";
    case Fault::NonFinite: return "non-finite result";
    default: return "no fault";
  }
}

Status run_scalar(const Program& prog, const double* vars, std::size_t n, std::size_t begin,
                  std::size_t end, double* out) {
  std::vector<double> reg(prog.len);
  for (std::size_t p = begin; p < end; ++p) {
    for (std::size_t k = 0; k < prog.len; ++k) {
      const TapeInstr& ins = prog.code[k];
      double a = ins.a >= 0 && ins.op != Op::Var ? reg[static_cast<std::size_t>(ins.a)] : 0.0;
      double v = 0.0;
      switch (ins.op) {
        case Op::Const: v = ins.c; break;
        case Op::Var: v = vars[static_cast<std::size_t>(ins.a) * n + p]; break;
        case Op::Neg: v = -a; break;
        case Op::Sin: v = std::sin(a); break;
        case Op::Cos: v = std::cos(a); break;
        case Op::Exp: v = std::exp(a); break;
        case Op::Log:
          if (!(a > 0.0)) return {Fault::LogDomain, p};
          v = std::log(a);
          break;
        case Op::Sqrt:
          if (a < 0.0) return {Fault::SqrtDomain, p};
          v = std::sqrt(a);
          break;
        case Op::Add: v = a + reg[static_cast<std::size_t>(ins.b)]; break;
        case Op::Sub: v = a - reg[static_cast<std::size_t>(ins.b)]; break;
        case Op::Mul: v = a * reg[static_cast<std::size_t>(ins.b)]; break;
        case Op::Div: {
          double b = reg[static_cast<std::size_t>(ins.b)];
          if (b == 0.0) return {Fault::DivZero, p};
          v = a / b;
          break;
        }
        case Op::Pow: {
          unsigned e = static_cast<unsigned>(ins.n < 0 ? -static_cast<long long>(ins.n) : ins.n);
          double acc = 1.0, base = a;
          while (e != 0) {
            if (e & 1U) acc *= base;
            e >>= 1U;
            if (e != 0) base *= base;
          }
          if (ins.n < 0) {
            if (acc == 0.0) return {Fault::PowZero, p};
            acc = 1.0 / acc;
          }
          v = acc;
          break;
        }
      }
      reg[k] = v;
    }
    for (std::size_t o = 0; o < prog.num_outputs; ++o) {
      double v = reg[static_cast<std::size_t>(prog.outputs[o])];
      if (!std::isfinite(v)) return {Fault::NonFinite, p};
      out[o * n + p] = v;
    }
  }
  return {};
}

}  // namespace gla::kernel
