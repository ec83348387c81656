#include <cmath>
#include <vector>

#include "algebroid/tape.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#endif

namespace gla::kernel {

#if defined(__aarch64__) && defined(__ARM_NEON)

bool neon_compiled() { return true; }

namespace {

template <class F>
inline float64x2_t lanewise(float64x2_t a, F f) {
  double t[2];
  vst1q_f64(t, a);
  t[0] = f(t[0]);
  t[1] = f(t[1]);
  return vld1q_f64(t);
}

inline bool any(uint64x2_t m) { return (vgetq_lane_u64(m, 0) | vgetq_lane_u64(m, 1)) != 0; }
inline bool all(uint64x2_t m) { return (vgetq_lane_u64(m, 0) & vgetq_lane_u64(m, 1)) == ~0ULL; }

}  // namespace

Status run_neon(const Program& prog, const double* vars, std::size_t n, double* out) {
  const std::size_t blocks = n / 2;
  std::vector<float64x2_t> reg(prog.len);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    const std::size_t p0 = blk * 2;
    bool fault = false;
    for (std::size_t k = 0; k < prog.len && !fault; ++k) {
      const TapeInstr& ins = prog.code[k];
      float64x2_t a = ins.op != Op::Var && ins.a >= 0 ? reg[static_cast<std::size_t>(ins.a)] : zero;
      float64x2_t v = zero;
      switch (ins.op) {
        case Op::Const: v = vdupq_n_f64(ins.c); break;
        case Op::Var: v = vld1q_f64(vars + static_cast<std::size_t>(ins.a) * n + p0); break;
        case Op::Neg: v = vnegq_f64(a); break;
        case Op::Sin: v = lanewise(a, [](double t) { return std::sin(t); }); break;
        case Op::Cos: v = lanewise(a, [](double t) { return std::cos(t); }); break;
        case Op::Exp: v = lanewise(a, [](double t) { return std::exp(t); }); break;
        case Op::Log:
          if (!all(vcgtq_f64(a, zero))) fault = true;
          else v = lanewise(a, [](double t) { return std::log(t); });
          break;
        case Op::Sqrt:
          if (any(vcltq_f64(a, zero))) fault = true;
          else v = vsqrtq_f64(a);
          break;
        case Op::Add: v = vaddq_f64(a, reg[static_cast<std::size_t>(ins.b)]); break;
        case Op::Sub: v = vsubq_f64(a, reg[static_cast<std::size_t>(ins.b)]); break;
        case Op::Mul: v = vmulq_f64(a, reg[static_cast<std::size_t>(ins.b)]); break;
        case Op::Div: {
          float64x2_t b = reg[static_cast<std::size_t>(ins.b)];
          if (any(vceqq_f64(b, zero))) fault = true;
          else v = vdivq_f64(a, b);
          break;
        }
        case Op::Pow: {
          unsigned e = static_cast<unsigned>(ins.n < 0 ? -static_cast<long long>(ins.n) : ins.n);
          float64x2_t acc = one, base = a;
          while (e != 0) {
            if (e & 1U) acc = vmulq_f64(acc, base);
            e >>= 1U;
            if (e != 0) base = vmulq_f64(base, base);
          }
          if (ins.n < 0) {
            if (any(vceqq_f64(acc, zero))) fault = true;
            else acc = vdivq_f64(one, acc);
          }
          v = acc;
          break;
        }
      }
      reg[k] = v;
    }
    if (!fault) {
      for (std::size_t o = 0; o < prog.num_outputs && !fault; ++o) {
        float64x2_t v = reg[static_cast<std::size_t>(prog.outputs[o])];
        double t[2];
        vst1q_f64(t, v);
        if (!std::isfinite(t[0]) || !std::isfinite(t[1])) fault = true;
        else vst1q_f64(out + o * n + p0, v);
      }
    }
    if (fault) return run_scalar(prog, vars, n, p0, p0 + 2, out);
  }
  return run_scalar(prog, vars, n, blocks * 2, n, out);
}

#else

bool neon_compiled() { return false; }
Status run_neon(const Program& prog, const double* vars, std::size_t n, double* out) {
  return run_scalar(prog, vars, n, 0, n, out);
}

#endif

}  // namespace gla::kernel
