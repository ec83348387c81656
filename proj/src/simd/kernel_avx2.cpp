#include <cmath>
#include <cstdlib>
#include <memory>

#include "algebroid/tape.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace gla::kernel {

#if defined(__AVX2__)

bool avx2_compiled() { return true; }

namespace {

struct AlignedFree {
  void operator()(double* p) const { std::free(p); }
};

template <class F>
inline __m256d lanewise(__m256d a, F f) {
  alignas(32) double t[4];
  _mm256_store_pd(t, a);
  for (double& v : t) v = f(v);
  return _mm256_load_pd(t);
}

inline bool any(__m256d mask) { return _mm256_movemask_pd(mask) != 0; }

}  // namespace

Status run_avx2(const Program& prog, const double* vars, std::size_t n, double* out) {
  const std::size_t blocks = n / 4;
  std::unique_ptr<double, AlignedFree> buf(
      static_cast<double*>(std::aligned_alloc(32, sizeof(double) * 4 * (prog.len + 1))));
  double* reg = buf.get();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d inf = _mm256_set1_pd(HUGE_VAL);

  for (std::size_t blk = 0; blk < blocks; ++blk) {
    const std::size_t p0 = blk * 4;
    bool fault = false;
    for (std::size_t k = 0; k < prog.len && !fault; ++k) {
      const TapeInstr& ins = prog.code[k];
      __m256d a = ins.op != Op::Var && ins.a >= 0 ? _mm256_load_pd(reg + 4 * ins.a) : zero;
      __m256d v = zero;
      switch (ins.op) {
        case Op::Const: v = _mm256_set1_pd(ins.c); break;
        case Op::Var: v = _mm256_loadu_pd(vars + static_cast<std::size_t>(ins.a) * n + p0); break;
        case Op::Neg: v = _mm256_xor_pd(a, _mm256_set1_pd(-0.0)); break;
        case Op::Sin: v = lanewise(a, [](double t) { return std::sin(t); }); break;
        case Op::Cos: v = lanewise(a, [](double t) { return std::cos(t); }); break;
        case Op::Exp: v = lanewise(a, [](double t) { return std::exp(t); }); break;
        case Op::Log:
          if (any(_mm256_cmp_pd(a, zero, _CMP_NGT_UQ))) fault = true;
          else v = lanewise(a, [](double t) { return std::log(t); });
          break;
        case Op::Sqrt:
          if (any(_mm256_cmp_pd(a, zero, _CMP_LT_OQ))) fault = true;
          else v = _mm256_sqrt_pd(a);
          break;
        case Op::Add: v = _mm256_add_pd(a, _mm256_load_pd(reg + 4 * ins.b)); break;
        case Op::Sub: v = _mm256_sub_pd(a, _mm256_load_pd(reg + 4 * ins.b)); break;
        case Op::Mul: v = _mm256_mul_pd(a, _mm256_load_pd(reg + 4 * ins.b)); break;
        case Op::Div: {
          __m256d b = _mm256_load_pd(reg + 4 * ins.b);
          if (any(_mm256_cmp_pd(b, zero, _CMP_EQ_OQ))) fault = true;
          else v = _mm256_div_pd(a, b);
          break;
        }
        case Op::Pow: {
          unsigned e = static_cast<unsigned>(ins.n < 0 ? -static_cast<long long>(ins.n) : ins.n);
          __m256d acc = one, base = a;
          while (e != 0) {
            if (e & 1U) acc = _mm256_mul_pd(acc, base);
            e >>= 1U;
            if (e != 0) base = _mm256_mul_pd(base, base);
          }
          if (ins.n < 0) {
            if (any(_mm256_cmp_pd(acc, zero, _CMP_EQ_OQ))) fault = true;
            else acc = _mm256_div_pd(one, acc);
          }
          v = acc;
          break;
        }
      }
      _mm256_store_pd(reg + 4 * k, v);
    }
    if (!fault) {
      for (std::size_t o = 0; o < prog.num_outputs && !fault; ++o) {
        __m256d v = _mm256_load_pd(reg + 4 * prog.outputs[o]);
        __m256d mag = _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
        if (any(_mm256_cmp_pd(mag, inf, _CMP_NLT_UQ))) fault = true;
        else _mm256_storeu_pd(out + o * n + p0, v);
      }
    }
    // re-run the faulting block in scalar so the reported sample matches the reference kernel
    if (fault) return run_scalar(prog, vars, n, p0, p0 + 4, out);
  }
  return run_scalar(prog, vars, n, blocks * 4, n, out);
}

#else

bool avx2_compiled() { return false; }
Status run_avx2(const Program& prog, const double* vars, std::size_t n, double* out) {
  return run_scalar(prog, vars, n, 0, n, out);
}

#endif

}  // namespace gla::kernel
