#include <doctest.h>

#include <bit>
#include <cmath>

#include "algebroid/tape.hpp"
#include "random_expr.hpp"

using namespace gla;

namespace {

std::vector<double> random_block(testing::ExprGen& gen, Arity a, std::size_t n) {
  std::vector<double> vars(static_cast<std::size_t>(a.total()) * n);
  for (double& v : vars) v = gen.coeff() * 0.5;
  return vars;
}

}  // namespace

TEST_CASE("tape merges repeated subexpressions") {
  Arity a{2, 0};
  Expr s = sin(Expr::x(0) * Expr::x(1));
  Expr s2 = sin(Expr::x(0) * Expr::x(1));
  std::vector<Expr> outs{s + s2, s * s2};
  Tape t = Tape::compile(outs, a);
  CHECK(t.size() == 6);  // x1, x2, mul, sin, add, mul
}

TEST_CASE("batch kernels match the scalar reference bit for bit") {
  Arity a{3, 3};
  testing::ExprGen gen(a, 99);
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (!isa_available(isa)) {
      MESSAGE(std::string(isa_name(isa)) << " kernel not available on this machine");
      continue;
    }
    for (int k = 0; k < 40; ++k) {
      std::vector<Expr> outs;
      for (int o = 0; o < 4; ++o) outs.push_back(gen.smooth(5));
      outs.push_back(dy(outs[0], 1));
      Tape t = Tape::compile(outs, a);
      for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 101u}) {
        auto vars = random_block(gen, a, n);
        std::vector<double> ref(outs.size() * n), simd(outs.size() * n);
        t.eval_batch(vars, n, ref, Isa::Scalar);
        t.eval_batch(vars, n, simd, isa);
        bool same = true;
        for (std::size_t i = 0; i < ref.size(); ++i)
          same = same && std::bit_cast<std::uint64_t>(ref[i]) == std::bit_cast<std::uint64_t>(simd[i]);
        CHECK(same);
      }
    }
  }
}

TEST_CASE("batch evaluation agrees with single-point evaluation") {
  Arity a{2, 2};
  testing::ExprGen gen(a, 5);
  Expr e = gen.smooth(5);
  Tape t = Tape::compile(std::span<const Expr>(&e, 1), a);
  const std::size_t n = 33;
  auto vars = random_block(gen, a, n);
  std::vector<double> out(n);
  t.eval_batch(vars, n, out);
  for (std::size_t p = 0; p < n; ++p) {
    FiberPoint fp{{vars[0 * n + p], vars[1 * n + p]}, {vars[2 * n + p], vars[3 * n + p]}};
    CHECK(out[p] == eval(e, fp));
  }
}

TEST_CASE("every kernel reports the same faulting sample") {
  Arity a{1, 0};
  struct Case {
    const char* text;
    const char* what;
  };
  for (Case c : {Case{"1/x1", "division"}, Case{"log(x1)", "log"}, Case{"sqrt(x1)", "sqrt"},
                 Case{"x1^-3", "negative power"}, Case{"exp(1000*x1)", "non-finite"}}) {
    Expr e = parse(c.text, a);
    Tape t = Tape::compile(std::span<const Expr>(&e, 1), a);
    const std::size_t n = 11;
    std::vector<double> vars(n, 0.5);
    vars[6] = c.what[0] == 'n' && c.what[1] == 'o' ? 1.0 : (c.what[0] == 'l' || c.what[0] == 's' ? -1.0 : 0.0);
    std::vector<double> out(n);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (!isa_available(isa)) continue;
      try {
        t.eval_batch(vars, n, out, isa);
        FAIL("expected domain error for " << c.text);
      } catch (const DomainError& err) {
        std::string msg = err.what();
        CHECK_MESSAGE(msg.find("sample 6") != std::string::npos, msg);
        CHECK_MESSAGE(msg.find(c.what) != std::string::npos, msg);
      }
    }
  }
}

TEST_CASE("dispatch picks an available kernel") {
  CHECK(isa_available(active_isa()));
  CHECK(isa_available(Isa::Scalar));
}
