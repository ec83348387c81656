#include "algebroid/tape.hpp"

#include <bit>
#include <cstdlib>
#include <cstring>
#include <unordered_map>

namespace gla {

namespace {

struct Key {
  Op op;
  std::int32_t a, b, n;
  std::uint64_t c;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.op) * 0x9E3779B97F4A7C15ULL;
    auto mix = [&](std::uint64_t v) {
      h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    };
    mix(static_cast<std::uint32_t>(k.a));
    mix(static_cast<std::uint32_t>(k.b));
    mix(static_cast<std::uint32_t>(k.n));
    mix(k.c);
    return static_cast<std::size_t>(h);
  }
};

class Compiler {
 public:
  explicit Compiler(Arity arity) : arity_(arity) {}

  std::int32_t emit(const Expr& e) {
    if (auto it = by_node_.find(e.id()); it != by_node_.end()) return it->second;
    TapeInstr ins{e.op()};
    switch (e.op()) {
      case Op::Const:
        ins.c = e.value();
        break;
      case Op::Var: {
        int limit = e.var_kind() == VarKind::Base ? arity_.m : arity_.r;
        if (e.var_index() < 0 || e.var_index() >= limit)
          throw ArityError("tape: variable outside arity");
        ins.a = e.var_kind() == VarKind::Base ? e.var_index() : arity_.m + e.var_index();
        break;
      }
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
        ins.a = emit(e.arg(0));
        ins.b = emit(e.arg(1));
        break;
      case Op::Pow:
        ins.a = emit(e.arg(0));
        ins.n = e.exponent();
        break;
      default:
        ins.a = emit(e.arg(0));
        break;
    }
    Key key{ins.op, ins.a, ins.b, ins.n, std::bit_cast<std::uint64_t>(ins.c)};
    auto [it, fresh] = by_key_.try_emplace(key, static_cast<std::int32_t>(code_.size()));
    if (fresh) code_.push_back(ins);
    by_node_.emplace(e.id(), it->second);
    return it->second;
  }

  std::vector<TapeInstr> take() { return std::move(code_); }

 private:
  Arity arity_;
  std::vector<TapeInstr> code_;
  std::unordered_map<const Node*, std::int32_t> by_node_;
  std::unordered_map<Key, std::int32_t, KeyHash> by_key_;
};

Isa detect_isa() {
  if (const char* env = std::getenv("ALGEBROID_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    if (std::strcmp(env, "avx2") == 0 && isa_available(Isa::Avx2)) return Isa::Avx2;
    if (std::strcmp(env, "neon") == 0 && isa_available(Isa::Neon)) return Isa::Neon;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

[[noreturn]] void raise(const kernel::Status& st) {
  throw DomainError(std::string(kernel::fault_message(st.fault)) + " at sample " +
                    std::to_string(st.point));
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    default: return "scalar";
  }
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return kernel::avx2_compiled() && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
      return kernel::neon_compiled();
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = detect_isa();
  return isa;
}

Tape Tape::compile(std::span<const Expr> outputs, Arity arity) {
  Compiler c(arity);
  Tape t;
  t.arity_ = arity;
  t.outputs_.reserve(outputs.size());
  for (const Expr& e : outputs) t.outputs_.push_back(c.emit(e));
  t.code_ = c.take();
  return t;
}

void Tape::eval(std::span<const double> vars, std::span<double> out) const {
  if (vars.size() != static_cast<std::size_t>(arity_.total()))
    throw ArityError("tape eval: expected " + std::to_string(arity_.total()) + " variables");
  if (out.size() != outputs_.size()) throw ArityError("tape eval: output size mismatch");
  kernel::Program prog{code_.data(), code_.size(), outputs_.data(), outputs_.size()};
  auto st = kernel::run_scalar(prog, vars.data(), 1, 0, 1, out.data());
  if (st.fault != kernel::Fault::None) {
    throw DomainError(kernel::fault_message(st.fault));
  }
}

void Tape::eval_batch(std::span<const double> vars, std::size_t n, std::span<double> out,
                      Isa isa) const {
  if (vars.size() != static_cast<std::size_t>(arity_.total()) * n)
    throw ArityError("tape batch: variable block has wrong size");
  if (out.size() != outputs_.size() * n) throw ArityError("tape batch: output block has wrong size");
  if (n == 0) return;
  kernel::Program prog{code_.data(), code_.size(), outputs_.data(), outputs_.size()};
  kernel::Status st;
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) st = kernel::run_avx2(prog, vars.data(), n, out.data());
  else if (isa == Isa::Neon && isa_available(Isa::Neon)) st = kernel::run_neon(prog, vars.data(), n, out.data());
  else st = kernel::run_scalar(prog, vars.data(), n, 0, n, out.data());
  if (st.fault != kernel::Fault::None) raise(st);
}

}  // namespace gla
