#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "algebroid/expr.hpp"

namespace gla {

namespace {

class Parser {
 public:
  Parser(std::string_view text, Arity arity) : s_(text), arity_(arity) {}

  Expr parse_all() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  Arity arity_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = raw::binary(Op::Add, lhs, term());
      else if (accept('-')) lhs = raw::binary(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) lhs = raw::binary(Op::Mul, lhs, factor());
      else if (accept('/')) lhs = raw::binary(Op::Div, lhs, factor());
      else return lhs;
    }
  }

  Expr factor() {
    Expr b = base();
    if (accept('^')) return raw::power(b, integer());
    return b;
  }

  int integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected integer exponent");
    int v = 0;
    const char* first = s_.data() + start + (s_[start] == '+' ? 1 : 0);
    auto res = std::from_chars(first, s_.data() + pos_, v);
    if (res.ec != std::errc()) fail("exponent out of range");
    return v;
  }

  Expr base() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t d = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - d;
    };
    std::size_t nd = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || !std::isfinite(v)) {
      pos_ = start;
      fail("malformed number");
    }
    return raw::constant(v);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (name == "x" || name == "y") {
      std::size_t dstart = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (dstart == pos_) {
        pos_ = start;
        fail("variable '" + name + "' needs an index");
      }
      int idx = 0;
      auto res = std::from_chars(s_.data() + dstart, s_.data() + pos_, idx);
      int limit = name == "x" ? arity_.m : arity_.r;
      if (res.ec != std::errc() || idx < 1 || idx > limit) {
        throw ArityError("variable " + name + std::string(s_.substr(dstart, pos_ - dstart)) +
                         " outside arity (m=" + std::to_string(arity_.m) +
                         ", r=" + std::to_string(arity_.r) + ") at position " + std::to_string(start));
      }
      return Expr::var(name == "x" ? VarKind::Base : VarKind::Fiber, idx - 1);
    }
    Op op;
    if (name == "sin") op = Op::Sin;
    else if (name == "cos") op = Op::Cos;
    else if (name == "exp") op = Op::Exp;
    else if (name == "log") op = Op::Log;
    else if (name == "sqrt") op = Op::Sqrt;
    else if (name == "neg") op = Op::Neg;
    else {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    expect('(');
    Expr a = expr();
    expect(')');
    return raw::unary(op, a);
  }
};

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Pow:
      return 3;
    default:
      return 4;
  }
}

std::string number_text(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print(const Expr& e, int min_prec, std::string& out) {
  bool paren = precedence(e) < min_prec;
  if (paren) out += '(';
  switch (e.op()) {
    case Op::Const:
      if (std::signbit(e.value())) {
        out += "neg(";
        out += number_text(-e.value());
        out += ')';
      } else {
        out += number_text(e.value());
      }
      break;
    case Op::Var:
      out += e.var_kind() == VarKind::Base ? 'x' : 'y';
      out += std::to_string(e.var_index() + 1);
      break;
    case Op::Neg:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt: {
      static const char* names[] = {"", "", "neg", "sin", "cos", "exp", "log", "sqrt"};
      out += names[static_cast<int>(e.op())];
      out += '(';
      print(e.arg(0), 0, out);
      out += ')';
      break;
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      int p = precedence(e);
      print(e.arg(0), p, out);
      switch (e.op()) {
        case Op::Add: out += " + "; break;
        case Op::Sub: out += " - "; break;
        case Op::Mul: out += '*'; break;
        default: out += '/'; break;
      }
      print(e.arg(1), p + 1, out);
      break;
    }
    case Op::Pow:
      print(e.arg(0), 4, out);
      out += '^';
      out += std::to_string(e.exponent());
      break;
  }
  if (paren) out += ')';
}

}  // namespace

Expr parse(std::string_view text, Arity arity) { return Parser(text, arity).parse_all(); }

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

}  // namespace gla
