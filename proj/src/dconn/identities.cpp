#include "algebroid/dconn.hpp"

#include <functional>

namespace gla {

namespace {

inline std::size_t at(int k) { return static_cast<std::size_t>(k); }

using Comp = std::function<Expr(int, int, int)>;  // (a, c, b) of an iterated derivative

struct RicciData {
  // iterated derivatives of one component family, all indexed (a, c, b)
  Comp hh, hv, vh, vv;  // Y_{|c|b}, Y_{|c}|_b, Y|_b_{|c}, Y|_c|_b
  std::function<Expr(int, int)> h1, v1;  // Y^a_{|e}, Y^a|_e
};

RicciData horizontal_family(const DConnection& dc, const TangentSection& Y) {
  auto base = horizontal_part(Y);
  auto yh = horizontal_derivative(dc, base);     // [a][c]
  auto yv = vertical_derivative(dc, base);       // [a][b]
  auto yhh = std::make_shared<TensorField>(horizontal_derivative(dc, yh));  // [a][c][b]
  auto yhv = std::make_shared<TensorField>(vertical_derivative(dc, yh));    // [a][c][b]
  auto yvh = std::make_shared<TensorField>(horizontal_derivative(dc, yv));  // [a][c][b]: hl then vl
  auto yvv = std::make_shared<TensorField>(vertical_derivative(dc, yv));    // [a][c][b]
  auto sh = std::make_shared<TensorField>(yh);
  auto sv = std::make_shared<TensorField>(yv);
  RicciData d;
  d.hh = [yhh](int a, int c, int b) { return (*yhh)[{a, c, b}]; };
  d.hv = [yhv](int a, int c, int b) { return (*yhv)[{a, c, b}]; };
  d.vh = [yvh](int a, int c, int b) { return (*yvh)[{a, c, b}]; };
  d.vv = [yvv](int a, int c, int b) { return (*yvv)[{a, c, b}]; };
  d.h1 = [sh](int a, int e) { return (*sh)[{a, e}]; };
  d.v1 = [sv](int a, int e) { return (*sv)[{a, e}]; };
  return d;
}

// The vertical part carries a vertical-upper index, which sits after every horizontal index.
RicciData vertical_family(const DConnection& dc, const TangentSection& Y) {
  auto base = vertical_part(Y);
  auto yh = horizontal_derivative(dc, base);  // [c][a]
  auto yv = vertical_derivative(dc, base);    // [a][b]
  auto yhh = std::make_shared<TensorField>(horizontal_derivative(dc, yh));  // [c][b][a]
  auto yhv = std::make_shared<TensorField>(vertical_derivative(dc, yh));    // [c][a][b]
  auto yvh = std::make_shared<TensorField>(horizontal_derivative(dc, yv));  // [c][a][b]
  auto yvv = std::make_shared<TensorField>(vertical_derivative(dc, yv));    // [a][c][b]
  auto sh = std::make_shared<TensorField>(yh);
  auto sv = std::make_shared<TensorField>(yv);
  RicciData d;
  d.hh = [yhh](int a, int c, int b) { return (*yhh)[{c, b, a}]; };
  d.hv = [yhv](int a, int c, int b) { return (*yhv)[{c, a, b}]; };
  d.vh = [yvh](int a, int c, int b) { return (*yvh)[{c, a, b}]; };
  d.vv = [yvv](int a, int c, int b) { return (*yvv)[{a, c, b}]; };
  d.h1 = [sh](int a, int e) { return (*sh)[{e, a}]; };
  d.v1 = [sv](int a, int e) { return (*sv)[{a, e}]; };
  return d;
}

}  // namespace

Report ricci_check(const DConnection& dc, const TangentSection& Y, const SampleSet& samples, double tol) {
  const int r = dc.r();
  const auto Tc = torsion_components(dc);
  const auto Kc = curvature_components(dc);
  const auto Talt = torsion_T_alt_sign(dc);
  auto i3 = [r](int a, int b, int c) { return at((a * r + b) * r + c); };
  auto i4 = [r](int a, int b, int c, int d) { return at(((a * r + b) * r + c) * r + d); };

  Report rep;
  for (int fam = 0; fam < 2; ++fam) {
    const bool vert = fam == 1;
    const RicciData d = vert ? vertical_family(dc, Y) : horizontal_family(dc, Y);
    const std::vector<Expr>& Ycomp = vert ? Y.v : Y.h;
    const std::vector<Expr>& Rf = vert ? Kc.Rtil : Kc.R;
    const std::vector<Expr>& Pf = vert ? Kc.Ptil : Kc.P;
    const std::vector<Expr>& Sf = vert ? Kc.Stil : Kc.S;
    std::vector<Expr> l1, l1p, l2, l2p, l3;
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c) {
          Expr lhs1 = d.hh(a, c, b) - d.hh(a, b, c);
          Expr lhs2 = d.hv(a, c, b) - d.vh(a, c, b);
          Expr lhs3 = d.vv(a, c, b) - d.vv(a, b, c);
          Expr rhs1(0.0), rhs1p(0.0), rhs2(0.0), rhs2p(0.0), rhs3(0.0);
          for (int e = 0; e < r; ++e) {
            const Expr& ye = Ycomp[at(e)];
            Expr yh = d.h1(a, e), yv = d.v1(a, e);
            Expr curv_part = Rf[i4(a, e, c, b)] * ye;
            rhs1 += curv_part + Tc.Ttil[i3(e, b, c)] * yv + Tc.T[i3(e, b, c)] * yh;
            rhs1p += curv_part + dc.conn().alg().L_h(e, b, c) * yh + Tc.Ttil[i3(e, b, c)] * yv +
                     Talt[i3(e, b, c)] * yh;
            Expr mixed = Pf[i4(a, e, c, b)] * ye - Tc.Ptil[i3(e, c, b)] * yv;
            rhs2 += mixed - dc.V(e, c, b) * yh;
            rhs2p += mixed - (vert ? dc.Htil(e, b, c) : dc.H(e, b, c)) * yv;
            rhs3 += Sf[i4(a, e, c, b)] * ye + Tc.S[i3(e, b, c)] * yv;
          }
          l1.push_back(lhs1 - rhs1);
          l1p.push_back(lhs1 - rhs1p);
          l2.push_back(lhs2 - rhs2);
          l2p.push_back(lhs2 - rhs2p);
          l3.push_back(lhs3 - rhs3);
        }
    const std::string who = vert ? "vertical part" : "horizontal part";
    const std::string anchor = "Ricci-type commutation formulas, " + who;
    rep.add(judge("ricci " + who + ": horizontal-horizontal", anchor, max_residual(l1, samples), samples, tol));
    rep.add(judge("ricci " + who + ": horizontal-vertical", anchor, max_residual(l2, samples), samples, tol));
    rep.add(judge("ricci " + who + ": vertical-vertical", anchor, max_residual(l3, samples), samples, tol));
    rep.add(judge_flag("ricci " + who + ": horizontal-horizontal, printed structure-function term",
                       anchor + " (printed reading)", max_residual(l1p, samples), samples, tol));
    rep.add(judge_flag("ricci " + who + ": horizontal-vertical, printed connection term",
                       anchor + " (printed reading)", max_residual(l2p, samples), samples, tol));
  }
  return rep;
}

namespace {

void push_section(std::vector<Expr>& h, std::vector<Expr>& v, const TangentSection& s) {
  h.insert(h.end(), s.h.begin(), s.h.end());
  v.insert(v.end(), s.v.begin(), s.v.end());
}

}  // namespace

Report bianchi_check(const DConnection& dc, const std::vector<TangentSection>& probes,
                     const SampleSet& samples, double tol, double remark_tol) {
  const int r = dc.r(), n = 2 * r;
  const FrameTables tab = frame_tables(dc);
  auto D = [&](const TangentSection& X, const TangentSection& Y) { return cov_deriv(dc, X, Y); };
  auto T = [&](const TangentSection& X, const TangentSection& Y) { return tab.torsion(X, Y); };
  auto R = [&](const TangentSection& X, const TangentSection& Y, const TangentSection& Z) {
    return tab.curvature(X, Y, Z);
  };

  auto first = [&](const TangentSection& X, const TangentSection& Y, const TangentSection& Z) {
    TangentSection dT = D(X, T(Y, Z)) - T(D(X, Y), Z) - T(Y, D(X, Z));
    return dT - R(X, Y, Z) + T(T(X, Y), Z);
  };
  auto first_literal = [&](const TangentSection& X, const TangentSection& Y, const TangentSection& Z) {
    return D(X, T(Y, Z)) - R(X, Y, Z) + T(T(X, Y), Z);
  };
  auto second = [&](const TangentSection& X, const TangentSection& Y, const TangentSection& Z,
                    const TangentSection& U) {
    TangentSection dR = D(X, R(Y, Z, U)) - R(D(X, Y), Z, U) - R(Y, D(X, Z), U) - R(Y, Z, D(X, U));
    return dR + R(T(X, Y), Z, U);
  };
  auto second_literal = [&](const TangentSection& X, const TangentSection& Y, const TangentSection& Z,
                            const TangentSection& U) { return D(X, R(Y, Z, U)) - R(T(X, Y), Z, U); };

  std::vector<Expr> f1h, f1v, f1lh, f1lv, f2h, f2v, f2lh, f2lv;
  auto add_triple = [&](const TangentSection& X, const TangentSection& Y, const TangentSection& Z) {
    push_section(f1h, f1v, first(X, Y, Z) + first(Y, Z, X) + first(Z, X, Y));
    push_section(f1lh, f1lv, first_literal(X, Y, Z) + first_literal(Y, Z, X) + first_literal(Z, X, Y));
  };
  auto add_quad = [&](const TangentSection& X, const TangentSection& Y, const TangentSection& Z,
                      const TangentSection& U) {
    push_section(f2h, f2v, second(X, Y, Z, U) + second(Y, Z, X, U) + second(Z, X, Y, U));
    push_section(f2lh, f2lv, second_literal(X, Y, Z, U) + second_literal(Y, Z, U, X) +
                                 second_literal(Z, U, X, Y) + second_literal(U, X, Y, Z));
  };

  std::vector<TangentSection> E;
  for (int k = 0; k < n; ++k) E.push_back(frame_section(r, k));
  // cyclic sums are invariant under rotation, so i <= j, k suffices up to rotation
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (j < i || k < i) continue;
        add_triple(E[at(i)], E[at(j)], E[at(k)]);
        for (int u = 0; u < n; ++u) add_quad(E[at(i)], E[at(j)], E[at(k)], E[at(u)]);
      }
  if (probes.size() >= 3) {
    const auto& U = probes.size() > 3 ? probes[3] : probes[0];
    add_triple(probes[0], probes[1], probes[2]);
    add_quad(probes[0], probes[1], probes[2], U);
  }

  // curvature preserves the horizontal/vertical splitting
  std::vector<Expr> rem;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const TangentSection& s = tab.curvature_table[at((i * n + j) * n + k)];
        const std::vector<Expr>& off = k < r ? s.v : s.h;
        rem.insert(rem.end(), off.begin(), off.end());
      }
  if (!probes.empty()) {
    const auto& X = probes[0];
    const auto& Y = probes.size() > 1 ? probes[1] : probes[0];
    const auto& Z = probes.size() > 2 ? probes[2] : probes[0];
    auto rh = R(X, Y, apply_H(Z));
    rem.insert(rem.end(), rh.v.begin(), rh.v.end());
    auto rv = R(X, Y, apply_V(Z));
    rem.insert(rem.end(), rv.h.begin(), rv.h.end());
    auto drh = D(X, R(Y, Z, apply_H(X)));
    rem.insert(rem.end(), drh.v.begin(), drh.v.end());
  }

  Report rep;
  const std::string a1 = "first identity of Bianchi type";
  const std::string a2 = "second identity of Bianchi type";
  rep.add(judge("bianchi first, horizontal", a1, max_residual(f1h, samples), samples, tol));
  rep.add(judge("bianchi first, vertical", a1, max_residual(f1v, samples), samples, tol));
  rep.add(judge("bianchi second, horizontal", a2, max_residual(f2h, samples), samples, tol));
  rep.add(judge("bianchi second, vertical", a2, max_residual(f2v, samples), samples, tol));
  rep.add(judge_flag("bianchi first, horizontal, printed derivative of torsion value", a1 + " (printed reading)",
                     max_residual(f1lh, samples), samples, tol));
  rep.add(judge_flag("bianchi first, vertical, printed derivative of torsion value", a1 + " (printed reading)",
                     max_residual(f1lv, samples), samples, tol));
  rep.add(judge_flag("bianchi second, horizontal, printed four-term cycle", a2 + " (printed reading)",
                     max_residual(f2lh, samples), samples, tol));
  rep.add(judge_flag("bianchi second, vertical, printed four-term cycle", a2 + " (printed reading)",
                     max_residual(f2lv, samples), samples, tol));
  rep.add(judge("curvature preserves horizontal and vertical parts", "curvature splitting remark",
                max_residual(rem, samples), samples, remark_tol));
  return rep;
}

}  // namespace gla
