#include "algebroid/dconn.hpp"

namespace gla {

namespace {
inline std::size_t at(int k) { return static_cast<std::size_t>(k); }
}  // namespace

TangentSection frame_section(int r, int k) {
  return k < r ? horizontal_frame(r, k) : vertical_frame(r, k - r);
}

const Expr& frame_coeff(const TangentSection& X, int k) {
  const int r = static_cast<int>(X.h.size());
  return k < r ? X.h[at(k)] : X.v[at(k - r)];
}

FrameTables frame_tables(const DConnection& dc) {
  const int r = dc.r(), n = 2 * r;
  FrameTables t;
  t.r = r;
  std::vector<TangentSection> E;
  for (int k = 0; k < n; ++k) E.push_back(frame_section(r, k));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.torsion_table.push_back(torsion_op(dc, E[at(i)], E[at(j)]));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) t.curvature_table.push_back(curvature_op(dc, E[at(i)], E[at(j)], E[at(k)]));
  return t;
}

TangentSection FrameTables::torsion(const TangentSection& A, const TangentSection& B) const {
  const int n = 2 * r;
  TangentSection out = zero_section(r);
  for (int i = 0; i < n; ++i) {
    const Expr& a = frame_coeff(A, i);
    if (a.is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      const Expr& b = frame_coeff(B, j);
      if (b.is_zero()) continue;
      out = out + (a * b) * torsion_table[at(i * n + j)];
    }
  }
  return out;
}

TangentSection FrameTables::curvature(const TangentSection& A, const TangentSection& B,
                                      const TangentSection& C) const {
  const int n = 2 * r;
  TangentSection out = zero_section(r);
  for (int i = 0; i < n; ++i) {
    const Expr& a = frame_coeff(A, i);
    if (a.is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      const Expr& b = frame_coeff(B, j);
      if (b.is_zero()) continue;
      Expr ab = a * b;
      for (int k = 0; k < n; ++k) {
        const Expr& c = frame_coeff(C, k);
        if (c.is_zero()) continue;
        out = out + (ab * c) * curvature_table[at((i * n + j) * n + k)];
      }
    }
  }
  return out;
}

namespace {

void push_diff(std::vector<Expr>& out, const TangentSection& op, const std::vector<Expr>& h,
               const std::vector<Expr>& v) {
  for (std::size_t a = 0; a < h.size(); ++a) {
    out.push_back(op.h[a] - h[a]);
    out.push_back(op.v[a] - v[a]);
  }
}

}  // namespace

Report torsion_curvature_oracle_check(const DConnection& dc, const SampleSet& samples, double tol) {
  const int r = dc.r();
  const auto Tc = torsion_components(dc);
  const auto Kc = curvature_components(dc);
  auto i3 = [r](int a, int b, int c) { return at((a * r + b) * r + c); };
  auto i4 = [r](int a, int b, int c, int d) { return at(((a * r + b) * r + c) * r + d); };
  const std::vector<Expr> zeros(at(r));

  std::vector<Expr> hh, vh, vv;
  for (int b = 0; b < r; ++b)
    for (int c = 0; c < r; ++c) {
      std::vector<Expr> h1, v1, h2, v2, v3;
      for (int a = 0; a < r; ++a) {
        h1.push_back(Tc.T[i3(a, b, c)]);
        v1.push_back(Tc.Ttil[i3(a, b, c)]);
        h2.push_back(Tc.P[i3(a, b, c)]);
        v2.push_back(Tc.Ptil[i3(a, b, c)]);
        v3.push_back(Tc.S[i3(a, b, c)]);
      }
      auto dc_ = horizontal_frame(r, c), db = horizontal_frame(r, b);
      auto vc = vertical_frame(r, c), vb = vertical_frame(r, b);
      push_diff(hh, torsion_op(dc, dc_, db), h1, v1);
      push_diff(vh, torsion_op(dc, vc, db), h2, v2);
      push_diff(vv, torsion_op(dc, vc, vb), zeros, v3);
    }

  std::vector<Expr> rh, ph, sh;
  for (int b = 0; b < r; ++b)
    for (int c = 0; c < r; ++c)
      for (int d = 0; d < r; ++d) {
        std::vector<Expr> R, Rt, P, Pt, S, St;
        for (int a = 0; a < r; ++a) {
          R.push_back(Kc.R[i4(a, b, c, d)]);
          Rt.push_back(Kc.Rtil[i4(a, b, c, d)]);
          P.push_back(Kc.P[i4(a, b, c, d)]);
          Pt.push_back(Kc.Ptil[i4(a, b, c, d)]);
          S.push_back(Kc.S[i4(a, b, c, d)]);
          St.push_back(Kc.Stil[i4(a, b, c, d)]);
        }
        auto hd = horizontal_frame(r, d), hc = horizontal_frame(r, c), hb = horizontal_frame(r, b);
        auto vd = vertical_frame(r, d), vc = vertical_frame(r, c), vb = vertical_frame(r, b);
        push_diff(rh, curvature_op(dc, hd, hc, hb), R, zeros);
        push_diff(rh, curvature_op(dc, hd, hc, vb), zeros, Rt);
        push_diff(ph, curvature_op(dc, vd, hc, hb), P, zeros);
        push_diff(ph, curvature_op(dc, vd, hc, vb), zeros, Pt);
        push_diff(sh, curvature_op(dc, vd, vc, hb), S, zeros);
        push_diff(sh, curvature_op(dc, vd, vc, vb), zeros, St);
      }

  Report rep;
  rep.add(judge("torsion T, T~ vs operator", "torsion on two horizontal frame sections", max_residual(hh, samples),
                samples, tol));
  rep.add(judge("torsion P, P~ vs operator", "torsion on vertical/horizontal frame sections",
                max_residual(vh, samples), samples, tol));
  rep.add(judge("torsion S vs operator", "torsion on two vertical frame sections", max_residual(vv, samples),
                samples, tol));
  rep.add(judge("curvature R, R~ vs operator", "curvature on two horizontal frame sections",
                max_residual(rh, samples), samples, tol));
  rep.add(judge("curvature P, P~ vs operator", "curvature on vertical/horizontal frame sections",
                max_residual(ph, samples), samples, tol));
  rep.add(judge("curvature S, S~ vs operator", "curvature on two vertical frame sections",
                max_residual(sh, samples), samples, tol));
  return rep;
}

Report curvature_family_check(const DConnection& dc, const SampleSet& samples, double tol) {
  const int r = dc.r();
  const auto Tc = torsion_components(dc);
  const auto Kc = curvature_components(dc);
  auto i3 = [r](int a, int b, int c) { return at((a * r + b) * r + c); };
  auto i4 = [r](int a, int b, int c, int d) { return at(((a * r + b) * r + c) * r + d); };
  std::vector<Expr> tors, curv;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        tors.push_back(Tc.T[i3(a, b, c)] + Tc.T[i3(a, c, b)]);
        tors.push_back(Tc.Ttil[i3(a, b, c)] + Tc.Ttil[i3(a, c, b)]);
        tors.push_back(Tc.S[i3(a, b, c)] + Tc.S[i3(a, c, b)]);
        for (int d = 0; d < r; ++d)
          for (const auto* fam : {&Kc.R, &Kc.Rtil, &Kc.S, &Kc.Stil})
            curv.push_back((*fam)[i4(a, b, c, d)] + (*fam)[i4(a, b, d, c)]);
      }
  Report rep;
  rep.add(judge("torsion families antisymmetric", "torsion components T, T~, S", max_residual(tors, samples),
                samples, tol));
  rep.add(judge("curvature families antisymmetric", "curvature components R, R~, S, S~",
                max_residual(curv, samples), samples, tol));
  return rep;
}

}  // namespace gla
