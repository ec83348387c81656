#include "algebroid/dconn.hpp"

#include <stdexcept>

namespace gla {

namespace {
inline std::size_t at(int k) { return static_cast<std::size_t>(k); }
}  // namespace

DConnection::DConnection(NlConnection conn, std::vector<Expr> H, std::vector<Expr> Htil, std::vector<Expr> V,
                         std::vector<Expr> Vtil)
    : conn_(std::move(conn)), H_(std::move(H)), Ht_(std::move(Htil)), V_(std::move(V)), Vt_(std::move(Vtil)) {
  const std::size_t n = static_cast<std::size_t>(r() * r() * r());
  if (H_.size() != n || Ht_.size() != n || V_.size() != n || Vt_.size() != n)
    throw ArityError("distinguished connection needs r^3 components per family");
  for (const auto* fam : {&H_, &Ht_, &V_, &Vt_})
    for (const Expr& e : *fam) check_arity(e, conn_.arity());
  normal_ = true;
  for (std::size_t k = 0; k < n && normal_; ++k)
    normal_ = structurally_equal(H_[k], Ht_[k]) && structurally_equal(V_[k], Vt_[k]);
}

DConnection DConnection::berwald(const NlConnection& conn) {
  const int r = conn.r();
  std::vector<Expr> H(static_cast<std::size_t>(r * r * r));
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) H[static_cast<std::size_t>((a * r + b) * r + c)] = dy(conn.gamma(a, c), b);
  std::vector<Expr> zero(H.size());
  return DConnection(conn, H, H, zero, zero);
}

TensorField::TensorField(TensorSig sig, int rank) : sig_(sig), rank_(rank) {
  std::size_t n = 1;
  for (int k = 0; k < sig.order(); ++k) n *= static_cast<std::size_t>(rank);
  comps_.assign(n, Expr(0.0));
}

TensorField::TensorField(TensorSig sig, int rank, std::vector<Expr> comps) : TensorField(sig, rank) {
  if (comps.size() != comps_.size()) throw ArityError("tensor component count mismatch");
  comps_ = std::move(comps);
}

std::size_t TensorField::offset(const std::vector<int>& idx) const {
  if (idx.size() != static_cast<std::size_t>(sig_.order())) throw ArityError("tensor index length mismatch");
  std::size_t off = 0;
  for (int i : idx) off = off * static_cast<std::size_t>(rank_) + static_cast<std::size_t>(i);
  return off;
}

std::vector<int> TensorField::multi_index(std::size_t off) const {
  std::vector<int> idx(static_cast<std::size_t>(sig_.order()));
  for (std::size_t k = idx.size(); k-- > 0;) {
    idx[k] = static_cast<int>(off % static_cast<std::size_t>(rank_));
    off /= static_cast<std::size_t>(rank_);
  }
  return idx;
}

TensorField horizontal_part(const TangentSection& X) {
  return TensorField({1, 0, 0, 0}, static_cast<int>(X.h.size()), X.h);
}

TensorField vertical_part(const TangentSection& X) {
  return TensorField({0, 0, 1, 0}, static_cast<int>(X.v.size()), X.v);
}

TensorField tensor_product(const TensorField& A, const TensorField& B) {
  const TensorSig& a = A.sig();
  const TensorSig& b = B.sig();
  TensorSig s{a.hu + b.hu, a.hl + b.hl, a.vu + b.vu, a.vl + b.vl};
  TensorField out(s, A.rank());
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto idx = out.multi_index(k);
    std::vector<int> ia, ib;
    std::size_t p = 0;
    for (auto [na, nb] : {std::pair{a.hu, b.hu}, {a.hl, b.hl}, {a.vu, b.vu}, {a.vl, b.vl}}) {
      for (int i = 0; i < na; ++i) ia.push_back(idx[p++]);
      for (int i = 0; i < nb; ++i) ib.push_back(idx[p++]);
    }
    out.flat(k) = A[ia] * B[ib];
  }
  return out;
}

namespace {

enum class Dir { Horizontal, Vertical };

TensorField derivative(const DConnection& dc, const TensorField& T, Dir dir) {
  const int r = dc.r();
  const TensorSig& s = T.sig();
  TensorSig ns = s;
  if (dir == Dir::Horizontal) ++ns.hl;
  else ++ns.vl;
  // position of the new index inside the result multi-index
  const int new_pos = dir == Dir::Horizontal ? s.hu + s.hl : s.hu + s.hl + s.vu + s.vl;
  TensorField out(ns, r);
  auto conn_h = [&](int a, int b, int c) -> const Expr& {
    return dir == Dir::Horizontal ? dc.H(a, b, c) : dc.V(a, b, c);
  };
  auto conn_v = [&](int a, int b, int c) -> const Expr& {
    return dir == Dir::Horizontal ? dc.Htil(a, b, c) : dc.Vtil(a, b, c);
  };
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto idx = out.multi_index(k);
    const int c = idx[static_cast<std::size_t>(new_pos)];
    std::vector<int> base(idx);
    base.erase(base.begin() + new_pos);
    const Expr& t = T[base];
    Expr val = dir == Dir::Horizontal ? dc.conn().delta(c, t) : dy(t, c);
    for (int pos = 0; pos < s.order(); ++pos) {
      bool horizontal_slot = pos < s.hu + s.hl;
      bool upper = pos < s.hu || (pos >= s.hu + s.hl && pos < s.hu + s.hl + s.vu);
      const int orig = base[static_cast<std::size_t>(pos)];
      std::vector<int> sub(base);
      for (int e = 0; e < r; ++e) {
        sub[static_cast<std::size_t>(pos)] = e;
        const Expr& te = T[sub];
        if (te.is_zero()) continue;
        const Expr& g = upper ? (horizontal_slot ? conn_h(orig, e, c) : conn_v(orig, e, c))
                              : (horizontal_slot ? conn_h(e, orig, c) : conn_v(e, orig, c));
        if (g.is_zero()) continue;
        if (upper) val += g * te;
        else val -= g * te;
      }
    }
    out.flat(k) = val;
  }
  return out;
}

}  // namespace

TensorField horizontal_derivative(const DConnection& dc, const TensorField& T) {
  return derivative(dc, T, Dir::Horizontal);
}

TensorField vertical_derivative(const DConnection& dc, const TensorField& T) {
  return derivative(dc, T, Dir::Vertical);
}

TensorField cov_deriv(const DConnection& dc, const TangentSection& X, const TensorField& T) {
  const int r = dc.r();
  if (T.rank() != r) throw ArityError("tensor rank differs from the connection rank");
  TensorField hd = horizontal_derivative(dc, T);
  TensorField vd = vertical_derivative(dc, T);
  const TensorSig& s = T.sig();
  TensorField out(s, r);
  const int hpos = s.hu + s.hl;
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto idx = out.multi_index(k);
    Expr val(0.0);
    for (int c = 0; c < r; ++c) {
      if (!X.h[at(c)].is_zero()) {
        auto ih = idx;
        ih.insert(ih.begin() + hpos, c);
        val += X.h[at(c)] * hd[ih];
      }
      if (!X.v[at(c)].is_zero()) {
        auto iv = idx;
        iv.push_back(c);
        val += X.v[at(c)] * vd[iv];
      }
    }
    out.flat(k) = val;
  }
  return out;
}

TangentSection cov_deriv(const DConnection& dc, const TangentSection& X, const TangentSection& Y) {
  const int r = dc.r();
  const NlConnection& conn = dc.conn();
  TangentSection out;
  for (int a = 0; a < r; ++a) {
    Expr hs(0.0), vs(0.0);
    for (int c = 0; c < r; ++c) {
      const Expr& xc = X.h[at(c)];
      const Expr& xdc = X.v[at(c)];
      if (!xc.is_zero()) {
        Expr th = conn.delta(c, Y.h[at(a)]);
        Expr tv = conn.delta(c, Y.v[at(a)]);
        for (int e = 0; e < r; ++e) {
          if (!Y.h[at(e)].is_zero()) th += dc.H(a, e, c) * Y.h[at(e)];
          if (!Y.v[at(e)].is_zero()) tv += dc.Htil(a, e, c) * Y.v[at(e)];
        }
        hs += xc * th;
        vs += xc * tv;
      }
      if (!xdc.is_zero()) {
        Expr th = dy(Y.h[at(a)], c);
        Expr tv = dy(Y.v[at(a)], c);
        for (int e = 0; e < r; ++e) {
          if (!Y.h[at(e)].is_zero()) th += dc.V(a, e, c) * Y.h[at(e)];
          if (!Y.v[at(e)].is_zero()) tv += dc.Vtil(a, e, c) * Y.v[at(e)];
        }
        hs += xdc * th;
        vs += xdc * tv;
      }
    }
    out.h.push_back(hs);
    out.v.push_back(vs);
  }
  return out;
}

TorsionComponents torsion_components(const DConnection& dc) {
  const int r = dc.r();
  const NlConnection& conn = dc.conn();
  const auto R = curvature_R(conn);
  const std::size_t n = static_cast<std::size_t>(r * r * r);
  TorsionComponents t{std::vector<Expr>(n), std::vector<Expr>(n), std::vector<Expr>(n), std::vector<Expr>(n),
                      std::vector<Expr>(n)};
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        std::size_t k = static_cast<std::size_t>((a * r + b) * r + c);
        t.T[k] = dc.H(a, b, c) - dc.H(a, c, b) + conn.alg().L_h(a, b, c);
        t.Ttil[k] = R[k];
        t.P[k] = dc.V(a, b, c);
        t.Ptil[k] = dy(conn.gamma(a, b), c) - dc.Htil(a, c, b);
        t.S[k] = dc.Vtil(a, b, c) - dc.Vtil(a, c, b);
      }
  return t;
}

std::vector<Expr> torsion_T_alt_sign(const DConnection& dc) {
  const int r = dc.r();
  std::vector<Expr> T(static_cast<std::size_t>(r * r * r));
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        T[static_cast<std::size_t>((a * r + b) * r + c)] =
            dc.H(a, b, c) - dc.H(a, c, b) - dc.conn().alg().L_h(a, b, c);
  return T;
}

CurvatureComponents curvature_components(const DConnection& dc) {
  const int r = dc.r();
  const NlConnection& conn = dc.conn();
  const auto Rc = curvature_R(conn);
  auto Rn = [&](int e, int d, int c) -> const Expr& { return Rc[static_cast<std::size_t>((e * r + d) * r + c)]; };
  const std::size_t n = static_cast<std::size_t>(r * r * r * r);
  CurvatureComponents K{std::vector<Expr>(n), std::vector<Expr>(n), std::vector<Expr>(n),
                        std::vector<Expr>(n), std::vector<Expr>(n), std::vector<Expr>(n)};
  // dGamma[e][c][d] = ddot_d Gamma^e_c
  std::vector<Expr> dG(static_cast<std::size_t>(r * r * r));
  for (int e = 0; e < r; ++e)
    for (int c = 0; c < r; ++c)
      for (int d = 0; d < r; ++d) dG[static_cast<std::size_t>((e * r + c) * r + d)] = dy(conn.gamma(e, c), d);
  auto dGamma = [&](int e, int c, int d) -> const Expr& { return dG[static_cast<std::size_t>((e * r + c) * r + d)]; };

  using Getter = const Expr& (DConnection::*)(int, int, int) const;
  // one routine serves both the plain and the tilde families
  auto fill = [&](Getter Hf, Getter Vf, std::vector<Expr>& R, std::vector<Expr>& P, std::vector<Expr>& S) {
    auto Hc = [&](int a, int b, int c) -> const Expr& { return (dc.*Hf)(a, b, c); };
    auto Vc = [&](int a, int b, int c) -> const Expr& { return (dc.*Vf)(a, b, c); };
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c)
          for (int d = 0; d < r; ++d) {
            std::size_t k = static_cast<std::size_t>(((a * r + b) * r + c) * r + d);
            Expr rr = conn.delta(d, Hc(a, b, c)) - conn.delta(c, Hc(a, b, d));
            Expr pp = dy(Hc(a, b, c), d) - conn.delta(c, Vc(a, b, d));
            Expr ss = dy(Vc(a, b, c), d) - dy(Vc(a, b, d), c);
            for (int e = 0; e < r; ++e) {
              rr += Hc(e, b, c) * Hc(a, e, d) - Hc(e, b, d) * Hc(a, e, c);
              Expr l = conn.alg().L_h(e, d, c);
              if (!l.is_zero()) rr -= l * Hc(a, b, e);
              rr -= Rn(e, d, c) * Vc(a, b, e);
              pp += Vc(a, e, d) * Hc(e, b, c) - Hc(a, e, c) * Vc(e, b, d) + dGamma(e, c, d) * Vc(a, b, e);
              ss += Vc(a, e, d) * Vc(e, b, c) - Vc(a, e, c) * Vc(e, b, d);
            }
            R[k] = rr;
            P[k] = pp;
            S[k] = ss;
          }
  };
  fill(&DConnection::H, &DConnection::V, K.R, K.P, K.S);
  fill(&DConnection::Htil, &DConnection::Vtil, K.Rtil, K.Ptil, K.Stil);
  return K;
}

TangentSection mixed_curvature(const DConnection& dc, const CurvatureComponents& K, const TangentSection& X,
                               const TangentSection& Y, const TangentSection& Z) {
  const int r = dc.r();
  TangentSection out;
  for (int a = 0; a < r; ++a) {
    Expr hs(0.0), vs(0.0);
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d) {
          Expr w = X.v[at(d)] * Y.h[at(c)];
          if (w.is_zero()) continue;
          std::size_t k = static_cast<std::size_t>(((a * r + b) * r + c) * r + d);
          hs += w * Z.h[at(b)] * K.P[k];
          vs += w * Z.v[at(b)] * K.Ptil[k];
        }
    out.h.push_back(hs);
    out.v.push_back(vs);
  }
  return out;
}

TangentSection torsion_op(const DConnection& dc, const TangentSection& X, const TangentSection& Y) {
  return cov_deriv(dc, X, Y) - cov_deriv(dc, Y, X) - bracket(dc.conn(), X, Y);
}

TangentSection curvature_op(const DConnection& dc, const TangentSection& X, const TangentSection& Y,
                            const TangentSection& Z) {
  return cov_deriv(dc, X, cov_deriv(dc, Y, Z)) - cov_deriv(dc, Y, cov_deriv(dc, X, Z)) -
         cov_deriv(dc, bracket(dc.conn(), X, Y), Z);
}

}  // namespace gla
