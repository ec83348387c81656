#pragma once

#include <initializer_list>
#include <vector>

#include "algebroid/connection.hpp"

namespace gla {

// Components of a distinguished linear connection, each indexed [a][b][c]:
//   D_{delta_c} delta_b = H^a_bc delta_a      D_{delta_c} ddot_b = Htil^a_bc ddot_a
//   D_{ddot_c}  delta_b = V^a_bc delta_a      D_{ddot_c}  ddot_b = Vtil^a_bc ddot_a
class DConnection {
 public:
  DConnection(NlConnection conn, std::vector<Expr> H, std::vector<Expr> Htil, std::vector<Expr> V,
              std::vector<Expr> Vtil);
  static DConnection berwald(const NlConnection& conn);

  const NlConnection& conn() const { return conn_; }
  int r() const { return conn_.r(); }
  bool normal() const { return normal_; }
  const Expr& H(int a, int b, int c) const { return H_[idx(a, b, c)]; }
  const Expr& Htil(int a, int b, int c) const { return Ht_[idx(a, b, c)]; }
  const Expr& V(int a, int b, int c) const { return V_[idx(a, b, c)]; }
  const Expr& Vtil(int a, int b, int c) const { return Vt_[idx(a, b, c)]; }

 private:
  NlConnection conn_;
  std::vector<Expr> H_, Ht_, V_, Vt_;
  bool normal_ = false;
  std::size_t idx(int a, int b, int c) const { return static_cast<std::size_t>((a * r() + b) * r() + c); }
};

// (p horizontal-upper, q horizontal-lower, r vertical-upper, s vertical-lower)
struct TensorSig {
  int hu = 0, hl = 0, vu = 0, vl = 0;
  int order() const { return hu + hl + vu + vl; }
  bool operator==(const TensorSig&) const = default;
};

// Dense components; a multi-index lists the hu, hl, vu, vl groups in that order.
class TensorField {
 public:
  TensorField(TensorSig sig, int rank);
  TensorField(TensorSig sig, int rank, std::vector<Expr> comps);

  const TensorSig& sig() const { return sig_; }
  int rank() const { return rank_; }
  std::size_t size() const { return comps_.size(); }
  const std::vector<Expr>& comps() const { return comps_; }

  std::size_t offset(const std::vector<int>& idx) const;
  std::vector<int> multi_index(std::size_t offset) const;
  const Expr& operator[](const std::vector<int>& idx) const { return comps_[offset(idx)]; }
  Expr& operator[](const std::vector<int>& idx) { return comps_[offset(idx)]; }
  const Expr& flat(std::size_t k) const { return comps_[k]; }
  Expr& flat(std::size_t k) { return comps_[k]; }

 private:
  TensorSig sig_;
  int rank_;
  std::vector<Expr> comps_;
};

TensorField horizontal_part(const TangentSection& X);  // (1,0;0,0)
TensorField vertical_part(const TangentSection& X);    // (0,0;1,0)
TensorField tensor_product(const TensorField& A, const TensorField& B);

// T_{|c}: new horizontal-lower index appended last in its group.
TensorField horizontal_derivative(const DConnection& dc, const TensorField& T);
// T|_c: new vertical-lower index appended last in its group.
TensorField vertical_derivative(const DConnection& dc, const TensorField& T);
TensorField cov_deriv(const DConnection& dc, const TangentSection& X, const TensorField& T);

// Covariant derivative of a section, D_X Y.
TangentSection cov_deriv(const DConnection& dc, const TangentSection& X, const TangentSection& Y);

struct TorsionComponents {
  std::vector<Expr> T, Ttil, P, Ptil, S;  // [a][b][c]
};
struct CurvatureComponents {
  std::vector<Expr> R, Rtil, P, Ptil, S, Stil;  // [a][b][c][d]
};

// Families obtained from the defining expansion of the torsion and curvature operators.
TorsionComponents torsion_components(const DConnection& dc);
CurvatureComponents curvature_components(const DConnection& dc);
// Horizontal torsion family with the opposite sign on the structure-function term.
std::vector<Expr> torsion_T_alt_sign(const DConnection& dc);

TangentSection mixed_curvature(const DConnection& dc, const CurvatureComponents& K, const TangentSection& X,
                               const TangentSection& Y, const TangentSection& Z);

// Operator forms.
TangentSection torsion_op(const DConnection& dc, const TangentSection& X, const TangentSection& Y);
TangentSection curvature_op(const DConnection& dc, const TangentSection& X, const TangentSection& Y,
                            const TangentSection& Z);

// k < r: delta_k, otherwise ddot_(k-r)
TangentSection frame_section(int r, int k);
const Expr& frame_coeff(const TangentSection& X, int k);

// Operator-form torsion and curvature on every pair/triple of frame sections,
// extended to arbitrary arguments by multilinearity.
struct FrameTables {
  int r = 0;
  std::vector<TangentSection> torsion_table;    // [i*2r+j]
  std::vector<TangentSection> curvature_table;  // [(i*2r+j)*2r+k]

  TangentSection torsion(const TangentSection& A, const TangentSection& B) const;
  TangentSection curvature(const TangentSection& A, const TangentSection& B, const TangentSection& C) const;
};
FrameTables frame_tables(const DConnection& dc);

// Component families against the operator forms on frame sections.
Report torsion_curvature_oracle_check(const DConnection& dc, const SampleSet& samples, double tol);
Report curvature_family_check(const DConnection& dc, const SampleSet& samples, double tol);

Report ricci_check(const DConnection& dc, const TangentSection& Y, const SampleSet& samples, double tol);
Report bianchi_check(const DConnection& dc, const std::vector<TangentSection>& probes,
                     const SampleSet& samples, double tol, double remark_tol);

}  // namespace gla
