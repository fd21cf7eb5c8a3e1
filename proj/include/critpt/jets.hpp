#pragma once

// Multi-index bookkeeping and diagonal jet tables.
//
// A "diagonal jet table" stores the values
//
//     d^a_z d^b_wbar G(z, w) |_{z = w = z0}
//
// of a two-point function G that is holomorphic in z and anti-holomorphic
// in w, for multi-indices a, b up to a fixed order per side.  Both the
// covariance kernels and the potential jets live in tables of this shape.

#include <cassert>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace critpt {

using cplx = std::complex<double>;

// All multi-indices over m variables with total degree <= dmax, graded,
// ties broken lexicographically.  Index 0 is always the zero index.
class MultiIndexSet {
 public:
  MultiIndexSet(int m, int dmax);

  int vars() const { return m_; }
  int max_degree() const { return dmax_; }
  int size() const { return static_cast<int>(list_.size()); }
  const std::vector<int>& exps(int id) const { return list_[id]; }
  int degree(int id) const { return degrees_[id]; }

  // id of a multi-index, -1 if outside the set
  int id(const std::vector<int>& e) const;

  // id after incrementing slot j (one more derivative in variable j)
  int id_plus(int id, int j) const;

  // shared instances, cached per (m, dmax)
  static const MultiIndexSet& get(int m, int dmax);

 private:
  int m_, dmax_;
  std::vector<std::vector<int>> list_;
  std::vector<int> degrees_;
  std::map<std::vector<int>, int> pos_;
};

class DiagJetTable {
 public:
  DiagJetTable() = default;
  DiagJetTable(int m, int order_z, int order_w);

  int vars() const { return m_; }
  int order_z() const { return oz_; }
  int order_w() const { return ow_; }
  const MultiIndexSet& zside() const { return MultiIndexSet::get(m_, oz_); }
  const MultiIndexSet& wside() const { return MultiIndexSet::get(m_, ow_); }

  cplx& at(int ia, int ib) { return vals_[ia * nw_ + ib]; }
  const cplx& at(int ia, int ib) const { return vals_[ia * nw_ + ib]; }

  // access by explicit exponent vectors
  cplx value(const std::vector<int>& a, const std::vector<int>& b) const;

  // max over entries of the Hermitian-symmetry defect
  // |T(a,b) - conj(T(b,a))| / (1 + |T(a,b)|);  requires order_z == order_w
  double hermitian_defect() const;

  void scale(double c);

  // Frame change G -> h(z) * conj(h(w)) * G with h(z0) = 1 and prescribed
  // derivatives of h at z0: h1[j] = d_j h, h2(j,q) = d_j d_q h.  Orders
  // beyond 2 on either side are not supported.
  DiagJetTable frame_transformed(const Eigen::VectorXcd& h1,
                                 const Eigen::MatrixXcd& h2) const;

  // Linear coordinate change z = z0 + L * zeta (w side uses conj(L)).
  DiagJetTable coordinates_transformed(const Eigen::MatrixXcd& L) const;

 private:
  int m_ = 0, oz_ = 0, ow_ = 0;
  int nz_ = 0, nw_ = 0;
  std::vector<cplx> vals_;
};

}  // namespace critpt
