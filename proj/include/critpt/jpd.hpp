#pragma once

// Joint probability distribution of the 2-jet (gradient, holomorphic
// Hessian, value) of a Gaussian random section at a point.
//
// The n = (m^2+m+2)/2 composite coordinates are the symmetric Hessian
// entries H'_{jq} (pairs j <= q, lexicographic) followed by the value slot
// x.  A is the m x m covariance of the gradient coefficients v_j, B the
// cross block, C the (H', x) block, and Lambda = C - B* A^-1 B the
// conditional covariance given v = 0.
//
// Covariances are stored in the plain coordinates H'_{jq}.  As an operator
// on Sym(m,C) (+) C with the Tr(AB*) inner product, the off-diagonal pair
// slots carry weight sqrt(2); the helpers below convert where the operator
// convention matters (determinants, inner products, sampling).

#include <Eigen/Dense>

#include "critpt/geometry.hpp"
#include "critpt/kernels.hpp"

namespace critpt {

struct SpanningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int sym_slot_count(int m) { return (m * m + m + 2) / 2; }

// slot of the pair (j, q), j <= q, in the composite coordinates
inline int sym_slot(int m, int j, int q) {
  return j * m - j * (j - 1) / 2 + (q - j);
}

// weight of a composite slot in the orthonormal basis of Sym(m,C) (+) C
double slot_weight(int m, int slot);

enum class FrameMode { adapted, general };

struct JPDMatrices {
  int m = 0;
  Eigen::MatrixXcd A;  // m x m
  Eigen::MatrixXcd B;  // m x n
  Eigen::MatrixXcd C;  // n x n
};

struct LambdaMatrix {
  int m = 0;
  Eigen::MatrixXcd L;  // n x n, Hermitian positive definite under spanning

  double min_eigenvalue() const;
  // operator determinant (orthonormal-basis convention)
  double operator_det() const;
};

// Assemble A, B, C from kernel jets.  In adapted mode the pure potential
// derivatives must vanish at the point and the entries are read off the
// table directly; in general mode every plain derivative is replaced by
// the covariant one, which brings in the pure K-jets of order <= 2.
JPDMatrices assemble_abc(const KernelJets& jets, const ChartGeometry& geom,
                         FrameMode mode);

// Lambda = C - B* A^-1 B via a Hermitian solve; rejects A with condition
// number above 1e12 (2-jet spanning failure).
LambdaMatrix compute_lambda(const JPDMatrices& jpd);

// Gaussian density of the jet variables at v in the (H', x) space,
// conditioned on vanishing gradient:
// [pi^binom(m+2,2) det A det Lambda]^-1 exp(-<Lambda^-1 v, v>).
double joint_density_at_zero(const Eigen::MatrixXcd& A,
                             const LambdaMatrix& lambda,
                             const Eigen::VectorXcd& v);

}  // namespace critpt
