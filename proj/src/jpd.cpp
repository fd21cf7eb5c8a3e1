#include "critpt/jpd.hpp"

#include <cmath>

namespace critpt {

double slot_weight(int m, int slot) {
  const int n = sym_slot_count(m);
  if (slot == n - 1) return 1.0;  // value slot
  for (int j = 0; j < m; ++j)
    for (int q = j; q < m; ++q)
      if (sym_slot(m, j, q) == slot) return j == q ? 1.0 : std::sqrt(2.0);
  throw std::out_of_range("bad composite slot");
}

double LambdaMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(L);
  return es.eigenvalues().minCoeff();
}

double LambdaMatrix::operator_det() const {
  const int n = static_cast<int>(L.rows());
  double wprod = 1.0;
  for (int i = 0; i < n; ++i) {
    double w = slot_weight(m, i);
    wprod *= w * w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(L);
  double det = 1.0;
  for (int i = 0; i < n; ++i) det *= es.eigenvalues()(i);
  return det * wprod;
}

namespace {

// covariant jet table: replaces each plain derivative of the kernel by the
// Chern-covariant one, using the pure potential jets at the point.  This is
// the same product-rule expansion as a frame change by exp(-g) with g
// absorbing the pure 2-jet of K.
DiagJetTable covariant_table(const KernelJets& jets,
                             const ChartGeometry& geom) {
  const int m = jets.m;
  const MultiIndexSet& s4 = MultiIndexSet::get(m, 4);
  Eigen::VectorXcd h1(m);
  Eigen::MatrixXcd h2(m, m);
  for (int j = 0; j < m; ++j) {
    std::vector<int> ej(m, 0);
    ej[j] = 1;
    cplx kj = geom.jets.table.at(s4.id(ej), 0);
    h1(j) = -kj;
  }
  for (int j = 0; j < m; ++j)
    for (int q = 0; q < m; ++q) {
      std::vector<int> ejq(m, 0);
      ejq[j] += 1;
      ejq[q] += 1;
      cplx kjq = geom.jets.table.at(s4.id(ejq), 0);
      h2(j, q) = (-h1(j)) * (-h1(q)) - kjq;
    }
  return jets.table.frame_transformed(h1, h2);
}

}  // namespace

JPDMatrices assemble_abc(const KernelJets& jets, const ChartGeometry& geom,
                         FrameMode mode) {
  const int m = jets.m;
  if (geom.m != m)
    throw std::invalid_argument("jets/geometry dimension mismatch");
  const MultiIndexSet& s = MultiIndexSet::get(m, 2);
  const MultiIndexSet& s4 = MultiIndexSet::get(m, 4);

  DiagJetTable table = jets.table;
  if (mode == FrameMode::general) {
    table = covariant_table(jets, geom);
  } else {
    // adapted mode expects a frame with vanishing pure K-jets of order <= 2
    double scale = 0.0;
    for (int ia = 1; ia < s4.size(); ++ia)
      if (s4.degree(ia) <= 2)
        scale = std::max(scale, std::abs(geom.jets.table.at(ia, ia)));
    for (int ia = 1; ia < s4.size(); ++ia) {
      if (s4.degree(ia) > 2) continue;
      if (std::abs(geom.jets.table.at(ia, 0)) > 1e-8 * (1.0 + scale))
        throw std::invalid_argument(
            "adapted mode requires vanishing pure potential jets");
    }
  }

  const int n = sym_slot_count(m);
  JPDMatrices out;
  out.m = m;
  out.A = Eigen::MatrixXcd(m, m);
  out.B = Eigen::MatrixXcd(m, n);
  out.C = Eigen::MatrixXcd(n, n);

  auto one = [&](int j) {
    std::vector<int> e(m, 0);
    e[j] = 1;
    return s.id(e);
  };
  auto two = [&](int j, int q) {
    std::vector<int> e(m, 0);
    e[j] += 1;
    e[q] += 1;
    return s.id(e);
  };

  for (int j = 0; j < m; ++j)
    for (int jp = 0; jp < m; ++jp) out.A(j, jp) = table.at(one(j), one(jp));

  for (int j = 0; j < m; ++j) {
    for (int jp = 0; jp < m; ++jp)
      for (int qp = jp; qp < m; ++qp)
        out.B(j, sym_slot(m, jp, qp)) = table.at(one(j), two(jp, qp));
    out.B(j, n - 1) = table.at(one(j), 0);
  }

  for (int j = 0; j < m; ++j)
    for (int q = j; q < m; ++q) {
      int row = sym_slot(m, j, q);
      for (int jp = 0; jp < m; ++jp)
        for (int qp = jp; qp < m; ++qp)
          out.C(row, sym_slot(m, jp, qp)) = table.at(two(j, q), two(jp, qp));
      out.C(row, n - 1) = table.at(two(j, q), 0);
    }
  for (int jp = 0; jp < m; ++jp)
    for (int qp = jp; qp < m; ++qp)
      out.C(n - 1, sym_slot(m, jp, qp)) = table.at(0, two(jp, qp));
  out.C(n - 1, n - 1) = table.at(0, 0);

  out.A = 0.5 * (out.A + out.A.adjoint().eval());
  out.C = 0.5 * (out.C + out.C.adjoint().eval());
  return out;
}

LambdaMatrix compute_lambda(const JPDMatrices& jpd) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(jpd.A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("A eigendecomposition failed");
  double emin = es.eigenvalues().minCoeff();
  double emax = es.eigenvalues().maxCoeff();
  if (emin <= 0.0 || emax / emin > 1e12)
    throw SpanningError("2-jet spanning violated at point (A ill-conditioned)");

  Eigen::LDLT<Eigen::MatrixXcd> ldlt(jpd.A);
  Eigen::MatrixXcd X = ldlt.solve(jpd.B);  // A^-1 B
  LambdaMatrix lambda;
  lambda.m = jpd.m;
  lambda.L = jpd.C - jpd.B.adjoint() * X;
  lambda.L = 0.5 * (lambda.L + lambda.L.adjoint().eval());
  return lambda;
}

double joint_density_at_zero(const Eigen::MatrixXcd& A,
                             const LambdaMatrix& lambda,
                             const Eigen::VectorXcd& v) {
  const int m = lambda.m;
  const int n = sym_slot_count(m);
  if (v.size() != n) throw std::invalid_argument("argument dimension mismatch");

  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = slot_weight(m, i);
  Eigen::MatrixXcd Lon = w.asDiagonal() * lambda.L * w.asDiagonal();
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(Lon);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw SpanningError("Lambda not positive definite");
  Eigen::VectorXcd y = w.asDiagonal() * v;
  double quad = y.dot(ldlt.solve(y)).real();

  double det_lambda = lambda.operator_det();
  double det_a = A.determinant().real();
  if (det_lambda <= 0.0 || det_a <= 0.0)
    throw SpanningError("degenerate jet covariance");
  int binom = (m + 2) * (m + 1) / 2;
  return std::exp(-quad) / (std::pow(M_PI, binom) * det_a * det_lambda);
}

}  // namespace critpt
