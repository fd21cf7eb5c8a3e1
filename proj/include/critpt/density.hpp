#pragma once

// Expected critical-point densities and counts: the exact closed form in
// complex dimension one, Monte Carlo determinant integrals in general
// dimension, Morse-index-restricted densities, and the exact rational
// counts for CP^1 and CP^2.
//
// Measure conventions.  The dimension-one closed form
//     K = (1/(pi A)) (mu1^2 + mu2^2) / (|mu1| + |mu2|),
// with mu_i the eigenvalues of Lambda Q_r and Q_r = diag(1, -r^2), gives
// the density per unit dV and expects A, Lambda in an adapted frame and in
// coordinates where dV equals Lebesgue measure at the point (then the
// curvature value there equals r).  The normalized Monte Carlo estimator
//     pi^-m E|det(H'H'* - |x|^2 I)| / det A
// expects curvature-normalized coordinates (Theta = I) and gives the
// density per curvature volume (i/2 Theta_h)^m / m!.  The general-Theta
// estimator takes any frame and gives the density per Lebesgue measure.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "critpt/jpd.hpp"
#include "critpt/rational.hpp"

namespace critpt {

enum class DensityMethod { exact1d, mcNormalized, mcGeneralTheta, mcMorse };

struct DensityResult {
  double value = 0.0;
  double standard_error = 0.0;  // 0 for exact methods
  DensityMethod method = DensityMethod::exact1d;
  long long samples = 0;
};

struct EigenPair {
  double mu_plus;   // > 0
  double mu_minus;  // < 0
};

struct IndexDensities {
  double k_plus;
  double k_minus;
  double k_index;  // k_plus - k_minus
};

// eigenvalues of Lambda Q_r (m = 1), Q_r = diag(1, -r^2)
EigenPair eigen_lambda_q(const LambdaMatrix& lambda, double r);

DensityResult density_dim1_exact(double A, const LambdaMatrix& lambda,
                                 double r);

IndexDensities index_densities_dim1(double A, const LambdaMatrix& lambda,
                                    double r);

struct McOptions {
  long long samples = 1000000;
  uint64_t seed = 0;
  int batches = 100;  // standard error via batch means
  int workers = 0;    // 0 = hardware concurrency
};

// per-Morse-index profile from one sample stream; by_index[k] holds the
// contribution of samples where H'H'* - |x|^2 I has exactly k negative
// eigenvalues (Morse index q = m + k), and total is their sum in k-order
struct McDensityProfile {
  std::vector<DensityResult> by_index;
  DensityResult total;
};

McDensityProfile density_mc_profile(const Eigen::MatrixXcd& A,
                                    const LambdaMatrix& lambda,
                                    const McOptions& opts);

DensityResult density_mc_normalized(const Eigen::MatrixXcd& A,
                                    const LambdaMatrix& lambda,
                                    const McOptions& opts);

// Morse index q in {m, ..., 2m}
DensityResult morse_density_mc(const Eigen::MatrixXcd& A,
                               const LambdaMatrix& lambda, int q,
                               const McOptions& opts);

DensityResult density_mc_general_theta(const Eigen::MatrixXcd& A,
                                       const LambdaMatrix& lambda,
                                       const Eigen::MatrixXcd& theta,
                                       const McOptions& opts);

struct CP1Counts {
  Rational n_plus;   // 4(N-1)^2 / (3N-2)
  Rational n_minus;  // N^2 / (3N-2)
  Rational n_total;  // (5N^2-8N+4) / (3N-2)
};

CP1Counts exact_cp1_numbers(int N);

// (59N^5 - 231N^4 + 375N^3 - 310N^2 + 132N - 24) / (3N-2)^3
Rational cp2_exact_number(int N);

}  // namespace critpt
