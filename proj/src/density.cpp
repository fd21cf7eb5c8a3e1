#include "critpt/density.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "critpt/rng.hpp"

namespace critpt {

EigenPair eigen_lambda_q(const LambdaMatrix& lambda, double r) {
  if (lambda.m != 1 || lambda.L.rows() != 2)
    throw std::invalid_argument("eigen_lambda_q needs the m = 1 Lambda");
  if (r == 0.0) throw std::invalid_argument("r must be nonzero");
  double l11 = lambda.L(0, 0).real();
  double l22 = lambda.L(1, 1).real();
  cplx l12 = lambda.L(0, 1);
  double det_l = l11 * l22 - std::norm(l12);
  if (l11 <= 0.0 || det_l <= 0.0)
    throw SpanningError("Lambda not positive definite");
  // Lambda Q_r = [[l11, -r^2 l12], [conj(l12), -r^2 l22]]
  double tr = l11 - r * r * l22;
  double det = -r * r * det_l;  // < 0, so the eigenvalues are real
  double disc = tr * tr - 4.0 * det;
  double root = std::sqrt(disc);
  EigenPair out;
  out.mu_plus = 0.5 * (tr + root);
  out.mu_minus = 0.5 * (tr - root);
  return out;
}

DensityResult density_dim1_exact(double A, const LambdaMatrix& lambda,
                                 double r) {
  if (A <= 0.0) throw std::invalid_argument("A must be positive");
  EigenPair mu = eigen_lambda_q(lambda, r);
  DensityResult out;
  out.method = DensityMethod::exact1d;
  out.value = (mu.mu_plus * mu.mu_plus + mu.mu_minus * mu.mu_minus) /
              (M_PI * A * (std::abs(mu.mu_plus) + std::abs(mu.mu_minus)));
  return out;
}

IndexDensities index_densities_dim1(double A, const LambdaMatrix& lambda,
                                    double r) {
  if (A <= 0.0) throw std::invalid_argument("A must be positive");
  EigenPair mu = eigen_lambda_q(lambda, r);
  double denom = M_PI * A * (std::abs(mu.mu_plus) + std::abs(mu.mu_minus));
  IndexDensities out;
  out.k_plus = mu.mu_plus * mu.mu_plus / denom;
  out.k_minus = mu.mu_minus * mu.mu_minus / denom;
  out.k_index = (mu.mu_plus + mu.mu_minus) / (M_PI * A);
  return out;
}

namespace {

constexpr uint64_t kSampleStream = 0x5a11ce5ULL;

struct Accum {
  std::vector<double> sum;            // per index bucket
  std::vector<std::vector<double>> batch_sums;  // [bucket][batch]
};

// Cholesky factor of the operator form of Lambda; sampling y = Lc g in the
// orthonormal coordinates and mapping back to plain H' entries
struct Sampler {
  int m, n;
  Eigen::MatrixXcd Lc;
  Eigen::VectorXd winv;

  Sampler(const LambdaMatrix& lambda) {
    m = lambda.m;
    n = sym_slot_count(m);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = slot_weight(m, i);
    Eigen::MatrixXcd Lon = w.asDiagonal() * lambda.L * w.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Lon);
    double emin = es.eigenvalues().minCoeff();
    double emax = es.eigenvalues().maxCoeff();
    if (emin <= 1e-12 * std::max(emax, 0.0))
      throw SpanningError("Lambda degenerate (2-jet spanning violated)");
    Eigen::LLT<Eigen::MatrixXcd> llt(Lon);
    if (llt.info() != Eigen::Success)
      throw SpanningError("Lambda Cholesky failed");
    Lc = llt.matrixL();
    winv = w.cwiseInverse();
  }

  // draw (H', x) for global sample index `idx`
  void draw(uint64_t seed, long long idx, Eigen::MatrixXcd& H,
            cplx& x) const {
    CounterRng rng(seed, kSampleStream + static_cast<uint64_t>(idx));
    Eigen::VectorXcd g(n);
    for (int i = 0; i < n; ++i) g(i) = rng.next_cgauss();
    Eigen::VectorXcd y = Lc * g;
    for (int i = 0; i < n; ++i) y(i) *= winv(i);  // back to plain slots
    H.resize(m, m);
    for (int j = 0; j < m; ++j)
      for (int q = j; q < m; ++q) {
        H(j, q) = y(sym_slot(m, j, q));
        H(q, j) = H(j, q);
      }
    x = y(n - 1);
  }
};

// batched, order-independent Monte Carlo mean/stderr over worker threads;
// eval(idx, bucket_out) returns the integrand value and the bucket it goes to
template <typename Eval>
McDensityProfile run_mc(int m, double det_a, const McOptions& opts,
                        DensityMethod bucket_method, DensityMethod total_method,
                        const Eval& eval) {
  const int nbuckets = m + 1;
  const long long S = opts.samples;
  if (S <= 0) throw std::invalid_argument("sample count must be positive");
  const int B = static_cast<int>(std::min<long long>(opts.batches, S));
  int workers = opts.workers > 0
                    ? opts.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  // fixed partition into B batches by contiguous index ranges; workers pick
  // up whole batches so the per-batch sums do not depend on the worker count
  std::vector<std::vector<double>> batch_sum(nbuckets,
                                             std::vector<double>(B, 0.0));
  std::atomic<int> next_batch{0};
  auto work = [&]() {
    for (;;) {
      int b = next_batch.fetch_add(1);
      if (b >= B) return;
      long long lo = S * b / B, hi = S * (b + 1) / B;
      std::vector<double> local(nbuckets, 0.0);
      for (long long i = lo; i < hi; ++i) {
        int bucket = 0;
        double g = eval(i, bucket);
        local[bucket] += g;
      }
      for (int k = 0; k < nbuckets; ++k) batch_sum[k][b] = local[k];
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers - 1; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  const double norm = 1.0 / (std::pow(M_PI, m) * det_a);
  McDensityProfile prof;
  prof.by_index.resize(nbuckets);
  // batch means of the total, accumulated bucket-by-bucket in fixed order
  std::vector<double> total_batch(B, 0.0);
  for (int k = 0; k < nbuckets; ++k) {
    double sum = 0.0;
    for (int b = 0; b < B; ++b) {
      sum += batch_sum[k][b];
      total_batch[b] += batch_sum[k][b];
    }
    double mean = sum / S * norm;
    // batch means (equal-size batches up to rounding)
    double mb = 0.0, m2 = 0.0;
    for (int b = 0; b < B; ++b) {
      long long lo = S * b / B, hi = S * (b + 1) / B;
      double bm = batch_sum[k][b] / (hi - lo) * norm;
      mb += bm;
    }
    mb /= B;
    for (int b = 0; b < B; ++b) {
      long long lo = S * b / B, hi = S * (b + 1) / B;
      double bm = batch_sum[k][b] / (hi - lo) * norm;
      m2 += (bm - mb) * (bm - mb);
    }
    DensityResult r;
    r.method = bucket_method;
    r.samples = S;
    r.value = mean;
    r.standard_error = B > 1 ? std::sqrt(m2 / (B * (B - 1.0))) : 0.0;
    prof.by_index[k] = r;
  }
  {
    double sum = 0.0;
    for (int k = 0; k < nbuckets; ++k) sum += prof.by_index[k].value;
    double mb = 0.0, m2 = 0.0;
    std::vector<double> bm(B);
    for (int b = 0; b < B; ++b) {
      long long lo = S * b / B, hi = S * (b + 1) / B;
      bm[b] = total_batch[b] / (hi - lo) * norm;
      mb += bm[b];
    }
    mb /= B;
    for (int b = 0; b < B; ++b) m2 += (bm[b] - mb) * (bm[b] - mb);
    DensityResult r;
    r.method = total_method;
    r.samples = S;
    r.value = sum;  // exact partition: total is the bucket sum
    r.standard_error = B > 1 ? std::sqrt(m2 / (B * (B - 1.0))) : 0.0;
    prof.total = r;
  }
  return prof;
}

int negative_index(const Eigen::MatrixXcd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  int k = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 0.0) ++k;
  return k;
}

double real_det(const Eigen::MatrixXcd& A) {
  return A.determinant().real();
}

}  // namespace

McDensityProfile density_mc_profile(const Eigen::MatrixXcd& A,
                                    const LambdaMatrix& lambda,
                                    const McOptions& opts) {
  const int m = lambda.m;
  double det_a = real_det(A);
  if (det_a <= 0.0) throw std::invalid_argument("det A must be positive");
  Sampler sampler(lambda);
  auto eval = [&](long long idx, int& bucket) {
    Eigen::MatrixXcd H;
    cplx x;
    sampler.draw(opts.seed, idx, H, x);
    Eigen::MatrixXcd M = H * H.adjoint() -
                         std::norm(x) * Eigen::MatrixXcd::Identity(m, m);
    M = 0.5 * (M + M.adjoint().eval());
    if (m == 1) {
      double v = M(0, 0).real();
      bucket = v < 0.0 ? 1 : 0;
      return std::abs(v);
    }
    bucket = negative_index(M);
    return std::abs(real_det(M));
  };
  return run_mc(m, det_a, opts, DensityMethod::mcMorse,
                DensityMethod::mcNormalized, eval);
}

DensityResult density_mc_normalized(const Eigen::MatrixXcd& A,
                                    const LambdaMatrix& lambda,
                                    const McOptions& opts) {
  return density_mc_profile(A, lambda, opts).total;
}

DensityResult morse_density_mc(const Eigen::MatrixXcd& A,
                               const LambdaMatrix& lambda, int q,
                               const McOptions& opts) {
  const int m = lambda.m;
  if (q < m || q > 2 * m)
    throw std::invalid_argument("Morse index must lie in {m, ..., 2m}");
  return density_mc_profile(A, lambda, opts).by_index[q - m];
}

DensityResult density_mc_general_theta(const Eigen::MatrixXcd& A,
                                       const LambdaMatrix& lambda,
                                       const Eigen::MatrixXcd& theta,
                                       const McOptions& opts) {
  const int m = lambda.m;
  if (theta.rows() != m || theta.cols() != m)
    throw std::invalid_argument("curvature dimension mismatch");
  double det_a = real_det(A);
  if (det_a <= 0.0) throw std::invalid_argument("det A must be positive");
  Sampler sampler(lambda);
  auto eval = [&](long long idx, int& bucket) {
    Eigen::MatrixXcd H;
    cplx x;
    sampler.draw(opts.seed, idx, H, x);
    // complex Hessian block determinant |det [[H', x Theta],[xb Thetab, Hb']]|
    Eigen::MatrixXcd Hc(2 * m, 2 * m);
    Hc.topLeftCorner(m, m) = H;
    Hc.topRightCorner(m, m) = x * theta;
    Hc.bottomLeftCorner(m, m) = std::conj(x) * theta.conjugate();
    Hc.bottomRightCorner(m, m) = H.conjugate();
    bucket = 0;
    return std::abs(Hc.determinant());
  };
  McDensityProfile prof = run_mc(m, det_a, opts, DensityMethod::mcGeneralTheta,
                                 DensityMethod::mcGeneralTheta, eval);
  return prof.total;
}

CP1Counts exact_cp1_numbers(int N) {
  if (N < 1)
    throw std::invalid_argument("no critical-point ensemble for N = 0");
  Rational n(N);
  Rational den(3LL * N - 2);
  CP1Counts out;
  out.n_plus = Rational(4LL * (N - 1) * (N - 1)) / den;
  out.n_minus = Rational(1LL * N * N) / den;
  out.n_total = Rational(5LL * N * N - 8LL * N + 4) / den;
  return out;
}

Rational cp2_exact_number(int N) {
  if (N < 2) throw std::invalid_argument("CP^2 count needs N >= 2");
  Rational::Int n(N);
  Rational::Int num = 59 * n * n * n * n * n - 231 * n * n * n * n +
                      375 * n * n * n - 310 * n * n + 132 * n - 24;
  Rational::Int d = 3 * n - 2;
  return Rational(num, d * d * d);
}

}  // namespace critpt
