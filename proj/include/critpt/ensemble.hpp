#pragma once

// Gaussian random sections of O(N) -> CP^1: sampling, locating all
// connection critical points on the sphere, index classification, and the
// empirical statistics against the closed-form expectations.
//
// Sections are degree-N polynomials f(z) = sum_j c_j sqrt(binom(N,j)) z^j
// in the affine chart, with c_j iid standard complex Gaussians; the weights
// make E(f(z) conj(f(w))) = (1 + z wbar)^N.  Chart infinity uses the
// coordinate 1/z, where the section's coefficient vector is reversed.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "critpt/polynomial.hpp"

namespace critpt {

using cplx = std::complex<double>;

struct SectionSample {
  int degree = 0;
  std::vector<cplx> raw;  // iid standard complex Gaussian coefficients
  Poly weighted;          // c_j sqrt(binom(N,j)), chart-0 coefficients

  Poly chart_coeffs(int chart) const {
    if (chart == 0) return weighted;
    return Poly(weighted.rbegin(), weighted.rend());
  }
};

SectionSample sample_su2_section(int N, uint64_t seed, uint64_t trial);

struct Tolerances {
  double residual = 1e-10;    // |v| <= residual * (1 + |coeffs|)
  double dedupe = 1e-8;       // chordal distance between records
  double singular = 1e-10;    // |f| < singular * |coeffs| drops the point
  double degeneracy = 1e-10;  // |det Hc| relative floor
};

struct CriticalPointRecord {
  int chart = 0;        // 0 or infinity (1)
  cplx z;               // coordinate in that chart
  double residual = 0;  // |v(z)| after polish
  cplx f_value;
  cplx holo_hessian;    // H' in the adapted gauge at the point
  int top_index = 0;    // +-1, sign of det Hc
  int morse_index = 0;  // 1 or 2
  bool degenerate = false;
};

struct SolveOutcome {
  std::vector<CriticalPointRecord> points;
  int solver_failures = 0;
  int degenerate_count = 0;
  bool chern_ok = false;  // sum of top indices == N - 2
};

// v(z) = f'(z) - f(z) N zbar / (1 + |z|^2) in the given chart
cplx gradient_residual(const SectionSample& s, cplx z, int chart);

SolveOutcome find_critical_points_cp1(const SectionSample& s,
                                      const Tolerances& tol);

// classification of a polished point: sign of det Hc and the Morse index of
// log |s|_h^2 (1 = saddle, 2 = local maximum); asserts their consistency
struct Classification {
  cplx holo_hessian;
  int top_index;
  int morse_index;
  bool degenerate;
};
Classification classify_critical_point(const SectionSample& s, cplx z,
                                       int chart, const Tolerances& tol);

bool chern_sum_check(const std::vector<CriticalPointRecord>& records, int N);

struct TrialSummary {
  int degree = 0;
  long long trials = 0;          // accepted trials
  long long attempts = 0;        // including rejected ones
  long long rejected = 0;
  long long solver_failures = 0;
  long long degenerate_flags = 0;
  long long chern_violations = 0;
  double mean_plus = 0, stderr_plus = 0;
  double mean_minus = 0, stderr_minus = 0;
  double mean_total = 0, stderr_total = 0;
  std::vector<std::pair<int, int>> per_trial;  // (n_plus, n_minus), accepted
  double rejection_rate() const {
    return attempts ? double(rejected) / double(attempts) : 0.0;
  }
};

TrialSummary monte_carlo_counts(int N, long long trials, uint64_t seed,
                                const Tolerances& tol = {}, int workers = 0);

// Critical points over C of the perturbed-metric potential
//   log|e_L|^2 = -(1-eps)/k log(1+|p(z)|^2) - eps log(1+|z|^2),
// located by multi-start Newton seeded at the roots of p and p' and on a
// polar grid; p must have distinct roots.  Returns the deduplicated count.
struct MetricDemoResult {
  int count = 0;
  int unconverged_starts = 0;
  std::vector<cplx> points;
};
MetricDemoResult perturbed_metric_crit_points(const Poly& p, double eps);

}  // namespace critpt
