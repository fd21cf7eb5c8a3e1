#include "critpt/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "critpt/rng.hpp"

namespace critpt {

namespace {

constexpr uint64_t kTrialStream = 0x7215a1ULL;

double coeff_norm(const Poly& c) {
  double s = 0.0;
  for (auto& x : c) s += std::norm(x);
  return std::sqrt(s);
}

struct ChartFuncs {
  // FS potential pieces in a chart, K = N log(1 + |z|^2)
  int N;
  cplx Kz(cplx z) const { return double(N) * std::conj(z) / (1.0 + std::norm(z)); }
  cplx Kzz(cplx z) const {
    double t = 1.0 + std::norm(z);
    return -double(N) * std::conj(z) * std::conj(z) / (t * t);
  }
  double Kzzb(cplx z) const {
    double t = 1.0 + std::norm(z);
    return double(N) / (t * t);
  }
};

struct NewtonResult {
  cplx z;
  double residual;
  bool converged;
};

// Newton iteration on the real 2x2 system v(z) = 0, using the Wirtinger
// derivatives v_z = f'' - f' K_z - f K_zz and v_zb = -f K_zzb
NewtonResult newton_polish(const Poly& c, int N, cplx z, double res_tol,
                           int max_iter = 50) {
  const Poly dc = poly_derivative(c);
  const Poly ddc = poly_derivative(dc);
  const ChartFuncs K{N};
  const double scale = 1.0 + coeff_norm(c);
  for (int it = 0; it < max_iter; ++it) {
    cplx f = poly_eval(c, z);
    cplx fp = poly_eval(dc, z);
    cplx v = fp - f * K.Kz(z);
    if (std::abs(v) <= res_tol * scale) return {z, std::abs(v), true};
    cplx vz = poly_eval(ddc, z) - fp * K.Kz(z) - f * K.Kzz(z);
    cplx vzb = -f * K.Kzzb(z);
    // solve vz dz + vzb conj(dz) = -v as a real 2x2 system
    double a11 = (vz + vzb).real(), a12 = (-vz + vzb).imag();
    double a21 = (vz + vzb).imag(), a22 = (vz - vzb).real();
    double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-300) return {z, std::abs(v), false};
    double rx = -v.real(), ry = -v.imag();
    cplx dz((a22 * rx - a12 * ry) / det, (-a21 * rx + a11 * ry) / det);
    z += dz;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        std::abs(z) > 1e9)
      return {z, std::abs(v), false};
  }
  cplx f = poly_eval(c, z);
  cplx v = poly_eval(dc, z) - f * K.Kz(z);
  return {z, std::abs(v), std::abs(v) <= res_tol * scale};
}

// Eliminant of the bilinear critical system in one chart.  With
// u = f', d = N f - z f' the first equation reads u - w d = 0 (w stands for
// zbar), and substituting w = u/d into the conjugate equation leaves
// P = f Rt - z Qt, where Qt = sum_j conj(c_j) u^j d^(N-j) and
// Rt = sum_j j conj(c_j) u^(j-1) d^(N-j).
struct Eliminant {
  Poly P, u, d;
  bool d_degenerate = false;
  // P cancelled to zero: the critical set is not isolated (degenerate
  // section, e.g. a critical continuum)
  bool p_vanishes = false;
};

Eliminant build_eliminant(const Poly& c, int N) {
  Eliminant e;
  e.u = poly_derivative(c);
  e.d.assign(std::max<size_t>(c.size() - 1, 1), 0.0);
  for (size_t j = 0; j + 1 < c.size(); ++j) e.d[j] = double(N - j) * c[j];
  double cscale = poly_max_abs(c);
  if (poly_max_abs(e.d) < 1e-14 * cscale) {
    e.d_degenerate = true;
    return e;
  }
  std::vector<Poly> dp(N + 1), up(N + 1);
  dp[0] = {1.0};
  up[0] = {1.0};
  for (int k = 1; k <= N; ++k) {
    dp[k] = poly_mul(dp[k - 1], e.d);
    up[k] = poly_mul(up[k - 1], e.u);
  }
  Poly Qt{0.0}, Rt{0.0};
  for (int j = 0; j <= N; ++j) {
    cplx cj = std::conj(c[j]);
    if (cj == 0.0) continue;
    Qt = poly_add(Qt, poly_scale(poly_mul(up[j], dp[N - j]), cj));
    if (j >= 1)
      Rt = poly_add(Rt, poly_scale(poly_mul(up[j - 1], dp[N - j]),
                                   double(j) * cj));
  }
  Poly fr = poly_mul(c, Rt);
  Poly zq = poly_shift_up(Qt);
  e.P = poly_add(fr, poly_scale(zq, -1.0));
  double part_scale = std::max(poly_max_abs(fr), poly_max_abs(zq));
  e.p_vanishes = poly_max_abs(e.P) < 1e-12 * part_scale;
  return e;
}

double chordal_distance(int chart1, cplx z1, int chart2, cplx z2) {
  // homogeneous coordinates (a : b) with z = b/a in chart 0, z = a/b at inf
  cplx a1 = chart1 == 0 ? cplx(1.0) : z1;
  cplx b1 = chart1 == 0 ? z1 : cplx(1.0);
  cplx a2 = chart2 == 0 ? cplx(1.0) : z2;
  cplx b2 = chart2 == 0 ? z2 : cplx(1.0);
  double n1 = std::sqrt(std::norm(a1) + std::norm(b1));
  double n2 = std::sqrt(std::norm(a2) + std::norm(b2));
  return std::abs(a1 * b2 - a2 * b1) / (n1 * n2);
}

}  // namespace

SectionSample sample_su2_section(int N, uint64_t seed, uint64_t trial) {
  if (N < 1) throw std::invalid_argument("degree must be >= 1");
  SectionSample s;
  s.degree = N;
  s.raw.resize(N + 1);
  s.weighted.resize(N + 1);
  CounterRng rng(seed, kTrialStream + trial);
  double binom = 1.0;
  for (int j = 0; j <= N; ++j) {
    s.raw[j] = rng.next_cgauss();
    s.weighted[j] = s.raw[j] * std::sqrt(binom);
    binom = binom * double(N - j) / double(j + 1);
  }
  return s;
}

cplx gradient_residual(const SectionSample& s, cplx z, int chart) {
  Poly c = s.chart_coeffs(chart);
  cplx f = poly_eval(c, z);
  cplx fp = poly_eval(poly_derivative(c), z);
  return fp - f * double(s.degree) * std::conj(z) / (1.0 + std::norm(z));
}

Classification classify_critical_point(const SectionSample& s, cplx z,
                                       int chart, const Tolerances& tol) {
  const int N = s.degree;
  Poly c = s.chart_coeffs(chart);
  const ChartFuncs K{N};
  cplx f = poly_eval(c, z);
  cplx fp = poly_eval(poly_derivative(c), z);
  cplx fpp = poly_eval(poly_derivative(poly_derivative(c)), z);
  // H' in the gauge adapted at z: f -> e^{-g} f with g' = K_z, g'' = K_zz
  cplx kz = K.Kz(z), kzz = K.Kzz(z);
  cplx holo_hess = fpp - 2.0 * kz * fp + (kz * kz - kzz) * f;
  double theta = K.Kzzb(z);
  double det_hc = std::norm(holo_hess) - std::norm(f) * theta * theta;
  double det_scale = std::norm(holo_hess) + std::norm(f) * theta * theta;

  Classification cl;
  cl.holo_hessian = holo_hess;
  cl.degenerate = std::abs(det_hc) < tol.degeneracy * det_scale;
  cl.top_index = det_hc > 0.0 ? 1 : -1;
  // Morse index from |S|^2 = |H'|^2 / (Theta^2 |f|^2) in curvature-normalized
  // coordinates: > 1 means saddle (index 1), < 1 local maximum (index 2)
  double s2 = std::norm(holo_hess) / (theta * theta * std::norm(f));
  cl.morse_index = s2 > 1.0 ? 1 : 2;
  // the two index routes can only disagree on the degenerate boundary
  if ((cl.morse_index == 1) != (cl.top_index == 1)) cl.degenerate = true;
  return cl;
}

SolveOutcome find_critical_points_cp1(const SectionSample& s,
                                      const Tolerances& tol) {
  const int N = s.degree;
  SolveOutcome out;
  std::vector<CriticalPointRecord> records;
  const double singular_scale = coeff_norm(s.weighted);

  // tight consistency threshold: only candidates this close to the real
  // locus w = zbar count as solver failures when Newton diverges on them
  constexpr double kTightFilter = 1e-5;

  auto consider = [&](int chart, cplx z0, bool skip_w_filter,
                      const Eliminant& e, double w_filter) {
    bool must_converge = skip_w_filter;
    if (!skip_w_filter) {
      cplx dnum = poly_eval(e.d, z0);
      if (dnum == 0.0) return;
      cplx w = poly_eval(e.u, z0) / dnum;
      double mismatch = chordal_distance(0, w, 0, std::conj(z0));
      if (mismatch > w_filter) return;
      must_converge = mismatch <= kTightFilter;
    }
    // hand off candidates beyond the chart boundary before polishing: far
    // outside the unit disc the gradient cancels catastrophically and
    // Newton stalls at the roundoff floor of the wrong chart
    int rec_chart = chart;
    if (std::abs(z0) > 1.0) {
      rec_chart = 1 - chart;
      z0 = 1.0 / z0;
    }
    NewtonResult nr = newton_polish(s.chart_coeffs(rec_chart), N, z0,
                                    tol.residual);
    if (!nr.converged) {
      if (must_converge) out.solver_failures += 1;
      return;
    }
    cplx z = nr.z;
    if (std::abs(z) > 1.0) {
      // the polish crossed the boundary; move once more
      Poly oc = s.chart_coeffs(1 - rec_chart);
      NewtonResult nr2 = newton_polish(oc, N, 1.0 / z, tol.residual);
      if (nr2.converged) {
        rec_chart = 1 - rec_chart;
        z = nr2.z;
        nr = nr2;
      }
    }
    Poly rc = s.chart_coeffs(rec_chart);
    cplx f = poly_eval(rc, z);
    if (std::abs(f) < tol.singular * singular_scale) return;  // singular point

    CriticalPointRecord rec;
    rec.chart = rec_chart;
    rec.z = z;
    rec.residual = nr.residual;
    rec.f_value = f;
    Classification cl = classify_critical_point(s, z, rec_chart, tol);
    rec.holo_hessian = cl.holo_hessian;
    rec.top_index = cl.top_index;
    rec.morse_index = cl.morse_index;
    rec.degenerate = cl.degenerate;
    records.push_back(rec);
  };

  auto run_charts = [&](double w_filter) {
    records.clear();
    out.solver_failures = 0;
    int degenerate_charts = 0;
    for (int chart = 0; chart < 2; ++chart) {
      Poly c = s.chart_coeffs(chart);
      Eliminant e = build_eliminant(c, N);
      std::vector<cplx> cands;
      bool skip_w = false;
      if (e.d_degenerate) {
        // E1 degenerates to f'(z) = 0 independently of w
        cands = poly_roots(e.u);
        skip_w = true;
      } else if (poly_max_abs(e.u) < 1e-14 * poly_max_abs(c)) {
        // constant section in this chart: candidates where d vanishes or z=0
        cands = poly_roots(e.d);
        cands.push_back(0.0);
        skip_w = true;
      } else if (e.p_vanishes) {
        // identically vanishing eliminant: the critical set is a continuum
        // in this chart, nothing isolated to report
        degenerate_charts += 1;
        continue;
      } else {
        cands = poly_roots(e.P);
      }
      for (cplx z0 : cands) consider(chart, z0, skip_w, e, w_filter);
    }
    if (degenerate_charts == 2) out.solver_failures += 1;
    // dedupe on the sphere, keeping the smaller residual
    std::vector<CriticalPointRecord> unique;
    for (const auto& r : records) {
      bool dup = false;
      for (auto& u : unique) {
        if (chordal_distance(r.chart, r.z, u.chart, u.z) < tol.dedupe) {
          if (r.residual < u.residual) u = r;
          dup = true;
          break;
        }
      }
      if (!dup) unique.push_back(r);
    }
    records = std::move(unique);
  };

  run_charts(kTightFilter);
  if (!chern_sum_check(records, N)) {
    // a genuine root may have been dropped by the consistency filter when
    // its companion eigenvalue came out inaccurate; retry once, looser
    run_charts(1e-2);
  }

  out.points = records;
  for (const auto& r : out.points)
    if (r.degenerate) out.degenerate_count += 1;
  out.chern_ok = chern_sum_check(out.points, N);
  return out;
}

bool chern_sum_check(const std::vector<CriticalPointRecord>& records, int N) {
  int sum = 0;
  for (const auto& r : records) sum += r.top_index;
  return sum == N - 2;
}

TrialSummary monte_carlo_counts(int N, long long trials, uint64_t seed,
                                const Tolerances& tol, int workers) {
  if (N < 1 || trials < 1) throw std::invalid_argument("bad count request");
  TrialSummary sum;
  sum.degree = N;

  struct TrialResult {
    bool accepted = false;
    int n_plus = 0, n_minus = 0;
    int failures = 0, degenerates = 0, chern_bad = 0;
  };

  auto run_trial = [&](long long t) {
    TrialResult r;
    SectionSample s = sample_su2_section(N, seed, static_cast<uint64_t>(t));
    SolveOutcome o = find_critical_points_cp1(s, tol);
    r.failures = o.solver_failures;
    r.degenerates = o.degenerate_count;
    r.chern_bad = o.chern_ok ? 0 : 1;
    if (o.solver_failures == 0 && o.degenerate_count == 0 && o.chern_ok) {
      r.accepted = true;
      for (const auto& p : o.points) (p.top_index > 0 ? r.n_plus : r.n_minus)++;
    }
    return r;
  };

  // Rejected trials are resampled from subsequent substream indices.  The
  // accepted set is the first `trials` accepted indices in stream order, so
  // the outcome does not depend on the worker count.
  int nworkers = workers > 0
                     ? workers
                     : static_cast<int>(std::thread::hardware_concurrency());
  if (nworkers < 1) nworkers = 1;
  std::vector<TrialResult> results;
  long long scanned = 0;
  long long accepted_total = 0;
  while (accepted_total < trials) {
    long long want = trials - accepted_total;
    long long chunk = std::max<long long>(want + want / 16 + 8, 32);
    std::vector<TrialResult> block(chunk);
    std::atomic<long long> next{0};
    auto work = [&]() {
      for (;;) {
        long long i = next.fetch_add(1);
        if (i >= chunk) return;
        block[i] = run_trial(scanned + i);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nworkers - 1; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    for (long long i = 0; i < chunk && accepted_total < trials; ++i) {
      results.push_back(block[i]);
      if (block[i].accepted) accepted_total += 1;
    }
    scanned += chunk;
    if (scanned > 100 * trials + 1000)
      throw std::runtime_error("rejection rate pathologically high");
  }

  double sp = 0, sp2 = 0, sm = 0, sm2 = 0, st = 0, st2 = 0;
  for (const auto& r : results) {
    sum.attempts += 1;
    if (!r.accepted) {
      sum.rejected += 1;
      sum.solver_failures += r.failures;
      sum.degenerate_flags += r.degenerates;
      sum.chern_violations += r.chern_bad;
      continue;
    }
    sum.trials += 1;
    sum.per_trial.emplace_back(r.n_plus, r.n_minus);
    double tp = r.n_plus, tm = r.n_minus, tt = r.n_plus + r.n_minus;
    sp += tp;
    sp2 += tp * tp;
    sm += tm;
    sm2 += tm * tm;
    st += tt;
    st2 += tt * tt;
  }
  double T = double(sum.trials);
  auto finish = [T](double s1, double s2, double& mean, double& se) {
    mean = s1 / T;
    double var = T > 1 ? std::max(0.0, (s2 - s1 * s1 / T) / (T - 1)) : 0.0;
    se = std::sqrt(var / T);
  };
  finish(sp, sp2, sum.mean_plus, sum.stderr_plus);
  finish(sm, sm2, sum.mean_minus, sum.stderr_minus);
  finish(st, st2, sum.mean_total, sum.stderr_total);
  return sum;
}

MetricDemoResult perturbed_metric_crit_points(const Poly& p, double eps) {
  const int k = static_cast<int>(p.size()) - 1;
  if (k < 1 || poly_max_abs(p) == 0.0)
    throw std::invalid_argument("p must be nonconstant");
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("epsilon must lie in (0, 1)");

  std::vector<cplx> proots = poly_roots(p);
  for (size_t i = 0; i < proots.size(); ++i)
    for (size_t j = i + 1; j < proots.size(); ++j)
      if (std::abs(proots[i] - proots[j]) < 1e-8)
        throw std::invalid_argument("p must have distinct roots");

  const Poly dp = poly_derivative(p);
  const Poly ddp = poly_derivative(dp);
  const double a = (1.0 - eps) / k;

  // G = d/dz of the potential; critical points solve G = 0
  auto grad = [&](cplx z, cplx& G, cplx& Gz, cplx& Gzb) {
    cplx pv = poly_eval(p, z), pd = poly_eval(dp, z), pdd = poly_eval(ddp, z);
    double S = 1.0 + std::norm(pv);
    double T = 1.0 + std::norm(z);
    cplx pb = std::conj(pv);
    G = -a * pd * pb / S - eps * std::conj(z) / T;
    Gz = -a * (pdd * pb * S - pd * pb * pd * pb) / (S * S) +
         eps * std::conj(z) * std::conj(z) / (T * T);
    Gzb = -a * std::norm(pd) / (S * S) - eps / (T * T);
  };

  auto newton = [&](cplx z, bool& ok) {
    for (int it = 0; it < 80; ++it) {
      cplx G, Gz, Gzb;
      grad(z, G, Gz, Gzb);
      if (std::abs(G) < 1e-12) {
        ok = true;
        return z;
      }
      double a11 = (Gz + Gzb).real(), a12 = (-Gz + Gzb).imag();
      double a21 = (Gz + Gzb).imag(), a22 = (Gz - Gzb).real();
      double det = a11 * a22 - a12 * a21;
      if (std::abs(det) < 1e-300) break;
      double rx = -G.real(), ry = -G.imag();
      cplx dz((a22 * rx - a12 * ry) / det, (-a21 * rx + a11 * ry) / det);
      z += dz;
      if (!std::isfinite(z.real()) || std::abs(z) > 1e6) break;
    }
    ok = false;
    return z;
  };

  std::vector<cplx> starts = proots;
  for (cplx r : poly_roots(dp)) starts.push_back(r);
  double radius = 2.0;
  for (cplx r : proots) radius = std::max(radius, 2.0 * std::abs(r) + 1.0);
  for (int ir = 1; ir <= 8; ++ir)
    for (int ia = 0; ia < 16; ++ia) {
      double rr = radius * ir / 8.0;
      double th = 2.0 * M_PI * ia / 16.0;
      starts.push_back(cplx(rr * std::cos(th), rr * std::sin(th)));
    }

  MetricDemoResult res;
  for (cplx z0 : starts) {
    bool ok = false;
    cplx z = newton(z0, ok);
    if (!ok) {
      res.unconverged_starts += 1;
      continue;
    }
    bool dup = false;
    for (cplx q : res.points)
      if (std::abs(q - z) < 1e-6) {
        dup = true;
        break;
      }
    if (!dup) res.points.push_back(z);
  }
  res.count = static_cast<int>(res.points.size());
  return res;
}

}  // namespace critpt
