#include "critpt/geometry.hpp"

#include <cmath>
#include <map>

#include "critpt/holo_terms.hpp"

namespace critpt {

cplx PotentialJets::value(const std::vector<int>& a,
                          const std::vector<int>& b) const {
  int da = 0, db = 0;
  for (int x : a) da += x;
  for (int x : b) db += x;
  if (da + db > 4)
    throw std::out_of_range("potential jets stored up to total order 4");
  return table.value(a, b);
}

double PotentialJets::reality_defect() const {
  const MultiIndexSet& s = MultiIndexSet::get(m, 4);
  double worst = 0.0;
  for (int ia = 0; ia < s.size(); ++ia)
    for (int ib = 0; ib < s.size(); ++ib) {
      if (s.degree(ia) + s.degree(ib) > 4) continue;
      cplx d = table.at(ia, ib) - std::conj(table.at(ib, ia));
      worst = std::max(worst, std::abs(d));
    }
  return worst;
}

double ChartGeometry::r() const {
  if (m != 1) throw std::invalid_argument("r is defined only for m = 1");
  if (!area_density)
    throw std::invalid_argument("r requires a chosen area form");
  return theta(0, 0).real() / *area_density;
}

Eigen::MatrixXcd curvature_at(const PotentialJets& jets) {
  const int m = jets.m;
  const MultiIndexSet& s = MultiIndexSet::get(m, 4);
  Eigen::MatrixXcd theta(m, m);
  for (int j = 0; j < m; ++j)
    for (int q = 0; q < m; ++q) {
      std::vector<int> ej(m, 0), eq(m, 0);
      ej[j] = 1;
      eq[q] = 1;
      if (s.id(ej) < 0 || s.id(eq) < 0)
        throw std::invalid_argument("missing (1,1) jet entries");
      theta(j, q) = jets.table.at(s.id(ej), s.id(eq));
    }
  // enforce exact Hermitian symmetry of the returned matrix
  return 0.5 * (theta + theta.adjoint().eval());
}

// ---------------------------------------------------------------------------
// built-in geometries
// ---------------------------------------------------------------------------

ChartGeometry ChartGeometry::from_jets(PotentialJets jets,
                                       std::optional<double> area_density) {
  ChartGeometry g;
  g.m = jets.m;
  g.theta = curvature_at(jets);
  g.jets = std::move(jets);
  g.area_density = area_density;
  return g;
}

ChartGeometry ChartGeometry::fubini_study(int m, int N,
                                          const std::vector<cplx>& z0) {
  // K = N log(1 + |z|^2); derivatives of order >= 1 are closed under the
  // term algebra seeded by d_{z_j} K = N wbar_j (1 + z.wbar)^{-1}
  PotentialJets pj;
  pj.m = m;
  pj.table = DiagJetTable(m, 4, 4);
  std::vector<cplx> zb(m);
  for (int j = 0; j < m; ++j) zb[j] = std::conj(z0[j]);

  double n2 = 0.0;
  for (int j = 0; j < m; ++j) n2 += std::norm(z0[j]);
  const MultiIndexSet& s = MultiIndexSet::get(m, 4);
  pj.table.at(0, 0) = N * std::log1p(n2);

  // cache: derivative term-sums indexed by (a, b)
  std::map<std::pair<int, int>, TermSum> cache;
  std::function<const TermSum&(int, int)> deriv = [&](int ia,
                                                      int ib) -> const TermSum& {
    auto key = std::make_pair(ia, ib);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // peel one derivative off; the base case is a first z- or wbar-derivative
    const std::vector<int>& ea = s.exps(ia);
    const std::vector<int>& eb = s.exps(ib);
    if (s.degree(ia) > 0) {
      int j = 0;
      while (ea[j] == 0) ++j;
      if (s.degree(ia) == 1 && s.degree(ib) == 0) {
        TermSum base(m);
        HoloTerm t;
        t.coef = N;
        t.p.assign(m, 0);
        t.q.assign(m, 0);
        t.q[j] = 1;
        t.e = -1;
        base.add(std::move(t));
        return cache.emplace(key, std::move(base)).first->second;
      }
      std::vector<int> lower = ea;
      lower[j] -= 1;
      const TermSum& prev = deriv(s.id(lower), ib);
      return cache.emplace(key, prev.d_z(j)).first->second;
    }
    int j = 0;
    while (eb[j] == 0) ++j;
    if (s.degree(ib) == 1) {
      TermSum base(m);
      HoloTerm t;
      t.coef = N;
      t.p.assign(m, 0);
      t.q.assign(m, 0);
      t.p[j] = 1;
      t.e = -1;
      base.add(std::move(t));
      return cache.emplace(key, std::move(base)).first->second;
    }
    std::vector<int> lower = eb;
    lower[j] -= 1;
    const TermSum& prev = deriv(ia, s.id(lower));
    return cache.emplace(key, prev.d_wbar(j)).first->second;
  };

  for (int ia = 0; ia < s.size(); ++ia)
    for (int ib = 0; ib < s.size(); ++ib) {
      int d = s.degree(ia) + s.degree(ib);
      if (d == 0 || d > 4) continue;
      pj.table.at(ia, ib) = deriv(ia, ib).eval(z0, zb);
    }

  std::optional<double> rho;
  if (m == 1) rho = 1.0 / ((1.0 + n2) * (1.0 + n2));  // dV = omega_FS
  return from_jets(std::move(pj), rho);
}

ChartGeometry ChartGeometry::flat(int m) {
  PotentialJets pj;
  pj.m = m;
  pj.table = DiagJetTable(m, 4, 4);
  ChartGeometry g;
  g.m = m;
  g.jets = std::move(pj);
  g.theta = Eigen::MatrixXcd::Zero(m, m);
  return g;
}

ChartGeometry ChartGeometry::quadratic(const Eigen::MatrixXcd& H) {
  const int m = static_cast<int>(H.rows());
  PotentialJets pj;
  pj.m = m;
  pj.table = DiagJetTable(m, 4, 4);
  const MultiIndexSet& s = MultiIndexSet::get(m, 4);
  for (int j = 0; j < m; ++j)
    for (int q = 0; q < m; ++q) {
      std::vector<int> ej(m, 0), eq(m, 0);
      ej[j] = 1;
      eq[q] = 1;
      pj.table.at(s.id(ej), s.id(eq)) = H(j, q);
    }
  return from_jets(std::move(pj), std::nullopt);
}

// ---------------------------------------------------------------------------
// finite-difference callback path
// ---------------------------------------------------------------------------

namespace {

// central-difference weights on offsets -2..2 for derivative order d
const double* stencil(int d) {
  static const double w0[5] = {0, 0, 1, 0, 0};
  static const double w1[5] = {0, -0.5, 0, 0.5, 0};
  static const double w2[5] = {0, 1, -2, 1, 0};
  static const double w3[5] = {-0.5, 1, 0, -1, 0.5};
  static const double w4[5] = {1, -4, 6, -4, 1};
  switch (d) {
    case 0: return w0;
    case 1: return w1;
    case 2: return w2;
    case 3: return w3;
    default: return w4;
  }
}

// mixed real partial of given per-axis orders at x0, step h, 2m axes
double real_partial(const std::function<double(const std::vector<double>&)>& f,
                    const std::vector<double>& x0, const std::vector<int>& ord,
                    double h,
                    std::map<std::vector<int>, double>& value_cache) {
  const int n = static_cast<int>(x0.size());
  int total = 0;
  for (int o : ord) total += o;
  // tensor-product stencil over the axes with nonzero order
  std::vector<int> axes;
  for (int i = 0; i < n; ++i)
    if (ord[i] > 0) axes.push_back(i);
  double acc = 0.0;
  std::vector<int> off(n, 0);
  std::function<void(size_t, double)> rec = [&](size_t k, double w) {
    if (k == axes.size()) {
      if (w == 0.0) return;
      auto it = value_cache.find(off);
      double fv;
      if (it != value_cache.end()) {
        fv = it->second;
      } else {
        std::vector<double> x = x0;
        for (int i = 0; i < n; ++i) x[i] += off[i] * h;
        fv = f(x);
        value_cache[off] = fv;
      }
      acc += w * fv;
      return;
    }
    int ax = axes[k];
    const double* st = stencil(ord[ax]);
    for (int o = -2; o <= 2; ++o) {
      if (st[o + 2] == 0.0) continue;
      off[ax] = o;
      rec(k + 1, w * st[o + 2]);
    }
    off[ax] = 0;
  };
  if (axes.empty()) {
    std::vector<double> x = x0;
    return f(x);
  }
  rec(0, 1.0);
  return acc / std::pow(h, total);
}

}  // namespace

ChartGeometry ChartGeometry::from_callback(
    int m, const std::function<double(const std::vector<cplx>&)>& K,
    const std::vector<cplx>& z0, std::optional<double> area_density) {
  PotentialJets pj;
  pj.m = m;
  pj.table = DiagJetTable(m, 4, 4);
  const MultiIndexSet& s = MultiIndexSet::get(m, 4);
  const int n = 2 * m;

  std::vector<double> x0(n);
  for (int j = 0; j < m; ++j) {
    x0[2 * j] = z0[j].real();
    x0[2 * j + 1] = z0[j].imag();
  }
  auto freal = [&](const std::vector<double>& x) {
    std::vector<cplx> z(m);
    for (int j = 0; j < m; ++j) z[j] = cplx(x[2 * j], x[2 * j + 1]);
    return K(z);
  };

  // real partial with one Richardson extrapolation, step chosen per order:
  // the divided differences amplify roundoff by h^-total, so orders 3 and 4
  // need larger steps than the 1e-4 used for orders <= 2
  std::map<int, std::map<std::vector<int>, double>> cache_h, cache_h2;
  auto partial = [&](const std::vector<int>& ord) {
    int total = 0;
    for (int o : ord) total += o;
    double h = total <= 2 ? 1e-4 : (total == 3 ? 1e-3 : 1e-2);
    int key = total;
    double d1 = real_partial(freal, x0, ord, h, cache_h[key]);
    double d2 = real_partial(freal, x0, ord, h / 2, cache_h2[key]);
    return (4.0 * d2 - d1) / 3.0;
  };

  // Wirtinger combination: d^a_z d^b_zbar = prod over variables of
  // ((dx - i dy)/2)^(a_j) ((dx + i dy)/2)^(b_j), expanded binomially
  for (int ia = 0; ia < s.size(); ++ia) {
    for (int ib = 0; ib < s.size(); ++ib) {
      if (s.degree(ia) + s.degree(ib) > 4) continue;
      const std::vector<int>& a = s.exps(ia);
      const std::vector<int>& b = s.exps(ib);
      // expand into real partials: iterate over how many of each factor
      // goes to the y-axis
      cplx total(0.0);
      std::vector<int> ka(m), kb(m);
      std::function<void(int, cplx)> expand = [&](int j, cplx coef) {
        if (j == m) {
          std::vector<int> ord(n, 0);
          for (int l = 0; l < m; ++l) {
            ord[2 * l] = (a[l] - ka[l]) + (b[l] - kb[l]);
            ord[2 * l + 1] = ka[l] + kb[l];
          }
          total += coef * partial(ord);
          return;
        }
        auto binom = [](int nn, int kk) {
          double r = 1;
          for (int i = 1; i <= kk; ++i) r = r * (nn - kk + i) / i;
          return r;
        };
        for (ka[j] = 0; ka[j] <= a[j]; ++ka[j])
          for (kb[j] = 0; kb[j] <= b[j]; ++kb[j]) {
            cplx c = coef;
            c *= binom(a[j], ka[j]) * binom(b[j], kb[j]);
            // (-i)^ka from the holomorphic side, (+i)^kb from the other
            cplx ii(0.0, 1.0);
            for (int t = 0; t < ka[j]; ++t) c *= -ii;
            for (int t = 0; t < kb[j]; ++t) c *= ii;
            c /= std::pow(2.0, a[j] + b[j]);
            expand(j + 1, c);
          }
        ka[j] = kb[j] = 0;
      };
      expand(0, cplx(1.0));
      pj.table.at(ia, ib) = total;
    }
  }
  return from_jets(std::move(pj), area_density);
}

// ---------------------------------------------------------------------------
// gauge and coordinate normalization
// ---------------------------------------------------------------------------

FrameGauge adapt_frame(const ChartGeometry& geom) {
  const int m = geom.m;
  const MultiIndexSet& s = MultiIndexSet::get(m, 4);
  FrameGauge gauge;
  gauge.a = Eigen::VectorXcd(m);
  gauge.b = Eigen::MatrixXcd(m, m);
  for (int j = 0; j < m; ++j) {
    std::vector<int> ej(m, 0);
    ej[j] = 1;
    gauge.a(j) = geom.jets.table.at(s.id(ej), 0);
    for (int q = 0; q < m; ++q) {
      std::vector<int> ejq(m, 0);
      ejq[j] += 1;
      ejq[q] += 1;
      gauge.b(j, q) = geom.jets.table.at(s.id(ejq), 0);
    }
  }

  // K - 2 Re g: only pure jets of order 1 and 2 change (g has degree 2 and
  // g(z0) = 0, so the value and all mixed/higher-pure entries are untouched)
  gauge.transformed = geom.jets;
  for (int ia = 0; ia < s.size(); ++ia) {
    if (s.degree(ia) == 0 || s.degree(ia) > 2) continue;
    const std::vector<int>& e = s.exps(ia);
    cplx gderiv;
    if (s.degree(ia) == 1) {
      int j = 0;
      while (e[j] == 0) ++j;
      gderiv = gauge.a(j);
    } else {
      int j = -1, q = -1;
      for (int k = 0; k < m; ++k)
        for (int c = 0; c < e[k]; ++c) (j < 0 ? j : q) = k;
      gderiv = gauge.b(j, q);
    }
    gauge.transformed.table.at(ia, 0) -= gderiv;
    gauge.transformed.table.at(0, ia) -= std::conj(gderiv);
  }
  return gauge;
}

CoordinateNormalization normalize_coordinates(const Eigen::MatrixXcd& theta) {
  const int m = static_cast<int>(theta.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(theta);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("curvature eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  double emax = ev.cwiseAbs().maxCoeff();
  double det = 1.0;
  for (int i = 0; i < m; ++i) det *= ev(i);
  if (ev.minCoeff() <= 0.0 ||
      std::abs(det) < 1e-10 * std::pow(std::max(emax, 1e-300), m))
    throw std::invalid_argument("curvature not definite");
  Eigen::VectorXd inv_sqrt = ev.cwiseSqrt().cwiseInverse();
  CoordinateNormalization cn;
  cn.L = es.eigenvectors() * inv_sqrt.asDiagonal() *
         es.eigenvectors().adjoint();
  cn.jacobian_factor = std::norm(cn.L.determinant());
  return cn;
}

}  // namespace critpt
