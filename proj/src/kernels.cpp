#include "critpt/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "critpt/holo_terms.hpp"

namespace critpt {

BasisFunction polynomial_basis_function(std::vector<cplx> coeffs) {
  BasisFunction bf;
  bf.deriv = [c = std::move(coeffs)](const std::vector<cplx>& z,
                                     const std::vector<int>& alpha) {
    int d = alpha.empty() ? 0 : alpha[0];
    // d-th derivative of sum c_j z^j, Horner on the shifted coefficients
    cplx acc(0.0);
    for (int j = static_cast<int>(c.size()) - 1; j >= d; --j) {
      double fall = 1.0;
      for (int t = 0; t < d; ++t) fall *= (j - t);
      acc = acc * z[0] + fall * c[j];
    }
    return acc;
  };
  return bf;
}

KernelSpec KernelSpec::su2(int N) {
  if (N < 0) throw std::invalid_argument("su2 kernel needs N >= 0");
  KernelSpec s;
  s.kind_ = Kind::SU2;
  s.m_ = 1;
  s.N_ = N;
  return s;
}

KernelSpec KernelSpec::fs_projective(int m, int N) {
  if (m < 1 || N < 0) throw std::invalid_argument("bad FS kernel parameters");
  KernelSpec s;
  s.kind_ = Kind::FSProjective;
  s.m_ = m;
  s.N_ = N;
  return s;
}

KernelSpec KernelSpec::finite_basis(int m, std::vector<BasisFunction> basis) {
  if (basis.empty()) throw std::invalid_argument("empty basis");
  KernelSpec s;
  s.kind_ = Kind::FiniteBasis;
  s.m_ = m;
  s.basis_ = std::move(basis);
  return s;
}

KernelSpec KernelSpec::scaled(double c) const {
  if (c <= 0.0) throw std::invalid_argument("kernel scale must be positive");
  KernelSpec s = *this;
  s.scale_ *= c;
  return s;
}

namespace {

// jet table of d^a_z d^b_wbar F at an arbitrary (z, w), not necessarily on
// the diagonal; the fd oracle differences these in one variable at a time
DiagJetTable jet_table_at(const KernelSpec& spec, const std::vector<cplx>& z,
                          const std::vector<cplx>& w) {
  const int m = spec.vars();
  DiagJetTable table(m, 2, 2);
  const MultiIndexSet& s = MultiIndexSet::get(m, 2);

  if (spec.kind() == KernelSpec::Kind::FiniteBasis) {
    for (int ia = 0; ia < s.size(); ++ia)
      for (int ib = 0; ib < s.size(); ++ib) {
        cplx acc(0.0);
        for (size_t k = 0; k < spec.basis().size(); ++k) {
          cplx da, db;
          try {
            da = spec.basis()[k].deriv(z, s.exps(ia));
            db = spec.basis()[k].deriv(w, s.exps(ib));
          } catch (const std::exception& e) {
            throw std::runtime_error("basis oracle failed at index " +
                                     std::to_string(k) + ": " + e.what());
          }
          acc += da * std::conj(db);
        }
        table.at(ia, ib) = spec.scale() * acc;
      }
    return table;
  }

  // (1 + z . wbar)^N, exact term differentiation
  std::vector<cplx> wb(m);
  for (int j = 0; j < m; ++j) wb[j] = std::conj(w[j]);
  std::vector<TermSum> zderivs;  // indexed by z-side id
  zderivs.reserve(s.size());
  for (int ia = 0; ia < s.size(); ++ia) {
    if (ia == 0) {
      zderivs.push_back(TermSum::power(m, spec.scale(), spec.degree()));
      continue;
    }
    const std::vector<int>& e = s.exps(ia);
    int j = 0;
    while (e[j] == 0) ++j;
    std::vector<int> lower = e;
    lower[j] -= 1;
    zderivs.push_back(zderivs[s.id(lower)].d_z(j));
  }
  for (int ia = 0; ia < s.size(); ++ia) {
    for (int ib = 0; ib < s.size(); ++ib) {
      const std::vector<int>& e = s.exps(ib);
      if (ib == 0) {
        table.at(ia, ib) = zderivs[ia].eval(z, wb);
        continue;
      }
      TermSum t = zderivs[ia];
      for (int j = 0; j < m; ++j)
        for (int c = 0; c < e[j]; ++c) t = t.d_wbar(j);
      table.at(ia, ib) = t.eval(z, wb);
    }
  }
  return table;
}

}  // namespace

KernelJets kernel_jets(const KernelSpec& spec, const std::vector<cplx>& z0) {
  const int m = spec.vars();
  if (static_cast<int>(z0.size()) != m)
    throw std::invalid_argument("point dimension mismatch");
  KernelJets out;
  out.m = m;
  out.table = jet_table_at(spec, z0, z0);
  if (out.table.at(0, 0).real() <= 0.0)
    throw std::runtime_error("kernel diagonal not positive at the point");
  if (out.table.hermitian_defect() > 1e-12)
    throw std::runtime_error("kernel jets lost Hermitian symmetry");
  return out;
}

double fd_jet_check(const KernelSpec& spec, const std::vector<cplx>& z0,
                    double step) {
  if (step < 1e-6 || step > 1e-2)
    throw std::invalid_argument("fd step outside [1e-6, 1e-2]");
  const int m = spec.vars();
  const MultiIndexSet& s = MultiIndexSet::get(m, 2);
  DiagJetTable center = jet_table_at(spec, z0, z0);

  // F is holomorphic in z and anti-holomorphic in w, so each entry of
  // order >= 1 is a plain one-variable derivative of a lower-order entry:
  // a real-axis central difference in that variable alone checks it
  std::vector<DiagJetTable> zp(m), zm(m), wp(m), wm(m);
  for (int j = 0; j < m; ++j) {
    std::vector<cplx> a = z0, b = z0;
    a[j] += step;
    b[j] -= step;
    zp[j] = jet_table_at(spec, a, z0);
    zm[j] = jet_table_at(spec, b, z0);
    wp[j] = jet_table_at(spec, z0, a);
    wm[j] = jet_table_at(spec, z0, b);
  }

  double worst = 0.0;
  for (int ia = 0; ia < s.size(); ++ia)
    for (int ib = 0; ib < s.size(); ++ib) {
      if (s.degree(ia) + s.degree(ib) == 0) continue;
      cplx analytic = center.at(ia, ib);
      cplx fd;
      if (s.degree(ia) > 0) {
        const std::vector<int>& e = s.exps(ia);
        int j = 0;
        while (e[j] == 0) ++j;
        std::vector<int> lower = e;
        lower[j] -= 1;
        int il = s.id(lower);
        fd = (zp[j].at(il, ib) - zm[j].at(il, ib)) / (2.0 * step);
      } else {
        const std::vector<int>& e = s.exps(ib);
        int j = 0;
        while (e[j] == 0) ++j;
        std::vector<int> lower = e;
        lower[j] -= 1;
        int il = s.id(lower);
        // stepping w_j by a real amount steps wbar_j equally
        fd = (wp[j].at(ia, il) - wm[j].at(ia, il)) / (2.0 * step);
      }
      worst = std::max(worst,
                       std::abs(analytic - fd) / (1.0 + std::abs(analytic)));
    }
  return worst;
}

int jet_map_rank(const KernelSpec& spec, const std::vector<cplx>& z0,
                 double sv_cutoff) {
  if (spec.kind() != KernelSpec::Kind::FiniteBasis)
    throw std::invalid_argument("rank diagnostic applies to finite bases");
  const int m = spec.vars();
  const MultiIndexSet& s = MultiIndexSet::get(m, 2);
  const int rows = s.size();
  const int cols = static_cast<int>(spec.basis().size());
  Eigen::MatrixXcd J(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) J(r, c) = spec.basis()[c].deriv(z0, s.exps(r));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > sv_cutoff * std::max(smax, 1.0)) ++rank;
  return rank;
}

}  // namespace critpt
