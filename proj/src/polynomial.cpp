#include "critpt/polynomial.hpp"

#include <Eigen/Eigenvalues>

namespace critpt {

std::complex<double> poly_eval(const Poly& p, std::complex<double> z) {
  std::complex<double> acc(0.0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly d(p.size() - 1);
  for (size_t j = 1; j < p.size(); ++j) d[j - 1] = double(j) * p[j];
  return d;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}

Poly poly_scale(const Poly& a, std::complex<double> c) {
  Poly b = a;
  for (auto& x : b) x *= c;
  return b;
}

Poly poly_shift_up(const Poly& a) {
  Poly b(a.size() + 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) b[i + 1] = a[i];
  return b;
}

double poly_max_abs(const Poly& p) {
  double m = 0.0;
  for (auto& c : p) m = std::max(m, std::abs(c));
  return m;
}

std::vector<std::complex<double>> poly_roots(const Poly& p, double rel_tol) {
  using cplx = std::complex<double>;
  double scale = poly_max_abs(p);
  if (scale == 0.0) return {};
  size_t deg = p.size() - 1;
  while (deg > 0 && std::abs(p[deg]) < rel_tol * scale) --deg;
  if (deg == 0) return {};

  // rescale the variable so the coefficient range is tame; eliminant
  // polynomials here can span 15+ orders of magnitude, which defeats the
  // unbalanced companion eigensolver
  size_t k0 = 0;
  while (k0 < deg && std::abs(p[k0]) < 1e-13 * scale) ++k0;
  double s = 1.0;
  if (k0 < deg) {
    double ratio = std::abs(p[k0]) / std::abs(p[deg]);
    s = std::pow(ratio, 1.0 / double(deg - k0));
    if (!(s > 1e-8 && s < 1e8)) s = 1.0;
  }
  Poly q(deg + 1);
  double sk = 1.0;
  for (size_t k = 0; k <= deg; ++k) {
    q[k] = p[k] * sk;
    sk *= s;
  }
  double qmax = poly_max_abs(q);
  for (auto& c : q) c /= qmax;
  Poly dq = poly_derivative(q);

  // companion eigenvalues of the scaled polynomial as initial guesses
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (size_t i = 0; i < deg; ++i) comp(i, deg - 1) = -q[i] / q[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> z(deg);
  double radius = 0.0;
  for (size_t k = 0; k < deg; ++k)
    radius = std::max(radius, std::abs(q[k] / q[deg]));
  radius = 2.0 * std::max(1.0, radius);
  for (size_t i = 0; i < deg; ++i) {
    cplx e = es.eigenvalues()(i);
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()) ||
        std::abs(e) > radius) {
      double th = 2.0 * M_PI * (double(i) + 0.5) / double(deg);
      e = radius * cplx(std::cos(th), std::sin(th));
    }
    z[i] = e;
  }

  // Aberth-Ehrlich sweeps: simultaneous Newton with a repulsion term that
  // keeps the approximations on distinct roots
  for (int sweep = 0; sweep < 100; ++sweep) {
    double worst = 0.0;
    for (size_t i = 0; i < deg; ++i) {
      cplx pv = poly_eval(q, z[i]);
      if (pv == cplx(0.0)) continue;
      cplx pd = poly_eval(dq, z[i]);
      cplx ratio = pd == cplx(0.0) ? cplx(0.0) : pv / pd;
      cplx rep(0.0);
      for (size_t j = 0; j < deg; ++j) {
        if (j == i) continue;
        cplx diff = z[i] - z[j];
        if (std::abs(diff) < 1e-300) diff = cplx(1e-300, 0.0);
        rep += 1.0 / diff;
      }
      cplx denom = 1.0 - ratio * rep;
      cplx corr = std::abs(denom) < 1e-300 ? ratio : ratio / denom;
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag()))
        corr = 0.0;
      z[i] -= corr;
      worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(z[i])));
    }
    if (worst < 1e-14) break;
  }

  for (auto& r : z) r *= s;
  return z;
}

}  // namespace critpt
