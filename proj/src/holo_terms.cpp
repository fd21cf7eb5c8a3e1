#include "critpt/holo_terms.hpp"

#include <cmath>

namespace critpt {

namespace {

std::complex<double> ipow(std::complex<double> b, int e) {
  if (e < 0) return 1.0 / ipow(b, -e);
  std::complex<double> r(1.0);
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

}  // namespace

TermSum TermSum::power(int m, double coef, int e) {
  TermSum s(m);
  HoloTerm t;
  t.coef = coef;
  t.p.assign(m, 0);
  t.q.assign(m, 0);
  t.e = e;
  s.add(std::move(t));
  return s;
}

TermSum TermSum::d_z(int j) const {
  TermSum out(m_);
  for (const HoloTerm& t : terms_) {
    if (t.p[j] > 0) {
      HoloTerm a = t;
      a.coef *= t.p[j];
      a.p[j] -= 1;
      out.add(std::move(a));
    }
    if (t.e != 0) {
      HoloTerm b = t;
      b.coef *= t.e;
      b.q[j] += 1;
      b.e -= 1;
      out.add(std::move(b));
    }
  }
  return out;
}

TermSum TermSum::d_wbar(int j) const {
  TermSum out(m_);
  for (const HoloTerm& t : terms_) {
    if (t.q[j] > 0) {
      HoloTerm a = t;
      a.coef *= t.q[j];
      a.q[j] -= 1;
      out.add(std::move(a));
    }
    if (t.e != 0) {
      HoloTerm b = t;
      b.coef *= t.e;
      b.p[j] += 1;
      b.e -= 1;
      out.add(std::move(b));
    }
  }
  return out;
}

std::complex<double> TermSum::eval(
    const std::vector<std::complex<double>>& z,
    const std::vector<std::complex<double>>& wbar) const {
  std::complex<double> u(0.0);
  for (int j = 0; j < m_; ++j) u += z[j] * wbar[j];
  std::complex<double> base = 1.0 + u;
  std::complex<double> acc(0.0);
  for (const HoloTerm& t : terms_) {
    std::complex<double> v(t.coef, 0.0);
    for (int j = 0; j < m_; ++j) {
      for (int k = 0; k < t.p[j]; ++k) v *= z[j];
      for (int k = 0; k < t.q[j]; ++k) v *= wbar[j];
    }
    v *= ipow(base, t.e);
    acc += v;
  }
  return acc;
}

}  // namespace critpt
