#pragma once

// Closed-form differentiation of functions built from (1 + z . wbar).
//
// A TermSum is a list of terms  c * prod_j z_j^{p_j} * prod_j wbar_j^{q_j}
// * (1 + z . wbar)^e  with integer exponent e (possibly negative).  The
// family is closed under d/dz_j and d/dwbar_j, which covers the Fubini-Study
// kernels (1 + z . wbar)^N and, from order one on, the derivatives of the
// potential N log(1 + z . wbar).

#include <complex>
#include <vector>

namespace critpt {

struct HoloTerm {
  double coef;
  std::vector<int> p;  // powers of z_j
  std::vector<int> q;  // powers of wbar_j
  int e;               // power of (1 + z . wbar)
};

class TermSum {
 public:
  explicit TermSum(int m) : m_(m) {}
  static TermSum power(int m, double coef, int e);  // coef * (1+z.wbar)^e

  int vars() const { return m_; }
  void add(HoloTerm t) { terms_.push_back(std::move(t)); }

  TermSum d_z(int j) const;
  TermSum d_wbar(int j) const;

  std::complex<double> eval(const std::vector<std::complex<double>>& z,
                            const std::vector<std::complex<double>>& wbar) const;

 private:
  int m_;
  std::vector<HoloTerm> terms_;
};

}  // namespace critpt
