#pragma once

// Covariance (Szego) kernels of section ensembles and their diagonal
// derivative jets.
//
// The local kernel in a frame is F(z, w) = E(f(z) conj(f(w))), holomorphic
// in z and anti-holomorphic in w.  The jet table holds d^a_z d^b_wbar F on
// the diagonal for |a|, |b| <= 2, which is everything the 2-jet covariance
// blocks need.

#include <functional>
#include <memory>
#include <vector>

#include "critpt/jets.hpp"

namespace critpt {

// one element of a finite basis: value and z-derivatives up to order 2
struct BasisFunction {
  // deriv(z, alpha) = d^alpha f (z); alpha is a multi-index over m vars
  std::function<cplx(const std::vector<cplx>&, const std::vector<int>&)> deriv;
};

// a polynomial in one variable as a basis element, ascending coefficients
BasisFunction polynomial_basis_function(std::vector<cplx> coeffs);

class KernelSpec {
 public:
  enum class Kind { SU2, FSProjective, FiniteBasis };

  static KernelSpec su2(int N);                 // F = (1 + z wbar)^N, m = 1
  static KernelSpec fs_projective(int m, int N);  // F = (1 + z.wbar)^N
  static KernelSpec finite_basis(int m, std::vector<BasisFunction> basis);

  Kind kind() const { return kind_; }
  int vars() const { return m_; }
  int degree() const { return N_; }
  const std::vector<BasisFunction>& basis() const { return basis_; }

  // overall positive constant multiplying F (density formulas are invariant
  // under it; exposed for the scale-invariance checks)
  double scale() const { return scale_; }
  KernelSpec scaled(double c) const;

 private:
  KernelSpec() = default;
  Kind kind_ = Kind::SU2;
  int m_ = 1, N_ = 0;
  double scale_ = 1.0;
  std::vector<BasisFunction> basis_;
};

struct KernelJets {
  int m = 0;
  DiagJetTable table;  // orders (2, 2)

  cplx value(const std::vector<int>& a, const std::vector<int>& b) const {
    return table.value(a, b);
  }
  double diagonal() const { return table.at(0, 0).real(); }
};

// Evaluates all entries with |a|, |b| <= 2 at z = w = z0 and checks the
// Hermitian symmetry and F(z0,z0) > 0 invariants.
KernelJets kernel_jets(const KernelSpec& spec, const std::vector<cplx>& z0);

// Validation oracle: every entry of order >= 1 is one Wirtinger derivative
// of a lower-order entry restricted to the diagonal; compare it against a
// central difference of that restriction.  Returns the max of
// |analytic - fd| / (1 + |analytic|) over all checked entries.
double fd_jet_check(const KernelSpec& spec, const std::vector<cplx>& z0,
                    double step);

// Rank of the 2-jet evaluation map on a finite basis (diagnostic for the
// spanning property; the paper states no tolerance criterion, so the
// singular-value cutoff is exposed).
int jet_map_rank(const KernelSpec& spec, const std::vector<cplx>& z0,
                 double sv_cutoff = 1e-10);

}  // namespace critpt
