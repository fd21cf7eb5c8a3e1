#pragma once

// Dense univariate complex polynomials, ascending coefficients, and root
// extraction via the companion-matrix eigenproblem.

#include <complex>
#include <vector>

namespace critpt {

using Poly = std::vector<std::complex<double>>;

std::complex<double> poly_eval(const Poly& p, std::complex<double> z);
Poly poly_derivative(const Poly& p);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, std::complex<double> c);
Poly poly_shift_up(const Poly& a);  // multiply by z

// max |coefficient|
double poly_max_abs(const Poly& p);

// trims leading coefficients below rel_tol * max|coeff|; roots of the
// trimmed polynomial via the companion matrix.  An (effectively) constant
// polynomial has no roots.
std::vector<std::complex<double>> poly_roots(const Poly& p,
                                             double rel_tol = 1e-13);

}  // namespace critpt
