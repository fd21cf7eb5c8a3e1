#pragma once

// Local differential-geometric data of a Hermitian line bundle chart.
//
// Conventions: in a local frame e_L the potential is K = -log|e_L|^2_h,
// the Chern connection acts as nabla(f e_L) = (df - f dK) (x) e_L, and the
// curvature matrix is Theta_{jq} = d^2 K / dz_j dzbar_q.  A frame is
// "adapted" at z0 when all pure holomorphic derivatives of K of order <= 2
// vanish there.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "critpt/jets.hpp"

namespace critpt {

// Mixed derivatives d^a_z d^b_zbar K at a point, |a| + |b| <= 4.
// Stored as a DiagJetTable with order 4 per side; entries with
// |a| + |b| > 4 are unused and left at zero.
struct PotentialJets {
  int m = 0;
  DiagJetTable table;  // orders (4, 4), valid where |a|+|b| <= 4

  cplx value(const std::vector<int>& a, const std::vector<int>& b) const;
  double reality_defect() const;  // max |K(a,b) - conj(K(b,a))|
};

struct ChartGeometry {
  int m = 0;
  PotentialJets jets;
  Eigen::MatrixXcd theta;  // curvature matrix at the point
  // density rho of the chosen area form dV = rho dz (Lebesgue), m = 1 only
  std::optional<double> area_density;

  // r = (i/2) Theta_h / dV, defined for m = 1 with an area form chosen
  double r() const;

  // built-in geometries, all evaluated at a chart point z0
  static ChartGeometry fubini_study(int m, int N,
                                    const std::vector<cplx>& z0);
  static ChartGeometry flat(int m);
  // K(z) = sum_{j,q} H_{jq} z_j zbar_q with H Hermitian
  static ChartGeometry quadratic(const Eigen::MatrixXcd& H);
  // numeric path: K supplied as a real-valued callback, derivatives by
  // central finite differences (step 1e-4 for orders <= 2, larger steps
  // for orders 3-4 where the h^-k noise amplification forces it) with one
  // Richardson extrapolation
  static ChartGeometry from_callback(
      int m, const std::function<double(const std::vector<cplx>&)>& K,
      const std::vector<cplx>& z0,
      std::optional<double> area_density = std::nullopt);

  static ChartGeometry from_jets(PotentialJets jets,
                                 std::optional<double> area_density);
};

struct FrameGauge {
  // g(z) = sum_j a_j (z - z0)_j + 1/2 sum_{jq} b_{jq} (z-z0)_j (z-z0)_q,
  // holomorphic with g(z0) = 0; the gauged frame has potential K - 2 Re g
  Eigen::VectorXcd a;
  Eigen::MatrixXcd b;  // symmetric
  PotentialJets transformed;
};

struct CoordinateNormalization {
  Eigen::MatrixXcd L;      // L* Theta L = I, Hermitian square-root based
  double jacobian_factor;  // |det L|^2
};

// Theta_{jq} = d^2 K / dz_j dzbar_q; throws if the (1,1) jets are missing
Eigen::MatrixXcd curvature_at(const PotentialJets& jets);

FrameGauge adapt_frame(const ChartGeometry& geom);

CoordinateNormalization normalize_coordinates(const Eigen::MatrixXcd& theta);

}  // namespace critpt
