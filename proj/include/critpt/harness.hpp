#pragma once

// Run configuration, report generation, and the cross-method comparison
// pipelines that tie kernels, geometry, jpd and density together.

#include <optional>
#include <string>

#include <json.hpp>

#include "critpt/density.hpp"
#include "critpt/ensemble.hpp"
#include "critpt/geometry.hpp"
#include "critpt/jpd.hpp"
#include "critpt/kernels.hpp"

namespace critpt {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kSchemaVersion = "1";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// assembly pipelines (dimension one and the CP^2 case)
// ---------------------------------------------------------------------------

// A and Lambda in an adapted frame at z0, with coordinates rescaled to one
// of the two normalizations the closed forms expect.
enum class Dim1Normalization {
  volume,     // dV = Lebesgue at the point; eigenvalue form uses Q_r
  curvature,  // Theta = 1 at the point; Q = diag(1,-1), density per
              // curvature area, multiply by r to convert to per dV
};

struct Dim1Setup {
  double A = 0.0;
  LambdaMatrix lambda;
  double r = 0.0;  // (i/2) Theta_h / dV at the point
};

Dim1Setup dim1_adapted_setup(const KernelSpec& spec, const ChartGeometry& geom,
                             const std::vector<cplx>& z0,
                             Dim1Normalization normalization);

// general (non-adapted) frame in the raw coordinates; densities computed
// from it are per Lebesgue measure dz, and multiply by lebesgue_to_dv to
// convert to the chart's area form
struct GeneralSetup {
  Eigen::MatrixXcd A;
  LambdaMatrix lambda;
  Eigen::MatrixXcd theta;
  double lebesgue_to_dv = 1.0;
};

GeneralSetup general_frame_setup(const KernelSpec& spec,
                                 const ChartGeometry& geom,
                                 const std::vector<cplx>& z0);

// curvature-normalized A and Lambda for FSProjective(m, N) at z0 (adapted
// gauge, coordinates with Theta = I); density per dV = (i/2 Theta_h)^m / m!
struct NormalizedSetup {
  Eigen::MatrixXcd A;
  LambdaMatrix lambda;
};
NormalizedSetup fs_normalized_setup(int m, int N, const std::vector<cplx>& z0);

// exact per-dV density of the SU(2) ensemble at any chart point (constant
// in z0 by invariance; the pipeline recomputes it from local data)
DensityResult su2_exact_density(int N, cplx z0);

// ---------------------------------------------------------------------------
// run configuration and reports
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string command;  // density, count, abc, cp2-number, demo-metric,
                        // compare, selftest
  std::string ensemble = "su2";  // su2 | fs2 | basis-file
  std::string basis_file;
  int degree = 2;
  std::vector<cplx> point{cplx(0.0, 0.0)};
  std::string method = "exact";  // exact | mc | mc-theta | morse
  int morse_q = 1;
  long long samples = 1000000;
  long long trials = 2000;
  uint64_t seed = 0;
  int workers = 0;
  Tolerances tolerances;
  std::string output = "json";  // json | csv
  std::string output_path;      // empty = stdout
  std::string dump_points;      // per-point CSV path (count command)
  // demo-metric inputs
  Poly metric_poly{cplx(0.0), cplx(1.0)};
  double epsilon = 0.01;
  std::string abc_mode = "adapted";  // adapted | general
};

struct Report {
  nlohmann::ordered_json doc;
  bool pass = true;

  std::string to_json() const { return doc.dump(2) + "\n"; }
  std::string to_csv() const;
};

Report run_command(const RunConfig& config);

// m = 1 cross-validation table: exact eigenvalue form, normalized MC, and
// general-Theta MC at the same point, with pairwise deviations
Report compare_methods(const RunConfig& config);

// aggregated invariant checks; returns a report whose pass flag drives the
// process exit code
Report selftest(uint64_t seed);

}  // namespace critpt
