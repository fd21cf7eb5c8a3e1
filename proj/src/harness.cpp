#include "critpt/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "critpt/rng.hpp"

namespace critpt {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// pipelines
// ---------------------------------------------------------------------------

namespace {

// kernel table in the gauge-adapted frame: F -> e^{-g(z)} e^{-conj(g(w))} F
DiagJetTable gauge_kernel_table(const KernelJets& jets,
                                const FrameGauge& gauge) {
  const int m = jets.m;
  Eigen::VectorXcd h1 = -gauge.a;
  Eigen::MatrixXcd h2(m, m);
  for (int j = 0; j < m; ++j)
    for (int q = 0; q < m; ++q)
      h2(j, q) = gauge.a(j) * gauge.a(q) - gauge.b(j, q);
  return jets.table.frame_transformed(h1, h2);
}

}  // namespace

Dim1Setup dim1_adapted_setup(const KernelSpec& spec, const ChartGeometry& geom,
                             const std::vector<cplx>& z0,
                             Dim1Normalization normalization) {
  if (geom.m != 1 || spec.vars() != 1)
    throw std::invalid_argument("dimension-one setup needs m = 1");
  KernelJets jets = kernel_jets(spec, z0);
  FrameGauge gauge = adapt_frame(geom);
  DiagJetTable adapted = gauge_kernel_table(jets, gauge);

  const double r = geom.r();
  const double rho = *geom.area_density;
  double theta = geom.theta(0, 0).real();
  double c2;  // |c|^2 of the coordinate rescale z = z0 + c zeta
  if (normalization == Dim1Normalization::volume) {
    c2 = 1.0 / rho;  // dV = Lebesgue d zeta at the point
  } else {
    c2 = 1.0 / theta;  // curvature = 1 at the point
  }
  Eigen::MatrixXcd L(1, 1);
  L(0, 0) = std::sqrt(c2);
  DiagJetTable table = adapted.coordinates_transformed(L);

  KernelJets jets_n;
  jets_n.m = 1;
  jets_n.table = table;
  ChartGeometry geom_adapted =
      ChartGeometry::from_jets(gauge.transformed, geom.area_density);
  JPDMatrices jpd = assemble_abc(jets_n, geom_adapted, FrameMode::adapted);
  Dim1Setup out;
  out.lambda = compute_lambda(jpd);
  out.A = jpd.A(0, 0).real();
  out.r = r;
  return out;
}

GeneralSetup general_frame_setup(const KernelSpec& spec,
                                 const ChartGeometry& geom,
                                 const std::vector<cplx>& z0) {
  KernelJets jets = kernel_jets(spec, z0);
  JPDMatrices jpd = assemble_abc(jets, geom, FrameMode::general);
  GeneralSetup out;
  out.A = jpd.A;
  out.lambda = compute_lambda(jpd);
  out.theta = geom.theta;
  out.lebesgue_to_dv =
      geom.area_density ? 1.0 / *geom.area_density : 1.0;
  return out;
}

NormalizedSetup fs_normalized_setup(int m, int N,
                                    const std::vector<cplx>& z0) {
  KernelSpec spec = KernelSpec::fs_projective(m, N);
  ChartGeometry geom = ChartGeometry::fubini_study(m, N, z0);
  KernelJets jets = kernel_jets(spec, z0);
  FrameGauge gauge = adapt_frame(geom);
  DiagJetTable adapted = gauge_kernel_table(jets, gauge);
  CoordinateNormalization cn = normalize_coordinates(geom.theta);
  DiagJetTable table = adapted.coordinates_transformed(cn.L);

  KernelJets jets_n;
  jets_n.m = m;
  jets_n.table = table;
  ChartGeometry geom_adapted =
      ChartGeometry::from_jets(gauge.transformed, std::nullopt);
  JPDMatrices jpd = assemble_abc(jets_n, geom_adapted, FrameMode::adapted);
  NormalizedSetup out;
  out.A = jpd.A;
  out.lambda = compute_lambda(jpd);
  return out;
}

DensityResult su2_exact_density(int N, cplx z0) {
  if (N < 2)
    throw ConfigError(
        "exact density needs the 2-jet spanning property, which the SU(2) "
        "ensemble acquires at N >= 2");
  KernelSpec spec = KernelSpec::su2(N);
  ChartGeometry geom = ChartGeometry::fubini_study(1, N, {z0});
  Dim1Setup setup =
      dim1_adapted_setup(spec, geom, {z0}, Dim1Normalization::volume);
  return density_dim1_exact(setup.A, setup.lambda, setup.r);
}

// ---------------------------------------------------------------------------
// report helpers
// ---------------------------------------------------------------------------

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Eigen::MatrixXcd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(complex_json(M(i, j)));
    rows.push_back(row);
  }
  return rows;
}

const char* method_name(DensityMethod m) {
  switch (m) {
    case DensityMethod::exact1d: return "exact1d";
    case DensityMethod::mcNormalized: return "mcNormalized";
    case DensityMethod::mcGeneralTheta: return "mcGeneralTheta";
    default: return "mcMorse";
  }
}

json density_json(const DensityResult& r) {
  return json{{"value", r.value},
              {"standard_error", r.standard_error},
              {"method", method_name(r.method)},
              {"samples", r.samples}};
}

// a comparison row: measured vs. reference with an explicit tolerance
json comparison(const std::string& name, double value, double stderr_,
                double target, const std::string& target_exact, double tol,
                bool* pass_acc) {
  bool ok = std::abs(value - target) <= tol + 1e-14 * std::abs(target);
  if (pass_acc && !ok) *pass_acc = false;
  return json{{"name", name},
              {"value", value},
              {"standard_error", stderr_},
              {"target", target},
              {"target_exact", target_exact},
              {"tolerance", tol},
              {"pass", ok}};
}

Report make_report(const RunConfig& config, const char* command) {
  Report rep;
  rep.doc["schema_version"] = kSchemaVersion;
  rep.doc["version"] = kVersion;
  rep.doc["command"] = command;
  json cfg;
  cfg["ensemble"] = config.ensemble;
  cfg["degree"] = config.degree;
  json pt = json::array();
  for (cplx z : config.point) pt.push_back(complex_json(z));
  cfg["point"] = pt;
  cfg["method"] = config.method;
  cfg["samples"] = config.samples;
  cfg["trials"] = config.trials;
  cfg["seed"] = config.seed;
  cfg["workers"] = config.workers;
  cfg["tolerances"] = json{{"residual", config.tolerances.residual},
                           {"dedupe", config.tolerances.dedupe},
                           {"singular", config.tolerances.singular},
                           {"degeneracy", config.tolerances.degeneracy}};
  rep.doc["config"] = cfg;
  return rep;
}

McOptions mc_options(const RunConfig& c) {
  McOptions o;
  o.samples = c.samples;
  o.seed = c.seed;
  o.workers = c.workers;
  return o;
}

KernelSpec load_basis_spec(const RunConfig& config) {
  std::ifstream in(config.basis_file);
  if (!in) throw ConfigError("cannot open basis file " + config.basis_file);
  json doc = json::parse(in);
  if (doc.value("m", 1) != 1)
    throw ConfigError("basis-file ensembles are one-dimensional");
  std::vector<BasisFunction> basis;
  for (const auto& entry : doc.at("basis")) {
    std::vector<cplx> coeffs;
    for (const auto& c : entry) {
      if (c.is_array())
        coeffs.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
      else
        coeffs.emplace_back(c.get<double>(), 0.0);
    }
    basis.push_back(polynomial_basis_function(std::move(coeffs)));
  }
  return KernelSpec::finite_basis(1, std::move(basis));
}

Report density_command(const RunConfig& config) {
  Report rep = make_report(config, "density");
  const int N = config.degree;

  if (config.ensemble == "fs2") {
    if (config.point.size() != 2)
      throw ConfigError("fs2 density needs a 2-component point");
    if (config.method != "mc")
      throw ConfigError("fs2 density is available by Monte Carlo only");
    if (N < 2) throw ConfigError("fs2 density needs N >= 2 for 2-jet spanning");
    NormalizedSetup setup = fs_normalized_setup(2, N, config.point);
    DensityResult mc = density_mc_normalized(setup.A, setup.lambda,
                                             mc_options(config));
    rep.doc["results"]["density_per_curvature_volume"] = density_json(mc);
    double volume = double(N) * double(N) * M_PI * M_PI / 2.0;
    double total = mc.value * volume;
    double total_se = mc.standard_error * volume;
    rep.doc["results"]["volume"] = volume;
    rep.doc["results"]["expected_total"] = total;
    Rational target = cp2_exact_number(N);
    json comps = json::array();
    comps.push_back(comparison("expected_total_vs_exact", total, total_se,
                               target.to_double(), target.to_string(),
                               3.0 * total_se, &rep.pass));
    rep.doc["comparisons"] = comps;
    return rep;
  }

  if (config.point.size() != 1)
    throw ConfigError("dimension-one density needs a single point");
  cplx z0 = config.point[0];
  KernelSpec spec = config.ensemble == "su2" ? KernelSpec::su2(N)
                                             : load_basis_spec(config);
  if (config.ensemble == "su2" && N < 2)
    throw ConfigError(
        "density for su2 needs N >= 2: the 2-jet spanning property fails "
        "below degree 2");
  ChartGeometry geom = ChartGeometry::fubini_study(1, N, {z0});

  Dim1Setup vol =
      dim1_adapted_setup(spec, geom, {z0}, Dim1Normalization::volume);
  DensityResult exact = density_dim1_exact(vol.A, vol.lambda, vol.r);
  json comps = json::array();

  if (config.method == "exact") {
    rep.doc["results"]["density_per_dV"] = density_json(exact);
    IndexDensities idx = index_densities_dim1(vol.A, vol.lambda, vol.r);
    rep.doc["results"]["index_densities"] = json{
        {"k_plus", idx.k_plus}, {"k_minus", idx.k_minus},
        {"k_index", idx.k_index}};
    if (config.ensemble == "su2") {
      CP1Counts counts = exact_cp1_numbers(N);
      rep.doc["results"]["expected_total"] = exact.value * M_PI;
      comps.push_back(comparison(
          "expected_total_vs_exact", exact.value * M_PI, 0.0,
          counts.n_total.to_double(), counts.n_total.to_string(), 1e-9,
          &rep.pass));
    }
  } else if (config.method == "mc") {
    Dim1Setup cur =
        dim1_adapted_setup(spec, geom, {z0}, Dim1Normalization::curvature);
    Eigen::MatrixXcd A1(1, 1);
    A1(0, 0) = cur.A;
    DensityResult mc = density_mc_normalized(A1, cur.lambda,
                                             mc_options(config));
    DensityResult per_dv = mc;
    per_dv.value *= cur.r;  // curvature volume -> chosen area form
    per_dv.standard_error *= cur.r;
    rep.doc["results"]["density_per_dV"] = density_json(per_dv);
    comps.push_back(comparison("mc_vs_exact1d", per_dv.value,
                               per_dv.standard_error, exact.value, "",
                               3.0 * per_dv.standard_error, &rep.pass));
  } else if (config.method == "mc-theta") {
    GeneralSetup gen = general_frame_setup(spec, geom, {z0});
    DensityResult mc = density_mc_general_theta(gen.A, gen.lambda, gen.theta,
                                                mc_options(config));
    rep.doc["results"]["density_per_lebesgue"] = density_json(mc);
    DensityResult per_dv = mc;
    per_dv.value *= gen.lebesgue_to_dv;
    per_dv.standard_error *= gen.lebesgue_to_dv;
    rep.doc["results"]["density_per_dV"] = density_json(per_dv);
    comps.push_back(comparison("mc_theta_vs_exact1d", per_dv.value,
                               per_dv.standard_error, exact.value, "",
                               3.0 * per_dv.standard_error, &rep.pass));
  } else if (config.method == "morse") {
    if (config.morse_q < 1 || config.morse_q > 2)
      throw ConfigError("Morse index must be 1 or 2 in dimension one");
    Dim1Setup cur =
        dim1_adapted_setup(spec, geom, {z0}, Dim1Normalization::curvature);
    Eigen::MatrixXcd A1(1, 1);
    A1(0, 0) = cur.A;
    DensityResult mc =
        morse_density_mc(A1, cur.lambda, config.morse_q, mc_options(config));
    DensityResult per_dv = mc;
    per_dv.value *= cur.r;
    per_dv.standard_error *= cur.r;
    rep.doc["results"]["density_per_dV"] = density_json(per_dv);
    IndexDensities idx = index_densities_dim1(vol.A, vol.lambda, vol.r);
    double target = config.morse_q == 1 ? idx.k_plus : idx.k_minus;
    comps.push_back(comparison("morse_vs_index_density", per_dv.value,
                               per_dv.standard_error, target, "",
                               3.0 * per_dv.standard_error, &rep.pass));
  } else {
    throw ConfigError("unknown density method " + config.method);
  }
  rep.doc["comparisons"] = comps;
  return rep;
}

Report count_command(const RunConfig& config) {
  Report rep = make_report(config, "count");
  const int N = config.degree;
  if (N < 1) throw ConfigError("count needs degree N >= 1");
  TrialSummary sum = monte_carlo_counts(N, config.trials, config.seed,
                                        config.tolerances, config.workers);
  CP1Counts exact = exact_cp1_numbers(N);

  json res;
  res["trials"] = sum.trials;
  res["attempts"] = sum.attempts;
  res["rejected"] = sum.rejected;
  res["rejection_rate"] = sum.rejection_rate();
  res["solver_failures"] = sum.solver_failures;
  res["degenerate_flags"] = sum.degenerate_flags;
  res["chern_violations"] = sum.chern_violations;
  res["mean_plus"] = sum.mean_plus;
  res["stderr_plus"] = sum.stderr_plus;
  res["mean_minus"] = sum.mean_minus;
  res["stderr_minus"] = sum.stderr_minus;
  res["mean_total"] = sum.mean_total;
  res["stderr_total"] = sum.stderr_total;
  rep.doc["results"] = res;

  json comps = json::array();
  comps.push_back(comparison("n_plus", sum.mean_plus, sum.stderr_plus,
                             exact.n_plus.to_double(), exact.n_plus.to_string(),
                             3.0 * sum.stderr_plus, &rep.pass));
  comps.push_back(comparison("n_minus", sum.mean_minus, sum.stderr_minus,
                             exact.n_minus.to_double(),
                             exact.n_minus.to_string(), 3.0 * sum.stderr_minus,
                             &rep.pass));
  comps.push_back(comparison("n_total", sum.mean_total, sum.stderr_total,
                             exact.n_total.to_double(),
                             exact.n_total.to_string(), 3.0 * sum.stderr_total,
                             &rep.pass));
  rep.doc["comparisons"] = comps;
  if (sum.rejection_rate() >= 0.01) {
    rep.pass = false;
    rep.doc["results"]["unreliable"] = true;
  }

  if (!config.dump_points.empty()) {
    std::ofstream out(config.dump_points);
    out << "trial,chart,z_re,z_im,top_index,morse_index,residual\n";
    long long accepted = 0;
    for (long long t = 0; accepted < sum.trials; ++t) {
      SectionSample s = sample_su2_section(N, config.seed, t);
      SolveOutcome o = find_critical_points_cp1(s, config.tolerances);
      if (o.solver_failures || o.degenerate_count || !o.chern_ok) continue;
      for (const auto& p : o.points)
        out << accepted << "," << p.chart << "," << p.z.real() << ","
            << p.z.imag() << "," << p.top_index << "," << p.morse_index << ","
            << p.residual << "\n";
      accepted += 1;
    }
  }
  return rep;
}

Report abc_command(const RunConfig& config) {
  Report rep = make_report(config, "abc");
  const int N = config.degree;
  KernelSpec spec =
      config.ensemble == "su2"
          ? KernelSpec::su2(N)
          : (config.ensemble == "fs2"
                 ? KernelSpec::fs_projective(2, N)
                 : load_basis_spec(config));
  const int m = spec.vars();
  if (static_cast<int>(config.point.size()) != m)
    throw ConfigError("point dimension does not match the ensemble");
  ChartGeometry geom = ChartGeometry::fubini_study(m, N, config.point);

  KernelJets jets = kernel_jets(spec, config.point);
  JPDMatrices jpd;
  if (config.abc_mode == "general") {
    jpd = assemble_abc(jets, geom, FrameMode::general);
  } else {
    FrameGauge gauge = adapt_frame(geom);
    KernelJets adapted;
    adapted.m = m;
    adapted.table = gauge_kernel_table(jets, gauge);
    ChartGeometry geom_adapted =
        ChartGeometry::from_jets(gauge.transformed, geom.area_density);
    jpd = assemble_abc(adapted, geom_adapted, FrameMode::adapted);
  }
  LambdaMatrix lambda = compute_lambda(jpd);
  rep.doc["results"]["mode"] = config.abc_mode;
  rep.doc["results"]["A"] = matrix_json(jpd.A);
  rep.doc["results"]["B"] = matrix_json(jpd.B);
  rep.doc["results"]["C"] = matrix_json(jpd.C);
  rep.doc["results"]["Lambda"] = matrix_json(lambda.L);
  return rep;
}

Report cp2_command(const RunConfig& config) {
  Report rep = make_report(config, "cp2-number");
  Rational v = cp2_exact_number(config.degree);
  rep.doc["results"]["exact"] = v.to_string();
  rep.doc["results"]["decimal"] = v.to_double();
  return rep;
}

Report demo_metric_command(const RunConfig& config) {
  Report rep = make_report(config, "demo-metric");
  MetricDemoResult res =
      perturbed_metric_crit_points(config.metric_poly, config.epsilon);
  int k = static_cast<int>(config.metric_poly.size()) - 1;
  json pts = json::array();
  for (cplx z : res.points) pts.push_back(complex_json(z));
  rep.doc["results"]["count"] = res.count;
  rep.doc["results"]["expected"] = 2 * k - 1;
  rep.doc["results"]["unconverged_starts"] = res.unconverged_starts;
  rep.doc["results"]["points"] = pts;
  if (res.count != 2 * k - 1) rep.pass = false;
  return rep;
}

}  // namespace

Report compare_methods(const RunConfig& config) {
  Report rep = make_report(config, "compare");
  const int N = config.degree;
  if (config.ensemble != "su2" && config.ensemble != "basis-file")
    throw ConfigError("compare is defined for dimension-one ensembles");
  if (config.point.size() != 1)
    throw ConfigError("compare needs a single point");
  cplx z0 = config.point[0];
  KernelSpec spec = config.ensemble == "su2" ? KernelSpec::su2(N)
                                             : load_basis_spec(config);
  if (config.ensemble == "su2" && N < 2)
    throw ConfigError("compare needs N >= 2 (2-jet spanning)");
  ChartGeometry geom = ChartGeometry::fubini_study(1, N, {z0});

  Dim1Setup vol =
      dim1_adapted_setup(spec, geom, {z0}, Dim1Normalization::volume);
  DensityResult exact = density_dim1_exact(vol.A, vol.lambda, vol.r);

  Dim1Setup cur =
      dim1_adapted_setup(spec, geom, {z0}, Dim1Normalization::curvature);
  Eigen::MatrixXcd A1(1, 1);
  A1(0, 0) = cur.A;
  DensityResult mc = density_mc_normalized(A1, cur.lambda, mc_options(config));
  mc.value *= cur.r;
  mc.standard_error *= cur.r;

  GeneralSetup gen = general_frame_setup(spec, geom, {z0});
  DensityResult mct =
      density_mc_general_theta(gen.A, gen.lambda, gen.theta,
                               mc_options(config));
  mct.value *= gen.lebesgue_to_dv;
  mct.standard_error *= gen.lebesgue_to_dv;

  rep.doc["results"]["exact1d"] = density_json(exact);
  rep.doc["results"]["mcNormalized_per_dV"] = density_json(mc);
  rep.doc["results"]["mcGeneralTheta_per_dV"] = density_json(mct);

  json comps = json::array();
  comps.push_back(comparison("mcNormalized_vs_exact", mc.value,
                             mc.standard_error, exact.value, "",
                             3.0 * mc.standard_error, &rep.pass));
  comps.push_back(comparison("mcGeneralTheta_vs_exact", mct.value,
                             mct.standard_error, exact.value, "",
                             3.0 * mct.standard_error, &rep.pass));
  comps.push_back(comparison("mc_pairwise", mc.value,
                             std::hypot(mc.standard_error, mct.standard_error),
                             mct.value, "",
                             3.0 * std::hypot(mc.standard_error,
                                              mct.standard_error),
                             &rep.pass));
  rep.doc["comparisons"] = comps;
  return rep;
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

Report selftest(uint64_t seed) {
  RunConfig cfg;
  cfg.command = "selftest";
  cfg.seed = seed;
  Report rep = make_report(cfg, "selftest");
  json checks = json::array();
  auto check = [&](const std::string& name, bool ok) {
    checks.push_back(json{{"name", name}, {"pass", ok}});
    if (!ok) rep.pass = false;
  };

  // ABC fixtures at the origin
  for (int N = 2; N <= 5; ++N) {
    KernelSpec spec = KernelSpec::su2(N);
    ChartGeometry geom = ChartGeometry::fubini_study(1, N, {cplx(0.0)});
    KernelJets jets = kernel_jets(spec, {cplx(0.0)});
    JPDMatrices jpd = assemble_abc(jets, geom, FrameMode::adapted);
    LambdaMatrix lam = compute_lambda(jpd);
    bool ok = jpd.A(0, 0) == cplx(double(N)) && jpd.B.norm() == 0.0 &&
              lam.L(0, 0) == cplx(2.0 * N * (N - 1)) &&
              lam.L(1, 1) == cplx(1.0) && lam.L(0, 1) == cplx(0.0);
    check("abc_fixture_N" + std::to_string(N), ok);
  }

  // eigenvalue signs and the exact dimension-one values
  {
    DensityResult d2 = su2_exact_density(2, cplx(0.0));
    DensityResult d3 = su2_exact_density(3, cplx(0.3, -0.4));
    check("exact_N2", std::abs(d2.value - 2.0 / M_PI) < 1e-12);
    check("exact_N3_off_origin",
          std::abs(d3.value - 25.0 / (7.0 * M_PI)) < 1e-10);
  }

  // block determinant identity on random inputs
  {
    CounterRng rng(seed, 0xb10c);
    bool ok = true;
    for (int m = 1; m <= 2 && ok; ++m) {
      for (int t = 0; t < 100 && ok; ++t) {
        Eigen::MatrixXcd H(m, m);
        for (int i = 0; i < m; ++i)
          for (int j = i; j < m; ++j) H(i, j) = H(j, i) = rng.next_cgauss();
        cplx x = rng.next_cgauss();
        Eigen::MatrixXcd Hc(2 * m, 2 * m);
        Hc.topLeftCorner(m, m) = H;
        Hc.topRightCorner(m, m) = -x * Eigen::MatrixXcd::Identity(m, m);
        Hc.bottomLeftCorner(m, m) =
            -std::conj(x) * Eigen::MatrixXcd::Identity(m, m);
        Hc.bottomRightCorner(m, m) = H.adjoint();
        double lhs = std::abs(Hc.determinant());
        Eigen::MatrixXcd M =
            H * H.adjoint() - std::norm(x) * Eigen::MatrixXcd::Identity(m, m);
        double rhs = std::abs(M.determinant());
        if (std::abs(lhs - rhs) > 1e-10 * (1.0 + rhs)) ok = false;
      }
    }
    check("block_determinant_identity", ok);
  }

  // kernel-scale invariance of the exact density
  {
    KernelSpec spec = KernelSpec::su2(4);
    ChartGeometry geom = ChartGeometry::fubini_study(1, 4, {cplx(0.2, 0.1)});
    Dim1Setup a = dim1_adapted_setup(spec, geom, {cplx(0.2, 0.1)},
                                     Dim1Normalization::volume);
    Dim1Setup b = dim1_adapted_setup(spec.scaled(10.0), geom, {cplx(0.2, 0.1)},
                                     Dim1Normalization::volume);
    double va = density_dim1_exact(a.A, a.lambda, a.r).value;
    double vb = density_dim1_exact(b.A, b.lambda, b.r).value;
    check("kernel_scale_invariance", std::abs(va - vb) < 1e-13 * va);
  }

  // Monte Carlo determinism across worker counts
  {
    Dim1Setup cur = dim1_adapted_setup(
        KernelSpec::su2(3), ChartGeometry::fubini_study(1, 3, {cplx(0.0)}),
        {cplx(0.0)}, Dim1Normalization::curvature);
    Eigen::MatrixXcd A1(1, 1);
    A1(0, 0) = cur.A;
    McOptions o1{20000, seed, 100, 1};
    McOptions o2{20000, seed, 100, 3};
    DensityResult r1 = density_mc_normalized(A1, cur.lambda, o1);
    DensityResult r2 = density_mc_normalized(A1, cur.lambda, o2);
    check("mc_worker_determinism", r1.value == r2.value &&
                                       r1.standard_error == r2.standard_error);
  }

  // counting: N = 2 rigidity on a quick run
  {
    TrialSummary sum = monte_carlo_counts(2, 50, seed);
    bool ok = sum.rejection_rate() < 0.05;
    for (auto& [p, m] : sum.per_trial)
      if (p != 1 || m != 1) ok = false;
    check("count_N2_rigidity", ok);
  }

  // kernel jet finite-difference oracle
  {
    double dev = fd_jet_check(KernelSpec::su2(5), {cplx(0.0)}, 1e-4);
    check("fd_jet_check_su2_5", dev < 1e-6);
  }

  rep.doc["results"]["checks"] = checks;
  return rep;
}

// ---------------------------------------------------------------------------
// dispatch and serialization
// ---------------------------------------------------------------------------

Report run_command(const RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  if (config.command == "density") {
    rep = density_command(config);
  } else if (config.command == "count") {
    rep = count_command(config);
  } else if (config.command == "abc") {
    rep = abc_command(config);
  } else if (config.command == "cp2-number") {
    rep = cp2_command(config);
  } else if (config.command == "demo-metric") {
    rep = demo_metric_command(config);
  } else if (config.command == "compare") {
    rep = compare_methods(config);
  } else if (config.command == "selftest") {
    rep = selftest(config.seed);
  } else {
    throw ConfigError("unknown command " + config.command);
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.doc["pass"] = rep.pass;
  rep.doc["runtime_seconds"] =
      std::chrono::duration<double>(t1 - t0).count();
  return rep;
}

std::string Report::to_csv() const {
  // flat projection: one key,value row per scalar result, then one row per
  // comparison with the fixed column order
  std::ostringstream out;
  out << "section,name,value,standard_error,target,target_exact,tolerance,"
         "pass\n";
  std::function<void(const std::string&, const json&)> emit =
      [&](const std::string& prefix, const json& node) {
        for (auto it = node.begin(); it != node.end(); ++it) {
          std::string name = prefix.empty() ? it.key() : prefix + "." + it.key();
          if (it->is_number() || it->is_boolean() || it->is_string()) {
            out << "result," << name << "," << it->dump() << ",,,,,\n";
          } else if (it->is_object()) {
            emit(name, *it);
          }
        }
      };
  if (doc.contains("results")) emit("", doc["results"]);
  if (doc.contains("comparisons"))
    for (const auto& c : doc["comparisons"]) {
      out << "comparison," << c["name"].get<std::string>() << ","
          << c["value"].dump() << "," << c["standard_error"].dump() << ","
          << c["target"].dump() << "," << c["target_exact"].dump() << ","
          << c["tolerance"].dump() << "," << c["pass"].dump() << "\n";
    }
  return out.str();
}

}  // namespace critpt
