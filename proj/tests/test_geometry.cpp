#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "critpt/geometry.hpp"
#include "critpt/rng.hpp"

using namespace critpt;

namespace {

std::vector<int> mi(std::initializer_list<int> e) { return std::vector<int>(e); }

// random real-analytic quartic potential in one variable:
// K = sum_{a+b<=4} re(c_{ab} z^a zbar^b + conj(c_{ab}) z^b zbar^a)/2
struct QuarticPotential {
  // coefficients c[a][b] with c[b][a] = conj(c[a][b]) so K is real
  cplx c[5][5] = {};

  static QuarticPotential random(uint64_t seed) {
    QuarticPotential q;
    CounterRng rng(seed, 0x0aa7);
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b) {
        if (b < a) continue;
        cplx v = 0.3 * rng.next_cgauss();
        q.c[a][b] = v;
        q.c[b][a] = std::conj(v);
      }
    for (int a = 0; a <= 4; ++a) q.c[a][a] = cplx(q.c[a][a].real(), 0.0);
    // make the curvature comfortably positive at small |z|
    q.c[1][1] += 2.0;
    return q;
  }

  double eval(cplx z) const {
    cplx acc(0.0);
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b) {
        cplx t = c[a][b];
        for (int k = 0; k < a; ++k) t *= z;
        for (int k = 0; k < b; ++k) t *= std::conj(z);
        acc += t;
      }
    return acc.real();
  }

  // exact Wirtinger derivative d^p d^qbar K at z
  cplx deriv(int p, int q, cplx z) const {
    cplx acc(0.0);
    for (int a = p; a <= 4; ++a)
      for (int b = q; a + b <= 4; ++b) {
        double fall = 1.0;
        for (int k = 0; k < p; ++k) fall *= (a - k);
        for (int k = 0; k < q; ++k) fall *= (b - k);
        cplx t = fall * c[a][b];
        for (int k = 0; k < a - p; ++k) t *= z;
        for (int k = 0; k < b - q; ++k) t *= std::conj(z);
        acc += t;
      }
    return acc;
  }

  PotentialJets jets(cplx z) const {
    PotentialJets pj;
    pj.m = 1;
    pj.table = DiagJetTable(1, 4, 4);
    for (int p = 0; p <= 4; ++p)
      for (int q = 0; p + q <= 4; ++q) pj.table.at(p, q) = deriv(p, q, z);
    return pj;
  }
};

}  // namespace

TEST_CASE("curvature of the built-in potentials") {
  // CP^1 Fubini-Study at the origin: Theta = (N)
  for (int N : {1, 3, 7}) {
    ChartGeometry g = ChartGeometry::fubini_study(1, N, {cplx(0.0)});
    CHECK(g.theta(0, 0).real() == doctest::Approx(N).epsilon(1e-14));
    CHECK(g.theta(0, 0).imag() == doctest::Approx(0.0));
  }

  // flat potential
  ChartGeometry flat = ChartGeometry::flat(2);
  CHECK(flat.theta.norm() == 0.0);

  // K = |z1|^2 + 2 |z2|^2
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2, 2);
  H(0, 0) = 1.0;
  H(1, 1) = 2.0;
  ChartGeometry quad = ChartGeometry::quadratic(H);
  CHECK(quad.theta(0, 0).real() == doctest::Approx(1.0));
  CHECK(quad.theta(1, 1).real() == doctest::Approx(2.0));
  CHECK(std::abs(quad.theta(0, 1)) == doctest::Approx(0.0));
}

TEST_CASE("fubini-study jets satisfy reality and match closed forms") {
  cplx z0(0.4, -0.3);
  int N = 4;
  ChartGeometry g = ChartGeometry::fubini_study(1, N, {z0});
  CHECK(g.jets.reality_defect() < 1e-12);

  double t = 1.0 + std::norm(z0);
  cplx kz = g.jets.value(mi({1}), mi({0}));
  CHECK(std::abs(kz - double(N) * std::conj(z0) / t) < 1e-12);
  cplx kzzb = g.jets.value(mi({1}), mi({1}));
  CHECK(std::abs(kzzb - double(N) / (t * t)) < 1e-12);
  cplx kzz = g.jets.value(mi({2}), mi({0}));
  CHECK(std::abs(kzz - (-double(N) * std::conj(z0) * std::conj(z0) / (t * t))) <
        1e-12);

  // r with dV = omega_FS equals N at any point
  CHECK(g.r() == doctest::Approx(double(N)).epsilon(1e-12));
  ChartGeometry g2 = ChartGeometry::fubini_study(1, N, {cplx(1.2, 0.7)});
  CHECK(g2.r() == doctest::Approx(double(N)).epsilon(1e-12));
}

TEST_CASE("adapt_frame: FS at origin is already adapted") {
  ChartGeometry g = ChartGeometry::fubini_study(1, 5, {cplx(0.0)});
  FrameGauge gauge = adapt_frame(g);
  CHECK(std::abs(gauge.a(0)) == 0.0);
  CHECK(std::abs(gauge.b(0, 0)) == 0.0);
}

TEST_CASE("adapt_frame cancels first-order potential derivatives") {
  cplx z0(0.5, 0.0);
  ChartGeometry g = ChartGeometry::fubini_study(1, 3, {z0});
  cplx kz = g.jets.value(mi({1}), mi({0}));
  CHECK(std::abs(kz) > 0.1);  // not adapted before the gauge
  FrameGauge gauge = adapt_frame(g);
  CHECK(std::abs(gauge.a(0) - kz) < 1e-14);
  CHECK(std::abs(gauge.transformed.value(mi({1}), mi({0}))) < 1e-14);
  CHECK(std::abs(gauge.transformed.value(mi({2}), mi({0}))) < 1e-14);
  CHECK(std::abs(gauge.transformed.value(mi({0}), mi({1}))) < 1e-14);
}

TEST_CASE("adapt_frame on a random quartic, finite-difference oracle") {
  QuarticPotential q = QuarticPotential::random(11);
  cplx z0(0.15, -0.1);
  ChartGeometry g = ChartGeometry::from_jets(q.jets(z0), std::nullopt);
  FrameGauge gauge = adapt_frame(g);

  // pure jets of order <= 2 vanish after the gauge
  CHECK(std::abs(gauge.transformed.value(mi({1}), mi({0}))) < 1e-13);
  CHECK(std::abs(gauge.transformed.value(mi({2}), mi({0}))) < 1e-13);

  // mixed derivatives with both orders >= 1 are unchanged
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; a + b <= 4 && b <= 2; ++b) {
      cplx before = g.jets.value(mi({a}), mi({b}));
      cplx after = gauge.transformed.value(mi({a}), mi({b}));
      CHECK(std::abs(before - after) < 1e-13 * (1.0 + std::abs(before)));
    }

  // finite differences of K - 2 Re g: gauge the callback and re-derive jets
  cplx a0 = gauge.a(0), b0 = gauge.b(0, 0);
  auto gauged = [&](const std::vector<cplx>& z) {
    cplx dz = z[0] - z0;
    cplx gz = a0 * dz + 0.5 * b0 * dz * dz;
    return q.eval(z[0]) - 2.0 * gz.real();
  };
  ChartGeometry fd = ChartGeometry::from_callback(1, gauged, {z0});
  CHECK(std::abs(fd.jets.value(mi({1}), mi({0}))) < 1e-8);
  CHECK(std::abs(fd.jets.value(mi({2}), mi({0}))) < 1e-7);
  // and the mixed second derivative survives the gauge, to fd accuracy
  CHECK(std::abs(fd.jets.value(mi({1}), mi({1})) -
                 g.jets.value(mi({1}), mi({1}))) < 1e-7);
}

TEST_CASE("gauge invariance of curvature") {
  QuarticPotential q = QuarticPotential::random(23);
  cplx z0(0.2, 0.05);
  ChartGeometry g = ChartGeometry::from_jets(q.jets(z0), std::nullopt);
  FrameGauge gauge = adapt_frame(g);
  Eigen::MatrixXcd before = curvature_at(g.jets);
  Eigen::MatrixXcd after = curvature_at(gauge.transformed);
  CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("normalize_coordinates") {
  // scalar case
  Eigen::MatrixXcd t1(1, 1);
  t1(0, 0) = 9.0;
  CoordinateNormalization n1 = normalize_coordinates(t1);
  CHECK(std::abs(n1.L(0, 0) - cplx(1.0 / 3.0)) < 1e-14);
  CHECK(n1.jacobian_factor == doctest::Approx(1.0 / 9.0).epsilon(1e-13));

  // identity
  CoordinateNormalization n2 =
      normalize_coordinates(Eigen::MatrixXcd::Identity(2, 2));
  CHECK((n2.L - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-14);
  CHECK(n2.jacobian_factor == doctest::Approx(1.0));

  // N I_2 (CP^2 Fubini-Study at the origin)
  int N = 6;
  Eigen::MatrixXcd t3 = double(N) * Eigen::MatrixXcd::Identity(2, 2);
  CoordinateNormalization n3 = normalize_coordinates(t3);
  CHECK((n3.L.adjoint() * t3 * n3.L - Eigen::MatrixXcd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(n3.jacobian_factor == doctest::Approx(1.0 / (N * N)).epsilon(1e-12));

  // random Hermitian positive definite
  CounterRng rng(5, 0);
  Eigen::MatrixXcd M(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = rng.next_cgauss();
  Eigen::MatrixXcd theta = M * M.adjoint() + Eigen::MatrixXcd::Identity(3, 3);
  CoordinateNormalization n4 = normalize_coordinates(theta);
  CHECK((n4.L.adjoint() * theta * n4.L - Eigen::MatrixXcd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(n4.jacobian_factor ==
        doctest::Approx(std::norm(n4.L.determinant())).epsilon(1e-13));
  // the Hermitian square root construction makes L itself Hermitian
  CHECK((n4.L - n4.L.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  // indefinite curvature is rejected
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(normalize_coordinates(bad), std::invalid_argument);
  // near-degenerate curvature is rejected too
  Eigen::MatrixXcd deg = Eigen::MatrixXcd::Identity(2, 2);
  deg(1, 1) = 1e-14;
  CHECK_THROWS_AS(normalize_coordinates(deg), std::invalid_argument);
}

TEST_CASE("callback jets agree with analytic jets on a quartic") {
  QuarticPotential q = QuarticPotential::random(31);
  cplx z0(0.1, 0.2);
  PotentialJets exact = q.jets(z0);
  ChartGeometry fd = ChartGeometry::from_callback(
      1, [&](const std::vector<cplx>& z) { return q.eval(z[0]); }, {z0});
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) {
      cplx e = exact.table.at(a, b);
      cplx f = fd.jets.table.at(a, b);
      CHECK(std::abs(e - f) < 2e-6 * (1.0 + std::abs(e)));
    }
}
