#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "fockskin/errors.hpp"
#include "fockskin/spectral_topology.hpp"
#include "oracles.hpp"

using namespace fockskin;

namespace {
const OscillatorParams kOsc{1.0, 0.1};
constexpr Complex kIKappa{0.0, 0.1};

double phase_mod_2pi(double phase) { return std::remainder(phase, kTwoPi); }
}  // namespace

TEST_CASE("r_product telescoping and zeros") {
  for (int dim : {0, 1, 5, 50, 400, 1000}) {
    const LogComplex r = r_product(kOsc, 0, dim, kIKappa);
    CHECK_FALSE(r.zero);
    CHECK(std::abs(r.log_mag) < 1e-12);
    CHECK(std::abs(phase_mod_2pi(r.phase)) < 1e-12);
    CHECK(r_product(kOsc, 0, dim, 0.0).zero);
  }
  const LogComplex r = r_product(kOsc, 0, 1, {0.0, -0.2});
  CHECK(std::abs(r.value() - 1.0) < 1e-14);
  CHECK(std::abs(oracle::r_direct(1.0, 0.1, 0, 1, {0.0, -0.2}) - 1.0) < 1e-14);
}

TEST_CASE("r_product agrees with independent evaluations") {
  SUBCASE("direct complex product, small D") {
    for (int nu : {-2, 0, 3})
      for (Complex e : {Complex{0.3, 0.2}, Complex{-1.1, -0.4}, Complex{2.0, 0.05}}) {
        const Complex direct = oracle::r_direct(1.0, 0.1, nu, 12, e);
        CHECK(std::abs(r_product(kOsc, nu, 12, e).value() - direct) < 1e-10 * std::abs(direct));
      }
  }
  SUBCASE("Gamma-function closed form on the imaginary axis, nu=0") {
    for (double x : {0.5, 1.5, 7.25, -3.5, -48.5}) {
      for (int dim : {50, 400}) {
        const double expected = oracle::log_abs_r_nu0_real(x, dim);
        const LogComplex r = r_product(kOsc, 0, dim, kIKappa * x);
        CHECK(r.log_mag == doctest::Approx(expected).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("exact zero set of R is the OBC spectrum") {
  for (int nu : {-2, 0, 1}) {
    const ChainSpec spec{kOsc, nu, 30, Obc{}};
    for (const Complex e : obc_spectrum_analytic(spec).values) CHECK(r_product(kOsc, nu, 30, e).zero);
  }
}

TEST_CASE("|R| is symmetric under E -> 2 nu omega - conj(E)") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int nu = static_cast<int>(gen() % 5) - 2;
    const Complex e{u(gen) + nu, u(gen)};
    const double a = r_product(kOsc, nu, 40, e).log_mag;
    const double b = r_product(kOsc, nu, 40, 2.0 * nu * kOsc.omega - std::conj(e)).log_mag;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("scaled_log_r approximates D^-1 ln|R| with O(1/D) error") {
  // Interior and exterior sample points given in scaled form E/D.
  const std::vector<Complex> scaled_points{{-0.03, 0.01}, {0.02, -0.05}, {0.03, -0.02}, {-0.01, -0.071}};
  for (int nu : {0, 1}) {
    for (const Complex s : scaled_points) {
      double previous_c = 0.0;
      for (int dim : {50, 100, 200}) {
        const Complex e = s * static_cast<double>(dim) + Complex{nu * kOsc.omega, 0.0};
        const double exact = r_product(kOsc, nu, dim, e).log_mag / dim;
        const double err = std::abs(scaled_log_r(kOsc, nu, dim, e) - exact);
        const double c = err * dim;
        CHECK(c < 2.0);
        if (dim > 50) CHECK(std::abs(c - previous_c) < 0.25 * previous_c + 1e-3);
        previous_c = c;
      }
    }
  }
  CHECK_THROWS_AS(scaled_log_r(kOsc, 0, 50, 0.0), DomainError);
  CHECK_THROWS_AS(scaled_log_r(kOsc, 0, 50, Complex{0.0, -5.0}), DomainError);
  CHECK_THROWS_AS(scaled_log_r(kOsc, 0, 1, 1.0), InvalidArgument);
}

TEST_CASE("scaled_log_r depends on E/D in the large-D limit") {
  const Complex s{0.01, -0.03};
  double previous = 1e9;
  for (int dim : {25, 50, 100, 200}) {
    const double a = scaled_log_r(kOsc, 0, dim, s * static_cast<double>(dim));
    const double b = scaled_log_r(kOsc, 0, 2 * dim, s * static_cast<double>(2 * dim));
    const double gap = std::abs(a - b);
    CHECK(gap < previous);
    previous = gap;
  }
}

TEST_CASE("PBC spectrum by eigensolver") {
  SUBCASE("D=1") {
    const auto spec = pbc_spectrum_numeric({kOsc, 0, 1, Pbc{}});
    REQUIRE(spec.values.size() == 2);
    CHECK(std::abs(spec.values[0] - Complex{0.0, -0.2}) < 1e-14);
    CHECK(std::abs(spec.values[1] - Complex{0.0, 0.1}) < 1e-14);
  }
  SUBCASE("D=50: i kappa is an eigenvalue and every eigenvalue solves R = 1") {
    const auto spec = pbc_spectrum_numeric({kOsc, 0, 50, Pbc{}});
    REQUIRE(spec.values.size() == 51);
    double nearest = 1e9;
    for (const Complex e : spec.values) {
      nearest = std::min(nearest, std::abs(e - kIKappa));
      const LogComplex r = r_product(kOsc, 0, 50, e);
      CHECK(std::abs(r.log_mag) < 1e-6);
      CHECK(std::abs(phase_mod_2pi(r.phase)) < 1e-6);
    }
    CHECK(nearest < 1e-8);
    CHECK(std::is_sorted(spec.values.begin(), spec.values.end(), canonical_less));
  }
  SUBCASE("TBC eigenvalues solve R = e^{-i theta}") {
    const double theta = 1.3;
    const auto spec = pbc_spectrum_numeric({kOsc, 1, 20, Tbc{theta}});
    for (const Complex e : spec.values) {
      const LogComplex r = r_product(kOsc, 1, 20, e);
      CHECK(std::abs(r.log_mag) < 1e-8);
      CHECK(std::abs(std::remainder(r.phase + theta, kTwoPi)) < 1e-8);
    }
  }
  CHECK_THROWS_AS(pbc_spectrum_numeric({kOsc, 0, 5, Obc{}}), InvalidArgument);
}

TEST_CASE("OBC spectrum") {
  const auto s = obc_spectrum_analytic({kOsc, 0, 3, Obc{}});
  const std::vector<Complex> expected{{0.0, -0.3}, {0.0, -0.2}, {0.0, -0.1}, {0.0, 0.0}};
  REQUIRE(s.values.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(s.values[k] - expected[k]) < 1e-15);
  CHECK(std::abs(obc_spectrum_analytic({kOsc, 2, 5, Obc{}}).values.back() - Complex{2.0, -0.1}) < 1e-15);

  const ChainSpec spec{kOsc, -1, 12, Obc{}};
  const ComplexMatrix h = build_chain_matrix(spec);
  std::vector<Complex> diag;
  for (int j = 0; j < h.rows(); ++j) diag.push_back(h(j, j));
  std::sort(diag.begin(), diag.end(), canonical_less);
  CHECK(diag == obc_spectrum_analytic(spec).values);

  for (int nu : {-2, 0, 1}) {
    const ChainSpec big{kOsc, nu, 100, Obc{}};
    const auto numeric = obc_spectrum_numeric(big).values;
    const auto analytic = obc_spectrum_analytic(big).values;
    REQUIRE(numeric.size() == analytic.size());
    for (std::size_t k = 0; k < numeric.size(); ++k) CHECK(std::abs(numeric[k] - analytic[k]) < 1e-8);
  }
  CHECK_THROWS_AS(obc_spectrum_numeric({kOsc, 0, 5, Pbc{}}), InvalidArgument);
}

TEST_CASE("OBC eigenstates") {
  SUBCASE("l = 0 and l = 1") {
    const ChainSpec spec{kOsc, 0, 6, Obc{}};
    const auto m0 = obc_eigenstate(spec, 0);
    CHECK(std::abs(m0.amplitudes(0) - 1.0) < 1e-15);
    CHECK(m0.amplitudes.tail(6).norm() == 0.0);
    const auto m1 = obc_eigenstate(spec, 1);
    CHECK(std::abs(m1.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(m1.amplitudes(1) + 1.0 / std::sqrt(2.0)) < 1e-15);
  }
  SUBCASE("nu = 0 amplitudes are signed binomials peaked at l/2") {
    const ChainSpec spec{kOsc, 0, 100, Obc{}};
    for (int l : {4, 17, 60, 100}) {
      const auto m = obc_eigenstate(spec, l);
      double norm2 = 0.0;
      for (int k = 0; k <= l; ++k) norm2 += std::pow(oracle::binom(l, k), 2);
      for (int k = 0; k <= l; ++k) {
        const double expected = (k % 2 ? -1.0 : 1.0) * oracle::binom(l, k) / std::sqrt(norm2);
        CHECK(std::abs(m.amplitudes(k) - expected) < 1e-12);
      }
      Eigen::Index peak = 0;
      m.amplitudes.cwiseAbs().maxCoeff(&peak);
      CHECK(std::abs(static_cast<double>(peak) - l / 2.0) <= 0.5);
    }
  }
  SUBCASE("eigen-residual against the OBC matrix") {
    for (int nu : {-3, 0, 2}) {
      const ChainSpec spec{kOsc, nu, 40, Obc{}};
      const ComplexMatrix h = build_chain_matrix(spec);
      for (int l = 0; l <= 40; ++l) {
        const auto m = obc_eigenstate(spec, l);
        CHECK(std::abs(m.amplitudes.norm() - 1.0) < 1e-14);
        CHECK((h * m.amplitudes - m.energy * m.amplitudes).norm() < 1e-10);
      }
    }
  }
  SUBCASE("matches the dense eigensolver on a small chain") {
    const ChainSpec spec{kOsc, 1, 6, Obc{}};
    Eigen::ComplexEigenSolver<ComplexMatrix> es(build_chain_matrix(spec));
    for (int l = 0; l <= 6; ++l) {
      const auto m = obc_eigenstate(spec, l);
      Eigen::Index k = 0;
      (es.eigenvalues().array() - m.energy).abs().minCoeff(&k);
      const ComplexVector v = es.eigenvectors().col(k).normalized();
      CHECK(std::abs(std::abs(v.dot(m.amplitudes)) - 1.0) < 1e-10);
    }
  }
  CHECK_THROWS_AS(obc_eigenstate({kOsc, 0, 3, Obc{}}, 4), InvalidArgument);
}

TEST_CASE("sIBC modes") {
  SUBCASE("anomalous mode E = 0.5 i kappa") {
    const auto m = sibc_mode(kOsc, 0, 0.5 * kIKappa, 1001);
    CHECK(m.normalization == Normalization::FirstSiteOne);
    CHECK(m.admissible);
    for (int j = 0; j < 1000; ++j) {
      const Complex ratio = m.amplitudes(j + 1) / m.amplitudes(j);
      CHECK(std::abs(ratio - (j + 0.5) / (j + 1.0)) < 1e-13);
    }
    // rho_j = Gamma(j + 1/2) / (Gamma(1/2) Gamma(j + 1)) ~ 1/sqrt(pi j)
    CHECK(m.amplitudes(1000).real() * std::sqrt(kPi * 1000.0) == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("E = 0 is the steady state") {
    const auto m = sibc_mode(kOsc, 0, 0.0, 20);
    CHECK(m.amplitudes(0) == Complex{1.0, 0.0});
    CHECK(m.amplitudes.tail(19).norm() == 0.0);
    CHECK(m.admissible);
  }
  SUBCASE("E = i kappa sits on the loop: flat, not admissible") {
    const auto m = sibc_mode(kOsc, 0, kIKappa, 200);
    for (int j = 0; j < 200; ++j) CHECK(std::abs(m.amplitudes(j) - 1.0) < 1e-12);
    CHECK_FALSE(m.admissible);
  }
  SUBCASE("outside the loop the profile diverges") {
    const auto m = sibc_mode(kOsc, 0, Complex{100.0, 10.0}, 3000);
    CHECK_FALSE(m.admissible);
    CHECK(m.normalization == Normalization::MaxAbsOne);
    CHECK(m.amplitudes.allFinite());
  }
  SUBCASE("interior energy: running D^-1 ln|R| ends negative and keeps falling") {
    const Complex e{1.0, -0.1 * 100.5};
    double previous = 0.0;
    for (int j = 250; j <= 1000; j += 50) {
      const double lr = r_product(kOsc, 0, j, e).log_mag;
      if (j > 250) CHECK(lr < previous);
      previous = lr;
    }
    CHECK(previous / 1000.0 < -0.01);
    CHECK(sibc_mode(kOsc, 0, e, 1001).admissible);
  }
}

TEST_CASE("loop tracing") {
  for (int nu : {0, 1, -2}) {
    const LoopTrace loop = loop_trace(kOsc, nu, 50, 64);
    REQUIRE(loop.points.size() == 64);
    CHECK(loop.gaps() == 0);
    int within = 0;
    for (const auto& pt : loop.points) {
      REQUIRE(pt);
      CHECK(std::abs(r_product(kOsc, nu, 50, *pt).log_mag) < 1e-8);
      // Reflected point is on the loop too.
      const Complex mirrored = 2.0 * nu * kOsc.omega - std::conj(*pt);
      CHECK(std::abs(r_product(kOsc, nu, 50, mirrored).log_mag) < 1e-8);
      // Semi-analytic curve is near zero on the traced loop; the continuum
      // approximation is worst at the two corners E~/D -> 0, -1 (error ~ ln D / D).
      const double v = std::abs(scaled_log_r(kOsc, nu, 50, *pt));
      CHECK(v < (1.0 + std::log(50.0)) / 50);
      if (v < 2.0 / 50) ++within;
    }
    CHECK(within >= 0.8 * 64);
  }
  const LoopTrace loop = loop_trace(kOsc, 0, 50, 64);
  CHECK(std::abs(*loop.points[0] - kIKappa) < 1e-6);
  CHECK_THROWS_AS(loop_trace(kOsc, 0, 50, 8), InvalidArgument);
}

TEST_CASE("winding numbers") {
  CHECK(winding_number(kOsc, 0, 50, 0.5 * kIKappa, 256).w == -1);
  CHECK(winding_number(kOsc, 0, 50, 2.0 * 50 * kIKappa, 256).w == 0);

  SUBCASE("agrees with dense determinant winding") {
    const int dim = 6;
    for (Complex omega : {Complex{0.0, 0.05}, Complex{0.1, -0.3}, Complex{0.0, 2.0}, Complex{1.0, 0.0}}) {
      const int dense = oracle::dense_det_winding(
          [&](double theta) { return build_chain_matrix({kOsc, 0, dim, Tbc{theta}}); }, omega, 4096);
      CHECK(winding_number(kOsc, 0, dim, omega, 64).w == dense);
    }
  }
  SUBCASE("winding -1 exactly where |R| < 1") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> re(-2.5, 2.5), im(-5.5, 0.5);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const Complex omega{re(gen), im(gen)};
      const LogComplex r = r_product(kOsc, 0, 50, omega);
      if (!r.zero && std::abs(r.log_mag) < 1e-3) continue;
      const auto res = winding_number(kOsc, 0, 50, omega, 64);
      CHECK((res.w == -1) == res.magnitude_test);
      CHECK((res.w == -1 || res.w == 0));
      ++checked;
    }
    CHECK(checked > 250);
  }
  SUBCASE("ambiguous near the loop") {
    const LoopTrace loop = loop_trace(kOsc, 0, 50, 16);
    CHECK_THROWS_AS(winding_number(kOsc, 0, 50, *loop.points[3], 128), AmbiguousResult);
  }
  CHECK_THROWS_AS(winding_number(kOsc, 0, 50, 0.5 * kIKappa, 32), InvalidArgument);
}

TEST_CASE("ridge divergence sum") {
  const Complex e{0.3, -0.55};
  const double s1 = ridge_divergence_sum(kOsc, 0, 1000, e);
  const double s2 = ridge_divergence_sum(kOsc, 0, 2000, e);
  CHECK(std::abs((s2 - s1) / std::log(2.0) - 1.0) < 0.05);
  double prev = ridge_divergence_sum(kOsc, 1, 20, e);
  for (int dim = 21; dim < 60; ++dim) {
    const double s = ridge_divergence_sum(kOsc, 1, dim, e);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("skin effect density") {
  const ChainSpec spec{kOsc, 0, 100, Obc{}};
  const auto density = skin_effect_density(spec);
  double total = 0.0, head = 0.0;
  for (int j = 0; j <= 100; ++j) total += density[j];
  for (int j = 0; j < 10; ++j) head += density[j];
  CHECK(total == doctest::Approx(101.0).epsilon(1e-12));
  CHECK(head > 10.0);
  const auto top = obc_eigenstate(spec, 100);
  Eigen::Index peak = 0;
  top.amplitudes.cwiseAbs2().maxCoeff(&peak);
  CHECK(peak == 50);
}
