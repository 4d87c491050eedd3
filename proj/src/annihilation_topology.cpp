#include "fockskin/annihilation_topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "fockskin/errors.hpp"
#include "fockskin/phase_unwrap.hpp"

namespace fockskin {

void AnnihilationSpec::validate() const {
  if (dim < 1) throw InvalidArgument("annihilation chain needs dim >= 1");
  if (power < 1) throw InvalidArgument("power must be >= 1");
}

ComplexMatrix build_annihilation(const AnnihilationSpec& spec) {
  spec.validate();
  const int n = spec.dim + 1;
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) a(j, j + 1) = std::sqrt(j + 1.0);
  if (is_open(spec.bc)) return a;
  a(spec.dim, 0) = std::sqrt(static_cast<double>(n));
  if (const auto* t = std::get_if<Tbc>(&spec.bc)) a *= std::polar(1.0, -t->theta / n);
  return a;
}

ComplexMatrix build_annihilation_power(const AnnihilationSpec& spec) {
  const ComplexMatrix a = build_annihilation(spec);
  ComplexMatrix out = a;
  for (int k = 1; k < spec.power; ++k) out = out * a;
  return out;
}

ComplexSpectrum annihilation_spectrum_numeric(const AnnihilationSpec& spec) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(build_annihilation_power(spec), false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  std::vector<Complex> values(ev.data(), ev.data() + ev.size());
  std::sort(values.begin(), values.end(), canonical_less);
  return {std::move(values), SpectrumMethod::NumericEigensolver, "annihilation", {}, 0, spec.dim,
          spec.bc};
}

double pbc_root_radius(int dim) {
  if (dim < 1) throw InvalidArgument("dim must be >= 1");
  const double n = dim + 1.0;
  return std::exp(std::lgamma(n + 1.0) / (2.0 * n));
}

ComplexSpectrum pbc_roots_analytic(int dim) {
  const double r = pbc_root_radius(dim);
  const int n = dim + 1;
  std::vector<Complex> values;
  values.reserve(n);
  for (int l = 0; l < n; ++l) values.push_back(std::polar(r, kTwoPi * l / n));
  std::sort(values.begin(), values.end(), canonical_less);
  return {std::move(values), SpectrumMethod::AnalyticRoots, "annihilation", {}, 0, dim, Pbc{}};
}

namespace {

// log of the Poisson weight e^{-x} x^j / j!
double log_poisson(double x, int j) {
  if (x == 0.0) return j == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return -x + j * std::log(x) - std::lgamma(j + 1.0);
}

double poisson_tail(double x, int from) {
  double tail = 0.0;
  for (int j = from;; ++j) {
    const double term = std::exp(log_poisson(x, j));
    tail += term;
    if (j > x && term <= 1e-18 * std::max(tail, 1e-300)) break;
    if (j > from + 100000) break;
  }
  return tail;
}

}  // namespace

CoherentMode coherent_mode(Complex alpha, int sites, double max_tail) {
  if (sites < 1) throw InvalidArgument("coherent mode needs at least one site");
  const double x = std::norm(alpha);
  CoherentMode out;
  out.tail_bound = poisson_tail(x, sites);
  if (out.tail_bound > max_tail)
    throw InvalidArgument("truncation too small for |alpha|^2 = " + std::to_string(x) +
                          ": discarded weight " + std::to_string(out.tail_bound));

  const double phi = std::arg(alpha);
  ComplexVector v(sites);
  for (int j = 0; j < sites; ++j) {
    v(j) = x == 0.0 ? (j == 0 ? 1.0 : 0.0) : std::polar(std::exp(0.5 * log_poisson(x, j)), j * phi);
  }
  if (sites >= 2) {
    const ComplexMatrix a = build_annihilation({sites - 1, Obc{}, 1});
    out.residual = (a * v - alpha * v).norm() / v.norm();
  } else {
    out.residual = std::abs(alpha);
  }

  out.mode.amplitudes = std::move(v);
  out.mode.energy = alpha;
  out.mode.kind = ModeKind::Coherent;
  out.mode.nu = 0;
  out.mode.normalization = Normalization::UnitNorm;
  out.mode.admissible = true;
  return out;
}

namespace {

// Unit complex with the phase of det(m); throws if m is singular.
Complex determinant_phase(const ComplexMatrix& m) {
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  const ComplexMatrix& packed = lu.matrixLU();
  Complex phase = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const Complex u = packed(i, i);
    if (u == Complex{0.0, 0.0}) throw NumericalFailure("singular matrix on the winding path");
    phase *= u / std::abs(u);
  }
  return phase;
}

}  // namespace

WindingResult winding_power(int power, int dim, Complex omega, int n_theta, double off_band) {
  AnnihilationSpec spec{dim, Pbc{}, power};
  spec.validate();
  if (n_theta < 64) throw InvalidArgument("winding_power needs n_theta >= 64");
  const double locus = std::pow(pbc_root_radius(dim), power);
  if (std::abs(std::abs(omega) - locus) < off_band * locus)
    throw AmbiguousResult("reference energy lies on the spectral circle of a^p");

  const ComplexMatrix base = build_annihilation_power(spec);
  const int n = dim + 1;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  // (e^{-i theta/(D+1)} a)^p = e^{-i p theta/(D+1)} a^p
  const auto det_phase = [&](double theta) {
    return determinant_phase(std::polar(1.0, -power * theta / n) * base - omega * id);
  };

  WindingResult out;
  out.omega = omega;
  out.w = winding_of_closed_curve(det_phase, n_theta);
  out.magnitude_test = std::abs(omega) < locus;
  out.n_theta = n_theta;
  return out;
}

DegenerateModes degenerate_modes(int power, Complex energy, int sites) {
  if (power < 1) throw InvalidArgument("power must be >= 1");
  if (energy == Complex{0.0, 0.0}) throw InvalidArgument("degenerate modes need E != 0");
  const double radius = std::pow(std::abs(energy), 1.0 / power);
  const ComplexMatrix ap = build_annihilation_power({sites - 1, Obc{}, power});

  DegenerateModes out;
  ComplexMatrix stacked(sites, power);
  for (int q = 0; q < power; ++q) {
    const Complex alpha = std::polar(radius, (std::arg(energy) + kTwoPi * q) / power);
    CoherentMode c = coherent_mode(alpha, sites);
    const ComplexVector& v = c.mode.amplitudes;
    out.residuals.push_back((ap * v - energy * v).norm() / v.norm());
    stacked.col(q) = v / v.norm();
    c.mode.energy = energy;
    out.modes.push_back(std::move(c.mode));
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(stacked);
  out.min_singular_value = svd.singularValues().minCoeff();

  const double worst = *std::max_element(out.residuals.begin(), out.residuals.end());
  if (worst > 1e-6)
    throw NumericalFailure("coherent modes are not eigenvectors of a^p: residual " +
                           std::to_string(worst));
  if (out.min_singular_value <= 1e-8) throw NumericalFailure("degenerate modes are not independent");
  return out;
}

}  // namespace fockskin
