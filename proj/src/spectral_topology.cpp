#include "fockskin/spectral_topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "fockskin/errors.hpp"
#include "fockskin/phase_unwrap.hpp"

namespace fockskin {

std::string to_string(SpectrumMethod m) {
  switch (m) {
    case SpectrumMethod::NumericEigensolver: return "numeric-eigensolver";
    case SpectrumMethod::AnalyticObc: return "analytic-OBC";
    case SpectrumMethod::AnalyticRoots: return "analytic-roots";
  }
  return "unknown";
}

std::string to_string(ModeKind k) {
  switch (k) {
    case ModeKind::ObcEigenstate: return "obc-eigenstate";
    case ModeKind::SibcSkinMode: return "sibc-skin-mode";
    case ModeKind::Coherent: return "coherent";
    case ModeKind::Custom: return "custom";
  }
  return "unknown";
}

LogComplex r_product(const OscillatorParams& p, int nu, int dim, Complex energy) {
  if (dim < 0) throw InvalidArgument("R needs D >= 0");
  LogComplex r = LogComplex::one();
  for (int j = 0; j <= dim; ++j) {
    const Complex diff = energy - onsite(p, nu, j);
    if (diff == Complex{0.0, 0.0}) return LogComplex::zero_value();
    r *= LogComplex::from(diff);
    r /= LogComplex::from(hopping(p, nu, j));
  }
  return r;
}

namespace {

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

double f_term(Complex a, double x, double y) {
  return a.real() * std::log(std::abs(a)) - a.imag() * std::arg(a) - (xlogx(x) + xlogx(y)) / 2.0;
}

}  // namespace

double scaled_log_r(const OscillatorParams& p, int nu, int dim, Complex energy) {
  if (dim < 2) throw InvalidArgument("scaled_log_r needs D >= 2");
  const double d = dim;
  const double a = std::abs(nu);
  const Complex shifted = (energy + Complex{-nu * p.omega, a * p.kappa}) / (kI * p.kappa);
  const Complex scaled = shifted / d;
  if (scaled == Complex{0.0, 0.0} || scaled + 1.0 == Complex{0.0, 0.0})
    throw DomainError("scaled energy sits on a logarithmic singularity");
  return f_term(1.0 + scaled, 1.0 + a / d, 1.0 + 1.0 / d) - f_term(scaled, a / d, 1.0 / d);
}

namespace {

// Newton iteration on ln R(E) - ln(target) = 2 pi i m, branch picked at each step.
std::optional<Complex> refine_pbc_root(const ChainSpec& spec, Complex start, Complex target) {
  const double tol = 4.0 * std::numeric_limits<double>::epsilon();
  const double log_target_phase = std::arg(target);
  Complex e = start;
  for (int iter = 0; iter < 60; ++iter) {
    const LogComplex r = r_product(spec.params, spec.nu, spec.dim, e);
    if (r.zero) return std::nullopt;
    const Complex residual{r.log_mag, std::remainder(r.phase - log_target_phase, kTwoPi)};
    Complex slope = 0.0;
    for (int j = 0; j <= spec.dim; ++j) slope += 1.0 / (e - onsite(spec, j));
    const Complex step = residual / slope;
    e -= step;
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return std::nullopt;
    if (std::abs(step) <= tol * (1.0 + std::abs(e))) return e;
  }
  return std::nullopt;
}

}  // namespace

ComplexSpectrum pbc_spectrum_numeric(const ChainSpec& spec) {
  if (is_open(spec.bc)) throw InvalidArgument("pbc_spectrum_numeric needs a PBC or TBC chain");
  const ComplexMatrix h = build_chain_matrix(spec);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(h, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");

  const Complex target = wrap_phase(spec.bc);
  std::vector<Complex> raw(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
  std::vector<Complex> refined = raw;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto polished = refine_pbc_root(spec, raw[k], target);
    if (polished && std::abs(*polished - raw[k]) <= 1e-2 * (1.0 + std::abs(raw[k])))
      refined[k] = *polished;
  }
  // Two raw values that converged onto the same root: keep both unrefined.
  for (std::size_t a = 0; a < refined.size(); ++a) {
    for (std::size_t b = a + 1; b < refined.size(); ++b) {
      if (std::abs(refined[a] - refined[b]) <= 1e-9 * (1.0 + std::abs(refined[a])) &&
          std::abs(raw[a] - raw[b]) > 1e-9 * (1.0 + std::abs(raw[a]))) {
        refined[a] = raw[a];
        refined[b] = raw[b];
      }
    }
  }
  std::sort(refined.begin(), refined.end(), canonical_less);
  return {std::move(refined), SpectrumMethod::NumericEigensolver, "chain", spec.params, spec.nu,
          spec.dim, spec.bc};
}

ComplexSpectrum obc_spectrum_numeric(const ChainSpec& spec) {
  if (!is_open(spec.bc)) throw InvalidArgument("obc_spectrum_numeric needs an OBC chain");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(build_chain_matrix(spec), false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  std::vector<Complex> values(ev.data(), ev.data() + ev.size());
  std::sort(values.begin(), values.end(), canonical_less);
  return {std::move(values), SpectrumMethod::NumericEigensolver, "chain", spec.params, spec.nu,
          spec.dim, spec.bc};
}

ComplexSpectrum obc_spectrum_analytic(const ChainSpec& spec) {
  spec.validate();
  std::vector<Complex> values;
  values.reserve(spec.sites());
  for (int l = 0; l <= spec.dim; ++l) values.push_back(onsite(spec, l));
  std::sort(values.begin(), values.end(), canonical_less);
  return {std::move(values), SpectrumMethod::AnalyticObc, "chain", spec.params, spec.nu, spec.dim,
          Obc{}};
}

namespace {

// Amplitudes from log-domain partial products, rescaled so the largest has |.| = 1.
ComplexVector rescale_log_profile(const std::vector<LogComplex>& logs) {
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& z : logs)
    if (!z.zero) peak = std::max(peak, z.log_mag);
  ComplexVector out(static_cast<Eigen::Index>(logs.size()));
  for (std::size_t j = 0; j < logs.size(); ++j) {
    const auto& z = logs[j];
    out(static_cast<Eigen::Index>(j)) =
        z.zero ? Complex{0.0, 0.0} : std::polar(std::exp(z.log_mag - peak), z.phase);
  }
  return out;
}

}  // namespace

ModeVector obc_eigenstate(const ChainSpec& spec, int level) {
  spec.validate();
  if (level < 0 || level > spec.dim)
    throw InvalidArgument("OBC level must lie in 0..D, got " + std::to_string(level));
  const Complex energy = onsite(spec, level);
  std::vector<LogComplex> logs(spec.sites(), LogComplex::zero_value());
  logs[0] = LogComplex::one();
  for (int j = 0; j < level; ++j) {
    logs[j + 1] = logs[j] * LogComplex::from(energy - onsite(spec, j)) /
                  LogComplex::from(hopping(spec, j));
  }
  ModeVector mode;
  mode.amplitudes = rescale_log_profile(logs);
  mode.amplitudes /= mode.amplitudes.norm();
  mode.energy = energy;
  mode.kind = ModeKind::ObcEigenstate;
  mode.nu = spec.nu;
  mode.normalization = Normalization::UnitNorm;
  mode.admissible = true;
  return mode;
}

ModeVector sibc_mode(const OscillatorParams& p, int nu, Complex energy, int sites) {
  p.validate();
  if (sites < 1) throw InvalidArgument("sIBC mode needs at least one site");
  std::vector<LogComplex> logs(sites);
  logs[0] = LogComplex::one();
  for (int j = 0; j + 1 < sites; ++j)
    logs[j + 1] = logs[j] * LogComplex::from(energy - onsite(p, nu, j)) /
                  LogComplex::from(hopping(p, nu, j));

  ModeVector mode;
  mode.energy = energy;
  mode.kind = ModeKind::SibcSkinMode;
  mode.nu = nu;

  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& z : logs)
    if (!z.zero) peak = std::max(peak, z.log_mag);
  if (peak > 600.0) {
    mode.amplitudes = rescale_log_profile(logs);
    mode.normalization = Normalization::MaxAbsOne;
  } else {
    mode.amplitudes.resize(sites);
    for (int j = 0; j < sites; ++j) mode.amplitudes(j) = logs[j].value();
    mode.normalization = Normalization::FirstSiteOne;
  }

  // Decays into the bulk: running D^-1 ln|R| negative and the tail still falling.
  const auto& last = logs.back();
  if (sites == 1) {
    mode.admissible = false;
  } else if (logs[1].zero || last.zero) {
    mode.admissible = true;
  } else {
    constexpr double kEps = 1e-12;
    const auto& mid = logs[sites / 2];
    mode.admissible = last.log_mag / (sites - 1) < -kEps && last.log_mag < mid.log_mag - kEps;
  }
  return mode;
}

std::size_t LoopTrace::gaps() const {
  return static_cast<std::size_t>(std::count(points.begin(), points.end(), std::nullopt));
}

double LoopTrace::radius() const {
  double r = 0.0;
  for (const auto& pt : points)
    if (pt) r = std::max(r, std::abs(*pt - anchor));
  return r;
}

LoopTrace loop_trace(const OscillatorParams& p, int nu, int dim, int n_angles) {
  p.validate();
  if (dim < 1) throw InvalidArgument("loop_trace needs D >= 1");
  if (n_angles < 16) throw InvalidArgument("loop_trace needs at least 16 angles");

  LoopTrace trace;
  trace.anchor = Complex{nu * p.omega, -p.kappa * (dim + std::abs(nu)) / 2.0};
  const auto log_abs_r = [&](Complex e) { return r_product(p, nu, dim, e).log_mag; };

  const double start_radius = p.kappa * (dim + 1);
  for (int k = 0; k < n_angles; ++k) {
    const double angle = kPi / 2.0 + kTwoPi * k / n_angles;
    const Complex dir = std::polar(1.0, angle);
    trace.angles.push_back(angle);

    std::optional<Complex> point;
    if (log_abs_r(trace.anchor) < 0.0) {
      double lo = 0.0;
      double hi = start_radius;
      int grow = 0;
      while (log_abs_r(trace.anchor + hi * dir) <= 0.0 && grow < 200) {
        lo = hi;
        hi *= 2.0;
        ++grow;
      }
      if (grow < 200) {
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          const double v = log_abs_r(trace.anchor + mid * dir);
          if (v == 0.0) {
            lo = hi = mid;
            break;
          }
          (v < 0.0 ? lo : hi) = mid;
        }
        const Complex e_lo = trace.anchor + lo * dir;
        const Complex e_hi = trace.anchor + hi * dir;
        point = std::abs(log_abs_r(e_lo)) <= std::abs(log_abs_r(e_hi)) ? e_lo : e_hi;
      }
    }
    trace.points.push_back(point);
  }
  return trace;
}

WindingResult winding_number(const OscillatorParams& p, int nu, int dim, Complex omega,
                             int n_theta, double off_band) {
  p.validate();
  if (dim < 1) throw InvalidArgument("winding_number needs D >= 1");
  if (n_theta < 64) throw InvalidArgument("winding_number needs n_theta >= 64");
  const LogComplex r = r_product(p, nu, dim, omega);
  if (!r.zero && std::abs(r.log_mag) < off_band)
    throw AmbiguousResult("reference energy lies within the spectral-loop band");

  // det(H(theta) - Omega) = (-1)^D prod(t) * (e^{-i theta} - R(Omega)); the
  // constant prefactor cannot wind, so only the bracket is sampled. When
  // |R| > 1 the bracket is divided by |R| to stay finite.
  const Complex r_unit = r.zero ? Complex{0.0, 0.0} : std::polar(1.0, r.phase);
  const bool large = !r.zero && r.log_mag > 0.0;
  const double mag = r.zero ? 0.0 : std::exp(large ? -r.log_mag : r.log_mag);
  const auto bracket = [&](double theta) -> Complex {
    const Complex twist = std::polar(1.0, -theta);
    return large ? mag * twist - r_unit : twist - mag * r_unit;
  };

  WindingResult out;
  out.omega = omega;
  out.w = winding_of_closed_curve(bracket, n_theta);
  out.magnitude_test = r.zero || r.log_mag < 0.0;
  out.n_theta = n_theta;
  return out;
}

double ridge_divergence_sum(const OscillatorParams& p, int nu, int dim, Complex energy) {
  p.validate();
  if (dim < 0) throw InvalidArgument("ridge_divergence_sum needs D >= 0");
  const Complex scaled = energy / p.kappa;
  const double shift = std::abs(nu) / 2.0 + scaled.imag();
  const double offset = scaled.real() - nu * p.omega / p.kappa;
  double sum = 0.0;
  for (int j = 0; j <= dim; ++j) {
    const double x = j + shift;
    sum += x / (x * x + offset * offset);
  }
  return sum;
}

std::vector<double> skin_effect_density(const ChainSpec& spec) {
  spec.validate();
  std::vector<double> density(spec.sites(), 0.0);
  for (int l = 0; l <= spec.dim; ++l) {
    const ModeVector mode = obc_eigenstate(spec, l);
    for (int j = 0; j < spec.sites(); ++j) density[j] += std::norm(mode.amplitudes(j));
  }
  return density;
}

}  // namespace fockskin
