#include "fockskin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "fockskin/errors.hpp"

namespace fockskin {

namespace {

constexpr int kEdgeSites = 5;

double unit_uniform(std::mt19937_64& gen) {
  // 53 random bits -> [0, 1); fixed formula so output does not depend on the STL.
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct Overload {
  const ChainSpec& spec;

  ComplexVector operator()(const init::Sibc& s) const {
    return sibc_mode(spec.params, spec.nu, s.energy, spec.sites()).amplitudes;
  }
  ComplexVector operator()(const init::ObcLevel& s) const {
    return obc_eigenstate(spec, s.level).amplitudes;
  }
  ComplexVector operator()(const init::Delta& s) const {
    if (s.site < 0 || s.site >= spec.sites())
      throw InvalidArgument("delta site outside the chain: " + std::to_string(s.site));
    ComplexVector v = ComplexVector::Zero(spec.sites());
    v(s.site) = 1.0;
    return v;
  }
  ComplexVector operator()(const init::Random& s) const {
    if (s.support < 1 || s.support > spec.sites())
      throw InvalidArgument("random support must lie in 1..sites");
    std::mt19937_64 gen(s.seed);
    ComplexVector v = ComplexVector::Zero(spec.sites());
    for (int j = 0; j < s.support; ++j) {
      const double re = 2.0 * unit_uniform(gen) - 1.0;
      const double im = 2.0 * unit_uniform(gen) - 1.0;
      v(j) = Complex{re, im};
    }
    return v / v.norm();
  }
};

using State = std::vector<Complex>;

// -i H y for upper bidiagonal H.
struct BidiagonalRhs {
  std::vector<Complex> diag;
  std::vector<Complex> upper;

  void operator()(const State& y, State& dydt, double /*t*/) const {
    const std::size_t n = y.size();
    for (std::size_t j = 0; j < n; ++j) {
      Complex hy = diag[j] * y[j];
      if (j + 1 < n) hy += upper[j] * y[j + 1];
      dydt[j] = -kI * hy;
    }
  }
};

std::vector<double> output_grid(double t_max, double dt_out) {
  if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
  if (!(dt_out > 0.0) || dt_out > t_max) throw InvalidArgument("dt_out must lie in (0, t_max]");
  const auto steps = static_cast<long>(std::llround(t_max / dt_out));
  std::vector<double> times;
  times.reserve(steps + 1);
  for (long k = 0; k <= steps; ++k) times.push_back(static_cast<double>(k) * dt_out);
  return times;
}

std::vector<ComplexVector> integrate(const ChainSpec& spec, const ComplexVector& frame,
                                     const std::vector<double>& times, const EvolveOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  BidiagonalRhs rhs;
  for (int j = 0; j < spec.sites(); ++j) {
    rhs.diag.push_back(onsite(spec, j));
    rhs.upper.push_back(j + 1 < spec.sites() ? hopping(spec, j) : Complex{0.0, 0.0});
  }
  State y(frame.data(), frame.data() + frame.size());
  std::vector<ComplexVector> frames;
  frames.reserve(times.size());
  auto observer = [&](const State& s, double) {
    frames.emplace_back(Eigen::Map<const ComplexVector>(s.data(), static_cast<Eigen::Index>(s.size())));
  };
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol,
                                         odeint::runge_kutta_dopri5<State>());
  const double dt0 = std::min(1e-3 / spec.params.kappa, times.size() > 1 ? times[1] : 1.0);
  try {
    odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(), dt0, observer,
                            odeint::max_step_checker(1'000'000));
  } catch (const std::exception& e) {
    throw NumericalFailure(std::string("integration failed: ") + e.what());
  }
  if (frames.size() != times.size()) throw NumericalFailure("integrator returned too few frames");
  return frames;
}

// exp(-i H dt) by scaling-and-squaring Pade, applied repeatedly on the uniform grid.
std::vector<ComplexVector> propagate_dense(const ChainSpec& spec, const ComplexVector& frame,
                                           const std::vector<double>& times) {
  ComplexMatrix h = build_chain_matrix(spec);
  const double dt = times.size() > 1 ? times[1] - times[0] : 0.0;
  const ComplexMatrix step = (-kI * dt * h).exp();
  std::vector<ComplexVector> frames;
  frames.reserve(times.size());
  ComplexVector v = frame;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0) v = step * v;
    frames.push_back(v);
  }
  return frames;
}

EvolutionTrace assemble(std::vector<double> times, std::vector<ComplexVector> frames) {
  EvolutionTrace trace;
  for (const auto& f : frames) {
    trace.edge_avg.push_back(edge_average(f));
    trace.particle_number.push_back(particle_number(f));
    trace.trace_sum.push_back(trace_sum(f));
    trace.tail_mass.push_back(tail_mass(f));
  }
  trace.times = std::move(times);
  trace.frames = std::move(frames);
  trace.trusted_until = trace.times.back();
  return trace;
}

void cross_check(EvolutionTrace& trace, const ChainSpec& spec, const EvolveOptions& opt) {
  const auto dense = propagate_dense(spec, trace.frames.front(), trace.times);
  double worst = 0.0;
  for (std::size_t k = 0; k < trace.times.size() && trace.times[k] <= trace.trusted_until; ++k) {
    const double scale = 1.0 + dense[k].cwiseAbs().maxCoeff();
    worst = std::max(worst, (trace.frames[k] - dense[k]).cwiseAbs().maxCoeff() / scale);
  }
  trace.cross_check_error = worst;
  if (worst > opt.cross_check_tol)
    throw NumericalFailure("integrator and matrix-exponential propagation disagree by " +
                           std::to_string(worst));
}

}  // namespace

ComplexVector initial_frame(const ChainSpec& spec, const InitialState& state) {
  spec.validate();
  return std::visit(Overload{spec}, state);
}

EvolutionTrace evolve_frame(const ChainSpec& spec, const ComplexVector& frame, double t_max,
                            double dt_out, const EvolveOptions& options) {
  spec.validate();
  if (!is_open(spec.bc)) throw InvalidArgument("evolve expects an OBC chain");
  if (spec.sites() < kEdgeSites) throw InvalidArgument("evolve needs at least 5 sites");
  if (frame.size() != spec.sites()) throw InvalidArgument("frame length does not match the chain");
  auto times = output_grid(t_max, dt_out);
  auto frames = integrate(spec, frame, times, options);
  EvolutionTrace trace = assemble(std::move(times), std::move(frames));
  if (options.cross_check) cross_check(trace, spec, options);
  return trace;
}

EvolutionTrace evolve(const ChainSpec& spec, const InitialState& state, double t_max,
                      double dt_out, const EvolveOptions& options) {
  spec.validate();
  if (!is_open(spec.bc)) throw InvalidArgument("evolve expects an OBC chain");
  const ComplexVector frame = initial_frame(spec, state);

  EvolveOptions primary = options;
  primary.cross_check = false;
  EvolutionTrace trace = evolve_frame(spec, frame, t_max, dt_out, primary);

  if (options.compute_horizon) {
    ChainSpec wide = spec;
    wide.dim = 2 * spec.dim + 1;
    const ComplexVector wide_frame = initial_frame(wide, state);
    const auto wide_frames = integrate(wide, wide_frame, trace.times, options);
    trace.trusted_until = trace.times.front();
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
      const auto narrow_edge = trace.frames[k].head(kEdgeSites);
      const auto wide_edge = wide_frames[k].head(kEdgeSites);
      const double scale = wide_edge.cwiseAbs().maxCoeff();
      const double dev = (narrow_edge - wide_edge).cwiseAbs().maxCoeff();
      if (dev > options.horizon_tol * std::max(scale, 1e-300)) break;
      trace.trusted_until = trace.times[k];
    }
  }
  if (options.cross_check) cross_check(trace, spec, options);
  return trace;
}

Complex edge_average(const ComplexVector& frame) {
  if (frame.size() < kEdgeSites) throw InvalidArgument("edge average needs at least 5 sites");
  return frame.head(kEdgeSites).sum() / static_cast<double>(kEdgeSites);
}

double edge_mean_magnitude(const ComplexVector& frame) {
  if (frame.size() < kEdgeSites) throw InvalidArgument("edge average needs at least 5 sites");
  return frame.head(kEdgeSites).cwiseAbs().sum() / kEdgeSites;
}

Complex particle_number(const ComplexVector& frame) {
  Complex n = 0.0;
  for (Eigen::Index j = 1; j < frame.size(); ++j) n += static_cast<double>(j) * frame(j);
  return n;
}

Complex trace_sum(const ComplexVector& frame) { return frame.sum(); }

double tail_mass(const ComplexVector& frame) {
  const auto n = frame.size();
  const auto tail = std::max<Eigen::Index>(1, (n + 9) / 10);
  return frame.tail(tail).squaredNorm();
}

double growth_rate_fit(std::span<const double> times, std::span<const double> magnitudes) {
  if (times.size() != magnitudes.size()) throw InvalidArgument("fit inputs differ in length");
  if (times.size() < 4) throw NumericalFailure("growth fit needs at least 4 samples");
  double st = 0.0, sy = 0.0;
  std::vector<double> logs;
  logs.reserve(magnitudes.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(magnitudes[k] > 0.0)) throw NumericalFailure("growth fit needs a nonvanishing signal");
    logs.push_back(std::log(magnitudes[k]));
    st += times[k];
    sy += logs.back();
  }
  const double n = static_cast<double>(times.size());
  const double tm = st / n;
  const double ym = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    sxx += (times[k] - tm) * (times[k] - tm);
    sxy += (times[k] - tm) * (logs[k] - ym);
  }
  if (sxx == 0.0) throw NumericalFailure("growth fit window has no time spread");
  return sxy / sxx;
}

double growth_rate_fit(const EvolutionTrace& trace, double t_lo, double t_hi,
                       EdgeObservable observable) {
  std::vector<double> t, mag;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    if (trace.times[k] < t_lo || trace.times[k] > t_hi) continue;
    t.push_back(trace.times[k]);
    mag.push_back(observable == EdgeObservable::Average ? std::abs(trace.edge_avg[k])
                                                        : edge_mean_magnitude(trace.frames[k]));
  }
  return growth_rate_fit(t, mag);
}

ComplexVector short_time_predict(const ComplexVector& frame, const OscillatorParams& p, double dt) {
  ComplexVector next = frame;
  const auto n = frame.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex rate = -p.kappa * static_cast<double>(j) * frame(j);
    if (j + 1 < n) rate += p.kappa * static_cast<double>(j + 1) * frame(j + 1);
    next(j) += dt * rate;
  }
  return next;
}

}  // namespace fockskin
