#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "fockskin/fock_lattice.hpp"
#include "fockskin/spectral_topology.hpp"
#include "fockskin/types.hpp"

namespace fockskin {

namespace init {
struct Sibc {
  Complex energy;
};
struct ObcLevel {
  int level = 0;
};
struct Delta {
  int site = 0;
};
/// Uniform complex entries in [-1,1]^2 on sites 0..support-1 from
/// std::mt19937_64(seed), then unit-normalized.
struct Random {
  std::uint64_t seed = 0;
  int support = 10;
};
}  // namespace init

using InitialState = std::variant<init::Sibc, init::ObcLevel, init::Delta, init::Random>;

/// Initial amplitudes for `spec` (length spec.sites()).
ComplexVector initial_frame(const ChainSpec& spec, const InitialState& state);

struct EvolveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  bool cross_check = true;
  double cross_check_tol = 1e-6;
  /// Relative edge deviation against a doubled truncation that ends the trusted window.
  double horizon_tol = 1e-6;
  bool compute_horizon = true;
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<ComplexVector> frames;
  std::vector<Complex> edge_avg;
  std::vector<Complex> particle_number;
  std::vector<Complex> trace_sum;
  std::vector<double> tail_mass;
  /// Last output time whose edge sites are unaffected by truncation (see EvolveOptions).
  double trusted_until = 0.0;
  /// Largest |primary - cross-check| over the trusted frames (0 if skipped).
  double cross_check_error = 0.0;
};

/// Integrates i d|rho>/dt = H|rho> on an OBC chain and samples at multiples of dt_out.
/// Throws NumericalFailure if stepping stalls or the two propagation routes disagree.
EvolutionTrace evolve(const ChainSpec& spec, const InitialState& state, double t_max,
                      double dt_out, const EvolveOptions& options = {});

/// Same, from explicit amplitudes (no truncation horizon estimate).
EvolutionTrace evolve_frame(const ChainSpec& spec, const ComplexVector& frame, double t_max,
                            double dt_out, const EvolveOptions& options = {});

/// Mean of sites 0..4.
Complex edge_average(const ComplexVector& frame);
/// Mean of |rho_j| over sites 0..4.
double edge_mean_magnitude(const ComplexVector& frame);
/// sum_j j rho_j (for nu = 0 this is Tr(rho a^dag a)).
Complex particle_number(const ComplexVector& frame);
Complex trace_sum(const ComplexVector& frame);
/// |rho|^2 summed over the last ceil(10%) of sites.
double tail_mass(const ComplexVector& frame);

enum class EdgeObservable { Average, MeanMagnitude };

/// Least-squares slope of ln|obs(t)| over samples with t in [t_lo, t_hi].
double growth_rate_fit(const EvolutionTrace& trace, double t_lo, double t_hi,
                       EdgeObservable observable = EdgeObservable::Average);
double growth_rate_fit(std::span<const double> times, std::span<const double> magnitudes);

/// One explicit Euler step of d rho_j/dt = -kappa j rho_j + kappa (j+1) rho_{j+1}.
ComplexVector short_time_predict(const ComplexVector& frame, const OscillatorParams& p, double dt);

}  // namespace fockskin
