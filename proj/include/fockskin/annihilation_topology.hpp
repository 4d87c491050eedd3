#pragma once

#include <vector>

#include "fockskin/fock_lattice.hpp"
#include "fockskin/spectral_topology.hpp"
#include "fockskin/types.hpp"

namespace fockskin {

/// The annihilation operator as a hopping chain t_j = sqrt(j+1) on sites 0..dim.
struct AnnihilationSpec {
  int dim = 1;
  BoundaryCondition bc = Obc{};
  int power = 1;

  void validate() const;
};

/// Upper shift with t_j = sqrt(j+1). PBC adds (D,0) = sqrt(D+1); TBC additionally
/// multiplies every link by e^{-i theta/(D+1)} (theta not reduced).
ComplexMatrix build_annihilation(const AnnihilationSpec& spec);

/// build_annihilation(spec) raised to spec.power.
ComplexMatrix build_annihilation_power(const AnnihilationSpec& spec);

ComplexSpectrum annihilation_spectrum_numeric(const AnnihilationSpec& spec);

/// Roots of E^{D+1} = sqrt((D+1)!): radius ((D+1)!)^{1/(2(D+1))}, arguments 2 pi l/(D+1).
ComplexSpectrum pbc_roots_analytic(int dim);

/// Radius of the analytic PBC root circle, via lgamma.
double pbc_root_radius(int dim);

struct CoherentMode {
  ModeVector mode;
  /// ||a v - alpha v|| / ||v|| with the OBC annihilation matrix on the same sites.
  double residual = 0.0;
  /// e^{-|alpha|^2} sum_{j >= sites} |alpha|^{2j}/j!
  double tail_bound = 0.0;
};

/// Truncated coherent state on `sites` sites. Throws InvalidArgument when the
/// discarded Poisson weight exceeds max_tail.
CoherentMode coherent_mode(Complex alpha, int sites, double max_tail = 1e-12);

/// Winding of det((a(theta))^p - Omega) over theta in [0, 2pi] for the TBC family.
/// magnitude_test reports |Omega| < r^p, r = pbc_root_radius(dim).
WindingResult winding_power(int power, int dim, Complex omega, int n_theta,
                            double off_band = 1e-3);

struct DegenerateModes {
  std::vector<ModeVector> modes;
  std::vector<double> residuals;  // ||a^p v - E v|| / ||v||
  double min_singular_value = 0.0;
};

/// The p coherent states |alpha_q>, alpha_q = |E|^{1/p} e^{i(arg E + 2 pi q)/p},
/// all with a^p eigenvalue E. Throws InvalidArgument for E = 0.
DegenerateModes degenerate_modes(int power, Complex energy, int sites);

}  // namespace fockskin
