#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fockskin/fock_lattice.hpp"
#include "fockskin/log_complex.hpp"
#include "fockskin/types.hpp"

namespace fockskin {

enum class SpectrumMethod { NumericEigensolver, AnalyticObc, AnalyticRoots };

std::string to_string(SpectrumMethod m);

/// Eigenvalues sorted canonically, with where they came from.
struct ComplexSpectrum {
  std::vector<Complex> values;
  SpectrumMethod method = SpectrumMethod::NumericEigensolver;
  std::string model;  // "chain" or "annihilation"
  OscillatorParams params;
  int nu = 0;
  int dim = 0;
  BoundaryCondition bc = Obc{};
};

enum class ModeKind { ObcEigenstate, SibcSkinMode, Coherent, Custom };
enum class Normalization { UnitNorm, FirstSiteOne, MaxAbsOne };

std::string to_string(ModeKind k);

struct ModeVector {
  ComplexVector amplitudes;
  Complex energy;
  ModeKind kind = ModeKind::Custom;
  int nu = 0;
  Normalization normalization = Normalization::UnitNorm;
  /// sIBC only: true when the profile decays into the bulk.
  bool admissible = false;
};

struct WindingResult {
  Complex omega;
  int w = 0;
  bool magnitude_test = false;
  int n_theta = 0;
};

/// R_nu^(D)(E) = prod_{j=0}^{D} (E - h_j)/t_j in log domain. Exact-zero flag
/// when E hits an onsite energy.
LogComplex r_product(const OscillatorParams& p, int nu, int dim, Complex energy);

/// Large-D continuum approximation to D^-1 ln|R|. Throws DomainError at the
/// logarithmic singularities E~/D in {0, -1}.
double scaled_log_r(const OscillatorParams& p, int nu, int dim, Complex energy);

/// Dense eigenvalues of the PBC/TBC chain, Newton-refined on the characteristic
/// equation R(E) = e^{-i theta}.
ComplexSpectrum pbc_spectrum_numeric(const ChainSpec& spec);

/// Plain dense eigenvalues of the OBC chain matrix, no refinement.
ComplexSpectrum obc_spectrum_numeric(const ChainSpec& spec);

/// nu*omega - i(2l+|nu|)kappa/2 for l = 0..D.
ComplexSpectrum obc_spectrum_analytic(const ChainSpec& spec);

/// OBC eigenvector for level l from the bidiagonal recurrence, unit-normalized,
/// length spec.sites().
ModeVector obc_eigenstate(const ChainSpec& spec, int level);

/// Semi-infinite-boundary mode: rho_0 = 1, rho_{j+1} = gamma_j(E) rho_j on `sites` sites.
ModeVector sibc_mode(const OscillatorParams& p, int nu, Complex energy, int sites);

struct LoopTrace {
  Complex anchor;
  std::vector<double> angles;
  std::vector<std::optional<Complex>> points;  // nullopt where the bracket failed

  std::size_t gaps() const;
  /// Largest |E - anchor| over the resolved points.
  double radius() const;
};

/// Level set |R| = 1 by radial bisection from the OBC-spectrum centroid.
/// Ray k points along pi/2 + 2pi k/n_angles.
LoopTrace loop_trace(const OscillatorParams& p, int nu, int dim, int n_angles);

/// Spectral winding of the TBC chain around Omega. Throws AmbiguousResult
/// when |ln|R(Omega)|| < off_band.
WindingResult winding_number(const OscillatorParams& p, int nu, int dim, Complex omega,
                             int n_theta, double off_band = 1e-3);

/// Partial sum whose divergence bounds the sIBC spectrum; uses E~ = E/kappa.
double ridge_divergence_sum(const OscillatorParams& p, int nu, int dim, Complex energy);

/// Total |amplitude|^2 of all unit-normalized OBC eigenstates, per site.
std::vector<double> skin_effect_density(const ChainSpec& spec);

}  // namespace fockskin
