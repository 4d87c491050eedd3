#pragma once

#include <map>
#include <variant>

#include "fockskin/types.hpp"

namespace fockskin {

/// Damped oscillator constants (hbar = 1). kappa must be positive.
struct OscillatorParams {
  double omega = 1.0;
  double kappa = 0.1;

  void validate() const;
};

struct Obc {};
struct Pbc {};
/// Twisted boundary: the wrap link picks up e^{-i theta}; theta is taken mod 2pi.
struct Tbc {
  double theta = 0.0;
};

using BoundaryCondition = std::variant<Obc, Pbc, Tbc>;

bool is_open(const BoundaryCondition& bc);
/// Factor multiplying the wrap hopping: 0 for OBC, 1 for PBC, e^{-i theta} for TBC.
Complex wrap_phase(const BoundaryCondition& bc);
/// theta reduced to [-pi, pi] (0 for PBC).
double twist_angle(const BoundaryCondition& bc);

/// One decoupled chain nu of the vectorized Liouvillian, truncated to sites 0..dim.
struct ChainSpec {
  OscillatorParams params;
  int nu = 0;
  int dim = 1;
  BoundaryCondition bc = Obc{};

  int sites() const { return dim + 1; }
  void validate() const;
};

/// h_{nu j} = nu*omega - i*kappa*(2j + |nu|)/2
Complex onsite(const OscillatorParams& p, int nu, int j);
/// t_{nu j} = i*kappa*sqrt((j+1)(j+|nu|+1))
Complex hopping(const OscillatorParams& p, int nu, int j);

inline Complex onsite(const ChainSpec& s, int j) { return onsite(s.params, s.nu, j); }
inline Complex hopping(const ChainSpec& s, int j) { return hopping(s.params, s.nu, j); }

/// Upper bidiagonal chain matrix; PBC/TBC add the wrap entry (D, 0).
ComplexMatrix build_chain_matrix(const ChainSpec& spec);

/// Vectorized Lindblad generator on the two-mode basis |m n>, index m*(M+1)+n,
/// assembled from Kronecker products of the truncated single-mode operators.
ComplexMatrix build_liouvillian(const OscillatorParams& p, int cutoff);

/// Same, for an arbitrary single-mode Hamiltonian on the (cutoff+1)-level truncation.
ComplexMatrix build_liouvillian(const ComplexMatrix& hamiltonian, double kappa, int cutoff);

/// Index of |m n> in the two-mode basis used by build_liouvillian.
inline int liouvillian_index(int m, int n, int cutoff) { return m * (cutoff + 1) + n; }

/// Splits a Liouvillian into its nu = m - n blocks (site j of chain nu is
/// |j + (|nu|+nu)/2, j + (|nu|-nu)/2>). Throws StructuralError if any entry
/// couples different nu, or if a block disagrees with the OBC chain matrix
/// built from p.
std::map<int, ComplexMatrix> block_decompose(const ComplexMatrix& liouvillian,
                                            const OscillatorParams& p, int cutoff);

}  // namespace fockskin
