#include "fockskin/fock_lattice.hpp"

#include <cmath>
#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "fockskin/errors.hpp"

namespace fockskin {

void OscillatorParams::validate() const {
  if (!std::isfinite(omega)) throw InvalidArgument("omega must be finite");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("kappa must be positive");
}

bool is_open(const BoundaryCondition& bc) { return std::holds_alternative<Obc>(bc); }

double twist_angle(const BoundaryCondition& bc) {
  if (const auto* t = std::get_if<Tbc>(&bc)) return std::remainder(t->theta, kTwoPi);
  return 0.0;
}

Complex wrap_phase(const BoundaryCondition& bc) {
  if (is_open(bc)) return 0.0;
  if (std::holds_alternative<Pbc>(bc)) return 1.0;
  const double theta = twist_angle(bc);
  if (theta == 0.0) return 1.0;
  return std::polar(1.0, -theta);
}

void ChainSpec::validate() const {
  params.validate();
  if (dim < 1) throw InvalidArgument("chain dimension must be >= 1, got " + std::to_string(dim));
}

Complex onsite(const OscillatorParams& p, int nu, int j) {
  const int a = std::abs(nu);
  return {nu * p.omega, -p.kappa * static_cast<double>(2 * j + a) / 2.0};
}

Complex hopping(const OscillatorParams& p, int nu, int j) {
  const double a = std::abs(nu);
  return {0.0, p.kappa * std::sqrt((j + 1.0) * (j + a + 1.0))};
}

ComplexMatrix build_chain_matrix(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.sites();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    h(j, j) = onsite(spec, j);
    if (j + 1 < n) h(j, j + 1) = hopping(spec, j);
  }
  if (!is_open(spec.bc)) h(spec.dim, 0) = wrap_phase(spec.bc) * hopping(spec, spec.dim);
  return h;
}

ComplexMatrix build_liouvillian(const OscillatorParams& p, int cutoff) {
  p.validate();
  if (cutoff < 1) throw InvalidArgument("Fock cutoff must be >= 1");
  ComplexMatrix ham = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int m = 0; m <= cutoff; ++m) ham(m, m) = p.omega * (m + 0.5);
  return build_liouvillian(ham, p.kappa, cutoff);
}

ComplexMatrix build_liouvillian(const ComplexMatrix& hamiltonian, double kappa, int cutoff) {
  if (cutoff < 1) throw InvalidArgument("Fock cutoff must be >= 1");
  const int n = cutoff + 1;
  if (hamiltonian.rows() != n || hamiltonian.cols() != n)
    throw InvalidArgument("Hamiltonian size does not match Fock cutoff");

  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (int m = 0; m + 1 < n; ++m) a(m, m + 1) = std::sqrt(m + 1.0);
  const ComplexMatrix number = a.adjoint() * a;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);

  ComplexMatrix coherent = Eigen::kroneckerProduct(hamiltonian, id).eval();
  coherent -= Eigen::kroneckerProduct(id, hamiltonian.transpose()).eval();

  ComplexMatrix dissipator = 2.0 * Eigen::kroneckerProduct(a, a.conjugate()).eval();
  dissipator -= Eigen::kroneckerProduct(number, id).eval();
  dissipator -= Eigen::kroneckerProduct(id, number).eval();

  return coherent + (kI * kappa / 2.0) * dissipator;
}

namespace {

// Basis index of site j of chain nu.
int chain_site_index(int nu, int j, int cutoff) {
  const int a = std::abs(nu);
  return liouvillian_index(j + (a + nu) / 2, j + (a - nu) / 2, cutoff);
}

}  // namespace

std::map<int, ComplexMatrix> block_decompose(const ComplexMatrix& liouvillian,
                                            const OscillatorParams& p, int cutoff) {
  const int n = cutoff + 1;
  if (cutoff < 1 || liouvillian.rows() != n * n || liouvillian.cols() != n * n)
    throw InvalidArgument("matrix size does not match Fock cutoff");

  for (int r = 0; r < n * n; ++r) {
    for (int c = 0; c < n * n; ++c) {
      const int nu_r = r / n - r % n;
      const int nu_c = c / n - c % n;
      if (nu_r != nu_c && liouvillian(r, c) != Complex{0.0, 0.0})
        throw StructuralError("nonzero coupling between chains " + std::to_string(nu_r) + " and " +
                              std::to_string(nu_c));
    }
  }

  // Kronecker assembly rounds sqrt(m+1)*sqrt(n+1) differently from the chain formula.
  constexpr double kUlps = 64.0 * std::numeric_limits<double>::epsilon();

  std::map<int, ComplexMatrix> blocks;
  for (int nu = -cutoff; nu <= cutoff; ++nu) {
    const int size = cutoff - std::abs(nu) + 1;
    ComplexMatrix block(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        block(i, j) = liouvillian(chain_site_index(nu, i, cutoff), chain_site_index(nu, j, cutoff));

    ComplexMatrix expected;
    if (size == 1) {
      expected = ComplexMatrix::Constant(1, 1, onsite(p, nu, 0));
    } else {
      expected = build_chain_matrix(ChainSpec{p, nu, size - 1, Obc{}});
    }
    const double scale = std::max(1.0, expected.cwiseAbs().maxCoeff());
    if ((block - expected).cwiseAbs().maxCoeff() > kUlps * scale)
      throw StructuralError("block nu=" + std::to_string(nu) + " differs from the OBC chain matrix");

    blocks.emplace(nu, std::move(block));
  }
  return blocks;
}

}  // namespace fockskin
