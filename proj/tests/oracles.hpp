#pragma once
// Independent reference computations used only by tests. None of these call
// into the code paths they are used to check.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;

// Roots of a z^2 + b z + c.
inline std::pair<cd, cd> quadratic_roots(cd a, cd b, cd c) {
  const cd disc = std::sqrt(b * b - 4.0 * a * c);
  return {(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)};
}

// For nu = 0, gamma_j(E) = (x + j)/(j + 1) with x = E/(i kappa), so
// R^(D) = Gamma(x + D + 1) / (Gamma(x) Gamma(D + 2)). Real x only (std::lgamma).
inline double log_abs_r_nu0_real(double x, int dim) {
  return std::lgamma(x + dim + 1.0) - std::lgamma(x) - std::lgamma(dim + 2.0);
}

// Direct (non log-domain) product for small D.
inline cd r_direct(double omega, double kappa, int nu, int dim, cd e) {
  cd r = 1.0;
  const double a = std::abs(nu);
  for (int j = 0; j <= dim; ++j) {
    const cd h{nu * omega, -kappa * (2.0 * j + a) / 2.0};
    const cd t{0.0, kappa * std::sqrt((j + 1.0) * (j + a + 1.0))};
    r *= (e - h) / t;
  }
  return r;
}

inline double binom(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// nu = 0 dynamics d rho_j/dt = -kappa j rho_j + kappa (j+1) rho_{j+1} is a pure
// death process: rho_j(t) = sum_{m >= j} C(m, j) p^j (1-p)^(m-j) rho_m(0), p = e^{-kappa t}.
inline Eigen::VectorXcd death_process_propagate(const Eigen::VectorXcd& rho0, double kappa,
                                                double t) {
  const double p = std::exp(-kappa * t);
  const auto n = rho0.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index m = j; m < n; ++m)
      out(j) += binom(static_cast<int>(m), static_cast<int>(j)) * std::pow(p, static_cast<double>(j)) *
                std::pow(1.0 - p, static_cast<double>(m - j)) * rho0(m);
  return out;
}

// Winding of theta -> det(M(theta) - omega) from dense determinants on a fine
// grid (no adaptive refinement); the grid must be fine enough by construction.
template <class MatrixOfTheta>
int dense_det_winding(MatrixOfTheta&& m_of_theta, cd omega, int n) {
  double total = 0.0;
  cd prev;
  for (int k = 0; k <= n; ++k) {
    const double theta = 2.0 * M_PI * k / n;
    Eigen::MatrixXcd m = m_of_theta(theta);
    m -= omega * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    const cd d = m.determinant();
    if (k > 0) total += std::arg(d / prev);
    prev = d;
  }
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

}  // namespace oracle
