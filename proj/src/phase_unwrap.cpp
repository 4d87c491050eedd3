#include "fockskin/phase_unwrap.hpp"

#include <cmath>
#include <string>

#include "fockskin/errors.hpp"

namespace fockskin {

namespace {

double principal_step(Complex from, Complex to) { return std::arg(to / from); }

double refine(const std::function<Complex(double)>& f, double a, Complex fa, double b, Complex fb,
              int depth) {
  const double step = principal_step(fa, fb);
  if (std::abs(step) <= kPi / 4.0) return step;
  if (depth == 0) throw NumericalFailure("phase unwrapping did not resolve a rapid phase swing");
  const double mid = 0.5 * (a + b);
  const Complex fm = f(mid);
  if (fm == Complex{0.0, 0.0}) throw NumericalFailure("curve passes through the origin");
  return refine(f, a, fa, mid, fm, depth - 1) + refine(f, mid, fm, b, fb, depth - 1);
}

}  // namespace

double unwrapped_phase_change(const std::function<Complex(double)>& f, double a, double b, int n,
                              int max_depth) {
  if (n < 1) throw InvalidArgument("phase grid needs at least one interval");
  double total = 0.0;
  double prev_t = a;
  Complex prev = f(a);
  if (prev == Complex{0.0, 0.0}) throw NumericalFailure("curve passes through the origin");
  for (int k = 1; k <= n; ++k) {
    const double t = a + (b - a) * static_cast<double>(k) / n;
    const Complex cur = f(t);
    if (cur == Complex{0.0, 0.0}) throw NumericalFailure("curve passes through the origin");
    total += refine(f, prev_t, prev, t, cur, max_depth);
    prev_t = t;
    prev = cur;
  }
  return total;
}

int winding_of_closed_curve(const std::function<Complex(double)>& f, int n) {
  const double turns = unwrapped_phase_change(f, 0.0, kTwoPi, n) / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6)
    throw NumericalFailure("unwrapped phase is not a whole number of turns: " + std::to_string(turns));
  return static_cast<int>(rounded);
}

}  // namespace fockskin
