#pragma once

#include <functional>

#include "fockskin/types.hpp"

namespace fockskin {

/// Total change of arg f(theta) for theta in [a, b], sampled on a uniform
/// grid of n intervals. Steps whose principal increment exceeds pi/4 are
/// subdivided (up to max_depth halvings) so fast swings near a zero of f are
/// followed. Throws NumericalFailure if f vanishes or refinement runs out.
double unwrapped_phase_change(const std::function<Complex(double)>& f, double a, double b, int n,
                              int max_depth = 40);

/// Winding of the closed curve theta -> f(theta), theta in [0, 2pi), around 0.
/// Throws NumericalFailure if the unwrapped total is not close to a multiple of 2pi.
int winding_of_closed_curve(const std::function<Complex(double)>& f, int n);

}  // namespace fockskin
