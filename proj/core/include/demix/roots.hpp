#pragma once

#include <functional>

namespace demix {

/// Bisection on a sign-changing bracket. Returns the midpoint once the
/// bracket is narrower than `tol` (or an exact zero is hit). Throws
/// NumericalError when f(lo) and f(hi) share a strict sign.
[[nodiscard]] double bisect(const std::function<double(double)>& f, double lo, double hi,
                            double tol);

struct Extremum {
  double location = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
[[nodiscard]] Extremum golden_section_max(const std::function<double(double)>& f, double lo,
                                          double hi, double tol);

}  // namespace demix
