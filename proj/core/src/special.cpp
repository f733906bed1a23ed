#include "demix/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace demix {

namespace {

constexpr double kSeriesCutoff = 2.5;
const double kTwoOverSqrtPi = 2.0 / std::sqrt(std::numbers::pi);

// erf(x) = 2/√π · e^{−x²} · Σ_n 2ⁿ x^{2n+1} / (2n+1)!!  (all terms positive)
double erf_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 500; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * std::exp(-x2) * sum;
}

// e^{x²} erfc(x) = 1/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))) for x > 0,
// evaluated by the modified Lentz method.
double erfcx_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

}  // namespace

double erf(double x) {
  if (std::isnan(x)) return x;
  const double ax = std::abs(x);
  if (ax < kSeriesCutoff) return erf_series(x);
  if (ax > 6.0) return std::copysign(1.0, x);
  return std::copysign(1.0 - std::exp(-ax * ax) * erfcx_continued_fraction(ax), x);
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x < kSeriesCutoff) return 1.0 - erf_series(x);
  if (x > 27.3) return 0.0;
  return std::exp(-x * x) * erfcx_continued_fraction(x);
}

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x >= kSeriesCutoff) return erfcx_continued_fraction(x);
  if (x >= 0.0) return std::exp(x * x) * (1.0 - erf_series(x));
  if (x < -26.6) return std::numeric_limits<double>::infinity();
  return 2.0 * std::exp(x * x) - erfcx(-x);
}

}  // namespace demix
