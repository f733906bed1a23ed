#pragma once

namespace demix {

/// Error function. Relative error ≤ 1e-13 on |x| ≤ 10.
[[nodiscard]] double erf(double x);
/// Complementary error function 1 − erf(x), accurate in the far tail.
[[nodiscard]] double erfc(double x);
/// Scaled complementary error function e^{x²}·erfc(x). Positive and
/// decreasing for x ≥ 0; overflows to +inf only for x ≲ −26.6.
[[nodiscard]] double erfcx(double x);

}  // namespace demix
