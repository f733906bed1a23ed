#pragma once

namespace demix::thresholds {

/// Tolerances for the implicit solves. Defaults match the documented contract.
struct ThresholdOptions {
  double inner_tol = 1e-12;  ///< bisection width for x(θ) and s(θ, τ)
  double theta_tol = 1e-8;   ///< bisection width for θ crossings
  double grid_step = 1e-3;   ///< θ grid used to bracket crossings
};

/// Ψ components at one (θ, τ).
struct ExponentPoint {
  double theta = 0.0;
  double tau = 0.0;
  double psi_cont = 0.0;
  double psi_int = 0.0;
  double psi_ext = 0.0;
  double psi_total = 0.0;
};

/// Natural entropy H(θ) = −θ log θ − (1−θ) log(1−θ), with H(0) = H(1) = 0.
[[nodiscard]] double entropy(double theta);
/// E(τ) = τ log 2 + H(τ), the log face count of the ℓ1 ball per dimension.
[[nodiscard]] double face_count_exponent(double tau);

/// sup{θ : H(θ) ≥ log 2 − ψ} for ψ ∈ [0, log 2], by bisection on [½, 1].
[[nodiscard]] double theta_orthant(double psi);

/// (θ−τ) log 2 + (1−τ)·H((θ−τ)/(1−τ)) for τ ≤ θ ≤ 1, τ < 1.
[[nodiscard]] double psi_cont(double theta, double tau);

/// Positive root x of x·erf(x)·√π·e^{x²} = (1−θ)/θ; x(1) = 0.
[[nodiscard]] double solve_x(double theta, double tol = 1e-12);

/// M(s) = −s·√(π/2)·erfcx(−s/√2), increasing from M(0) = 0 to 1 as s → −∞.
[[nodiscard]] double mills_M(double s);

/// Root s ≤ 0 of M(s) = 1 − τ/θ; s = 0 when τ = θ.
[[nodiscard]] double solve_s(double theta, double tau, double tol = 1e-12);

/// (θ−τ)·log(√(2π)·sθ/(τ−θ)) − τs²/2 with s = solve_s(θ, τ); zero at θ = τ.
[[nodiscard]] double psi_int(double theta, double tau, double tol = 1e-12);

/// −(1−θ)·log erf(x) + θx² with x = solve_x(θ); zero at θ = 1.
[[nodiscard]] double psi_ext(double theta, double tol = 1e-12);

/// Ψ_total = Ψ_cont − Ψ_int − Ψ_ext for 0 < τ ≤ θ ≤ 1.
[[nodiscard]] ExponentPoint psi_total(double theta, double tau, double tol = 1e-12);

/// Upper decay threshold of ℓ1 descent cones at level ψ: the rightmost θ
/// where Ψ_total(·, τ) meets −ψ. τ must lie in [1e-4, 1 − 1e-4].
[[nodiscard]] double theta_l1(double tau, double psi = 0.0, const ThresholdOptions& opts = {});
/// Lower decay threshold: the leftmost θ where Ψ_total(·, τ) meets 0.
[[nodiscard]] double kappa_l1(double tau, const ThresholdOptions& opts = {});

/// min(6ρ − 3ρ², 1)
[[nodiscard]] double theta_schatten1(double rho);
/// 3/4
[[nodiscard]] double theta_operator() noexcept;
/// σ
[[nodiscard]] double theta_subspace(double sigma);

}  // namespace demix::thresholds
