#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace demix::curves {

/// Domain on which θ_ℓ1 is evaluated.
inline constexpr double kTauLo = 1e-4;
inline constexpr double kTauHi = 1.0 - 1e-4;

struct Inversion {
  double value = 0.0;
  bool clamped = false;  ///< target fell outside [f(lo), f(hi)]; value is the nearer endpoint
};

/// Solves f(t) = target for nondecreasing f on [lo, hi] by bisection.
[[nodiscard]] Inversion invert_threshold(const std::function<double(double)>& f, double target,
                                         double lo = 0.0, double hi = 1.0, double tol = 1e-6);

enum class CurveKind { weak, strong };
[[nodiscard]] const char* to_string(CurveKind kind) noexcept;

struct CurvePoints {
  std::string x_label;
  std::string y_label;
  CurveKind kind = CurveKind::weak;
  std::vector<std::array<double, 2>> points;
  // Provenance for the JSON sidecar.
  std::string threshold_x;
  std::string threshold_y;
  double tolerance = 1e-6;
};

/// n equally spaced points on [a, b].
[[nodiscard]] std::vector<double> linspace(double a, double b, std::size_t n);

/// Level set θ_ℓ1(τx) + θ_ℓ1(τy) = 1. Grid points with no solution are omitted.
[[nodiscard]] CurvePoints mca_weak_curve(const std::vector<double>& tau_x,
                                         std::size_t threads = 1);
/// Level set θ_ℓ1(τx, ψ) + θ_ℓ1(τy, ψ) = 1 with ψ = E(τx) + E(τy), solved by
/// nested bisection on τy to 1e-5.
[[nodiscard]] CurvePoints mca_strong_curve(const std::vector<double>& tau_x,
                                           std::size_t threads = 1);

/// τ where θ_ℓ1(τ) = ½.
[[nodiscard]] double channel_weak_threshold();
/// Largest τ with θ_orthant(E(τ)) + θ_ℓ1(τ, E(τ)) < 1.
[[nodiscard]] double channel_strong_threshold();
/// θ_orthant(E(τ)) + θ_ℓ1(τ, E(τ)), the quantity bounded by 1 above.
[[nodiscard]] double channel_strong_sum(double tau);

/// Level set θ_ℓ1(τ) + θ_S1(ρ) = 1 as τ over ρ.
[[nodiscard]] CurvePoints rank_sparsity_curve(const std::vector<double>& rho,
                                              std::size_t threads = 1);

struct MatrixDemixBounds {
  double orth_sparse_tau = 0.0;   ///< θ_ℓ1(τ) = ¼
  double lowrank_sign_rho = 0.0;  ///< 6ρ − 3ρ² = ½
  double lowrank_orth_rho = 0.0;  ///< 6ρ − 3ρ² = ¼
};
[[nodiscard]] MatrixDemixBounds matrix_demix_bounds();

}  // namespace demix::curves
