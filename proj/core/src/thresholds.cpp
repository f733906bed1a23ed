#include "demix/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "demix/error.hpp"
#include "demix/roots.hpp"
#include "demix/special.hpp"

namespace demix::thresholds {

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kTauMin = 1e-4;
constexpr double kTauMax = 1.0 - 1e-4;
// Slack for declaring that a grid-invisible tangency touches the level.
constexpr double kTangencySlack = 1e-9;

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

void require_pair(double theta, double tau, const char* where) {
  if (!(tau > 0.0 && tau <= theta && theta <= 1.0)) {
    throw DomainError(std::string(where) + ": require 0 < tau <= theta <= 1 (theta = " +
                      std::to_string(theta) + ", tau = " + std::to_string(tau) + ")");
  }
}

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

}  // namespace

double entropy(double theta) {
  require_unit(theta, "entropy: theta");
  return -xlogx(theta) - xlogx(1.0 - theta);
}

double face_count_exponent(double tau) {
  require_unit(tau, "face_count_exponent: tau");
  return tau * kLog2 + entropy(tau);
}

double theta_orthant(double psi) {
  if (!(psi >= 0.0 && psi <= kLog2 + 1e-15))
    throw DomainError("theta_orthant: psi must lie in [0, log 2]");
  if (psi >= kLog2) return 1.0;
  const double level = kLog2 - psi;
  return bisect([level](double t) { return entropy(t) - level; }, 0.5, 1.0, 1e-10);
}

double psi_cont(double theta, double tau) {
  if (!(tau >= 0.0 && tau < 1.0 && tau <= theta && theta <= 1.0))
    throw DomainError("psi_cont: require 0 <= tau <= theta <= 1 and tau < 1");
  const double frac = std::min(1.0, (theta - tau) / (1.0 - tau));
  return (theta - tau) * kLog2 + (1.0 - tau) * entropy(frac);
}

double solve_x(double theta, double tol) {
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("solve_x: theta must lie in (0, 1]");
  if (theta == 1.0) return 0.0;
  const double rhs = (1.0 - theta) / theta;
  const double root_pi = std::sqrt(std::numbers::pi);
  auto lhs = [&](double x) { return x * erf(x) * root_pi * std::exp(x * x) - rhs; };
  constexpr double kLo = 1e-12, kHi = 20.0;
  if (lhs(kHi) < 0.0)
    throw NumericalError("solve_x: root lies beyond x = 20 (theta too close to 0)");
  if (lhs(kLo) > 0.0) return kLo;
  return bisect(lhs, kLo, kHi, tol);
}

double mills_M(double s) {
  return -s * std::sqrt(std::numbers::pi / 2.0) * erfcx(-s / std::numbers::sqrt2);
}

double solve_s(double theta, double tau, double tol) {
  require_pair(theta, tau, "solve_s");
  if (tau == theta) return 0.0;
  const double target = 1.0 - tau / theta;
  auto f = [target](double s) { return mills_M(s) - target; };
  double lo = -60.0;
  while (f(lo) < 0.0) {
    lo *= 2.0;
    if (lo < -1e9) throw NumericalError("solve_s: could not bracket the root");
  }
  const double s = bisect(f, lo, 0.0, tol);
  if (s > 0.0) throw NumericalError("solve_s: root has the wrong sign");
  return s;
}

double psi_int(double theta, double tau, double tol) {
  require_pair(theta, tau, "psi_int");
  if (theta == tau) return 0.0;
  const double s = solve_s(theta, tau, tol);
  if (s == 0.0) return 0.0;  // θ − τ below the bisection resolution
  const double arg = std::sqrt(2.0 * std::numbers::pi) * s * theta / (tau - theta);
  if (!(arg > 0.0)) throw NumericalError("psi_int: non-positive log argument");
  return (theta - tau) * std::log(arg) - tau * s * s / 2.0;
}

double psi_ext(double theta, double tol) {
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("psi_ext: theta must lie in (0, 1]");
  if (theta == 1.0) return 0.0;
  const double x = solve_x(theta, tol);
  return -(1.0 - theta) * std::log(erf(x)) + theta * x * x;
}

ExponentPoint psi_total(double theta, double tau, double tol) {
  require_pair(theta, tau, "psi_total");
  ExponentPoint p;
  p.theta = theta;
  p.tau = tau;
  p.psi_cont = tau < 1.0 ? psi_cont(theta, tau) : 0.0;
  p.psi_int = psi_int(theta, tau, tol);
  p.psi_ext = psi_ext(theta, tol);
  p.psi_total = p.psi_cont - p.psi_int - p.psi_ext;
  return p;
}

namespace {

void require_tau_range(double tau, const char* where) {
  if (!(tau >= kTauMin && tau <= kTauMax)) {
    throw DomainError(std::string(where) + ": tau must lie in [1e-4, 1 - 1e-4], got " +
                      std::to_string(tau));
  }
}

// Peak of Ψ_total(·, τ) near the best grid point seen during a scan.
Extremum refine_peak(double tau, double best, double step, double tol) {
  const double lo = std::max(tau, best - step);
  const double hi = std::min(1.0, best + step);
  return golden_section_max([&](double t) { return psi_total(t, tau, tol).psi_total; }, lo, hi,
                            1e-10);
}

}  // namespace

double theta_l1(double tau, double psi, const ThresholdOptions& opts) {
  require_tau_range(tau, "theta_l1");
  if (!(psi >= 0.0)) throw DomainError("theta_l1: psi must be nonnegative");
  auto g = [&](double t) { return psi_total(t, tau, opts.inner_tol).psi_total + psi; };

  double prev = 1.0;
  double g_prev = g(prev);
  if (g_prev >= 0.0) return 1.0;
  double best = prev, g_best = g_prev;
  for (std::size_t j = 1;; ++j) {
    const double t = std::max(tau, 1.0 - static_cast<double>(j) * opts.grid_step);
    const double gt = g(t);
    if (gt >= 0.0) return bisect(g, t, prev, opts.theta_tol);
    if (gt > g_best) {
      best = t;
      g_best = gt;
    }
    if (t == tau) break;
    prev = t;
  }
  // No sign change on the grid: the level can only be touched at a tangency.
  const Extremum peak = refine_peak(tau, best, opts.grid_step, opts.inner_tol);
  if (peak.value + psi >= -kTangencySlack) return peak.location;
  return tau;
}

double kappa_l1(double tau, const ThresholdOptions& opts) {
  require_tau_range(tau, "kappa_l1");
  auto g = [&](double t) { return psi_total(t, tau, opts.inner_tol).psi_total; };

  double prev = tau;
  double best = prev, g_best = g(prev);
  for (std::size_t j = 1;; ++j) {
    const double t = std::min(1.0, tau + static_cast<double>(j) * opts.grid_step);
    const double gt = g(t);
    if (gt >= 0.0) return bisect(g, prev, t, opts.theta_tol);
    if (gt > g_best) {
      best = t;
      g_best = gt;
    }
    if (t == 1.0) break;
    prev = t;
  }
  const Extremum peak = refine_peak(tau, best, opts.grid_step, opts.inner_tol);
  if (peak.value >= -kTangencySlack) return peak.location;
  return 1.0;
}

double theta_schatten1(double rho) {
  require_unit(rho, "theta_schatten1: rho");
  return std::min(6.0 * rho - 3.0 * rho * rho, 1.0);
}

double theta_operator() noexcept { return 0.75; }

double theta_subspace(double sigma) {
  require_unit(sigma, "theta_subspace: sigma");
  return sigma;
}

}  // namespace demix::thresholds
