#include "demix/curves.hpp"

#include <cmath>
#include <optional>

#include "demix/error.hpp"
#include "demix/parallel.hpp"
#include "demix/roots.hpp"
#include "demix/thresholds.hpp"

namespace demix::curves {

namespace th = demix::thresholds;

Inversion invert_threshold(const std::function<double(double)>& f, double target, double lo,
                           double hi, double tol) {
  if (!(lo <= hi)) throw DomainError("invert_threshold: require lo <= hi");
  const double flo = f(lo);
  if (target < flo) return {lo, true};
  if (target == flo) return {lo, false};
  const double fhi = f(hi);
  if (target > fhi) return {hi, true};
  // Bisection on the predicate f(t) < target keeps the smallest preimage
  // when f is flat at the target level.
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) lo = mid;
    else hi = mid;
  }
  return {0.5 * (lo + hi), false};
}

const char* to_string(CurveKind kind) noexcept {
  return kind == CurveKind::weak ? "weak" : "strong";
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

namespace {

double theta_weak(double tau) { return th::theta_l1(tau, 0.0); }

void require_grid(const std::vector<double>& grid, const char* where) {
  for (double v : grid) {
    if (!(v > 0.0 && v < 1.0)) throw DomainError(std::string(where) + ": grid must lie in (0, 1)");
  }
}

CurvePoints collect(std::vector<std::optional<std::array<double, 2>>> maybe, CurvePoints base) {
  for (auto& p : maybe)
    if (p) base.points.push_back(*p);
  return base;
}

}  // namespace

CurvePoints mca_weak_curve(const std::vector<double>& tau_x, std::size_t threads) {
  require_grid(tau_x, "mca_weak_curve");
  std::vector<std::optional<std::array<double, 2>>> out(tau_x.size());
  parallel_for(tau_x.size(), threads, [&](std::size_t i) {
    const double tx = tau_x[i];
    if (tx < kTauLo || tx > kTauHi) return;
    const double theta_x = theta_weak(tx);
    if (theta_x >= 1.0) return;
    const Inversion inv = invert_threshold(theta_weak, 1.0 - theta_x, kTauLo, kTauHi);
    if (!inv.clamped) out[i] = {tx, inv.value};
  });
  return collect(std::move(out), {"tau_x", "tau_y", CurveKind::weak, {}, "theta_l1(tau,0)",
                                  "theta_l1(tau,0)", 1e-6});
}

CurvePoints mca_strong_curve(const std::vector<double>& tau_x, std::size_t threads) {
  require_grid(tau_x, "mca_strong_curve");
  std::vector<std::optional<std::array<double, 2>>> out(tau_x.size());
  parallel_for(tau_x.size(), threads, [&](std::size_t i) {
    const double tx = tau_x[i];
    if (tx < kTauLo || tx > kTauHi) return;
    const double ex = th::face_count_exponent(tx);
    auto h = [&](double ty) {
      const double psi = ex + th::face_count_exponent(ty);
      return th::theta_l1(tx, psi) + th::theta_l1(ty, psi) - 1.0;
    };
    if (h(kTauLo) >= 0.0) return;
    double lo = kTauLo, hi = kTauHi;
    for (int it = 0; it < 200 && hi - lo > 1e-5; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (h(mid) < 0.0) lo = mid;
      else hi = mid;
    }
    out[i] = {tx, 0.5 * (lo + hi)};
  });
  return collect(std::move(out), {"tau_x", "tau_y", CurveKind::strong, {},
                                  "theta_l1(tau,E(tau_x)+E(tau_y))",
                                  "theta_l1(tau,E(tau_x)+E(tau_y))", 1e-5});
}

double channel_weak_threshold() {
  const Inversion inv = invert_threshold(theta_weak, 0.5, kTauLo, kTauHi);
  if (inv.clamped) throw NumericalError("channel_weak_threshold: level 1/2 not attained");
  return inv.value;
}

double channel_strong_sum(double tau) {
  const double e = th::face_count_exponent(tau);
  return th::theta_orthant(e) + th::theta_l1(tau, e);
}

double channel_strong_threshold() {
  return bisect([](double t) { return channel_strong_sum(t) - 1.0; }, kTauLo, 0.1, 1e-8);
}

CurvePoints rank_sparsity_curve(const std::vector<double>& rho, std::size_t threads) {
  std::vector<std::optional<std::array<double, 2>>> out(rho.size());
  for (double r : rho) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("rank_sparsity_curve: rho must lie in [0, 1]");
  }
  parallel_for(rho.size(), threads, [&](std::size_t i) {
    const double theta_s = th::theta_schatten1(rho[i]);
    if (theta_s >= 1.0) return;
    const Inversion inv = invert_threshold(theta_weak, 1.0 - theta_s, kTauLo, kTauHi);
    if (!inv.clamped) out[i] = {rho[i], inv.value};
  });
  return collect(std::move(out), {"rho", "tau", CurveKind::weak, {}, "theta_schatten1(rho)",
                                  "theta_l1(tau,0)", 1e-6});
}

MatrixDemixBounds matrix_demix_bounds() {
  MatrixDemixBounds b;
  b.orth_sparse_tau = invert_threshold(theta_weak, 0.25, kTauLo, kTauHi).value;
  b.lowrank_sign_rho = invert_threshold(th::theta_schatten1, 0.5, 0.0, 1.0, 1e-10).value;
  b.lowrank_orth_rho = invert_threshold(th::theta_schatten1, 0.25, 0.0, 1.0, 1e-10).value;
  return b;
}

}  // namespace demix::curves
