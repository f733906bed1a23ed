#include "demix/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "demix/error.hpp"
#include "demix/linalg.hpp"

namespace demix::solvers {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Pivots between rebuilds of the tableau from the original columns.
constexpr std::size_t kRefactorEvery = 32;

// How an original variable is expressed through nonnegative standard-form columns:
// x = offset + Σ coef·x'[col].
struct VariableMap {
  double offset = 0.0;
  std::vector<std::pair<std::size_t, double>> terms;
};

struct StandardRow {
  std::vector<double> coeffs;  // over standard columns
  double rhs = 0.0;
  Relation rel = Relation::less_equal;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double& cost(std::size_t j) { return at(rows_, j); }
  double cost(std::size_t j) const { return at(rows_, j); }
  double& objective_value() { return at(rows_, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  // Keeps a copy of the initial rows so the tableau can be rebuilt later.
  void snapshot() { original_ = t_; }

  // Loads the cost row for the given column costs and prices out the basis.
  void set_costs(const std::vector<double>& c) {
    costs_ = c;
    for (std::size_t j = 0; j <= cols_; ++j) cost(j) = j < cols_ ? c[j] : 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(rows_, j) -= cb * at(i, j);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const std::size_t w = cols_ + 1;
    double* pr = &t_[r * w];
    const double inv = 1.0 / pr[c];
    for (std::size_t j = 0; j < w; ++j) pr[j] *= inv;
    pr[c] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double* pi = &t_[i * w];
      const double f = pi[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) pi[j] -= f * pr[j];
      pi[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Recomputes B⁻¹[A | b] for the current basis from the snapshot. Long
  // degenerate runs otherwise accumulate rounding through every pivot.
  void refactor() {
    const std::size_t w = cols_ + 1;
    DenseMatrix b(rows_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < rows_; ++k) b(i, k) = original_[i * w + basis_[k]];
    const QrResult qr = qr_decompose(b);
    double rmax = 0.0;
    for (std::size_t k = 0; k < rows_; ++k) rmax = std::max(rmax, std::abs(qr.r(k, k)));
    for (std::size_t k = 0; k < rows_; ++k)
      if (std::abs(qr.r(k, k)) <= 1e-13 * rmax) return;  // keep the current tableau
    // Rows of Qᵀ[A | b], then back substitution with R, all on whole rows.
    std::vector<double> y(rows_ * w, 0.0);
    for (std::size_t k = 0; k < rows_; ++k) {
      double* yk = &y[k * w];
      for (std::size_t i = 0; i < rows_; ++i) {
        const double f = qr.q(i, k);
        if (f == 0.0) continue;
        const double* oi = &original_[i * w];
        for (std::size_t j = 0; j < w; ++j) yk[j] += f * oi[j];
      }
    }
    for (std::size_t k = rows_; k-- > 0;) {
      double* yk = &y[k * w];
      for (std::size_t l = k + 1; l < rows_; ++l) {
        const double f = qr.r(k, l);
        if (f == 0.0) continue;
        const double* yl = &y[l * w];
        for (std::size_t j = 0; j < w; ++j) yk[j] -= f * yl[j];
      }
      const double inv = 1.0 / qr.r(k, k);
      for (std::size_t j = 0; j < w; ++j) yk[j] *= inv;
    }
    std::copy(y.begin(), y.end(), t_.begin());
    for (std::size_t k = 0; k < rows_; ++k)
      for (std::size_t i = 0; i < rows_; ++i) at(i, basis_[k]) = i == k ? 1.0 : 0.0;
    set_costs(costs_);
  }

  // Bland's rule. `allowed(j)` filters entering columns. Returns status.
  template <typename Allowed>
  LpStatus run(std::size_t& iterations, std::size_t cap, Allowed allowed) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed(j) && cost(j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return LpStatus::optimal;
      if (iterations >= cap) return LpStatus::iteration_limit;

      std::size_t leave = rows_;
      double best_ratio = kInf;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(0.0, at(i, cols_)) / a;
        const bool better = leave == rows_ || ratio < best_ratio - 1e-12;
        const bool tie_wins = !better && ratio <= best_ratio + 1e-12 && basis_[i] < basis_[leave];
        if (better || tie_wins) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      }
      if (leave == rows_) return LpStatus::unbounded;
      pivot(leave, enter);
      ++iterations;
      if (iterations % kRefactorEvery == 0) refactor();
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> t_;  // row-major, last row = reduced costs, last column = rhs
  std::vector<std::size_t> basis_;
  std::vector<double> original_;
  std::vector<double> costs_;
};

}  // namespace

LpSolution simplex_lp(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  const std::size_t m = lp.constraints.rows();
  if (lp.constraints.cols() != n && m > 0)
    throw DomainError("simplex_lp: constraint matrix has wrong column count");
  if (lp.rhs.size() != m) throw DomainError("simplex_lp: rhs length mismatch");
  if (!lp.relations.empty() && lp.relations.size() != m)
    throw DomainError("simplex_lp: relations length mismatch");
  if (!lp.bounds.empty() && lp.bounds.size() != n)
    throw DomainError("simplex_lp: bounds length mismatch");

  // Map original variables to nonnegative standard columns.
  std::vector<VariableMap> maps(n);
  std::vector<StandardRow> rows;
  std::size_t ns = 0;
  std::vector<std::pair<std::size_t, double>> upper_rows;  // (standard col, bound)
  for (std::size_t j = 0; j < n; ++j) {
    const VariableBounds b = lp.bounds.empty() ? VariableBounds{} : lp.bounds[j];
    if (b.lower > b.upper) {
      return {LpStatus::infeasible, DenseVector(n), 0.0, 0};
    }
    if (std::isfinite(b.lower)) {
      maps[j] = {b.lower, {{ns, 1.0}}};
      if (std::isfinite(b.upper)) upper_rows.emplace_back(ns, b.upper - b.lower);
      ++ns;
    } else if (std::isfinite(b.upper)) {
      maps[j] = {b.upper, {{ns, -1.0}}};
      ++ns;
    } else {
      maps[j] = {0.0, {{ns, 1.0}, {ns + 1, -1.0}}};
      ns += 2;
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    StandardRow row;
    row.coeffs.assign(ns, 0.0);
    row.rhs = lp.rhs[i];
    row.rel = lp.relations.empty() ? Relation::less_equal : lp.relations[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double a = lp.constraints(i, j);
      if (a == 0.0) continue;
      row.rhs -= a * maps[j].offset;
      for (auto [col, coef] : maps[j].terms) row.coeffs[col] += a * coef;
    }
    rows.push_back(std::move(row));
  }
  for (auto [col, bound] : upper_rows) {
    StandardRow row;
    row.coeffs.assign(ns, 0.0);
    row.coeffs[col] = 1.0;
    row.rhs = bound;
    rows.push_back(std::move(row));
  }

  std::vector<double> cost(ns, 0.0);
  double cost_offset = 0.0;
  const double sense_sign = lp.sense == Sense::maximize ? -1.0 : 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double c = sense_sign * lp.objective[j];
    cost_offset += c * maps[j].offset;
    for (auto [col, coef] : maps[j].terms) cost[col] += c * coef;
  }

  // Nonnegative right-hand sides; count slack and artificial columns.
  std::size_t n_slack = 0, n_art = 0;
  for (auto& row : rows) {
    if (row.rhs < 0.0) {
      for (double& a : row.coeffs) a = -a;
      row.rhs = -row.rhs;
      if (row.rel == Relation::less_equal) row.rel = Relation::greater_equal;
      else if (row.rel == Relation::greater_equal) row.rel = Relation::less_equal;
    }
    if (row.rel != Relation::equal) ++n_slack;
    if (row.rel != Relation::less_equal) ++n_art;
  }

  const std::size_t mr = rows.size();
  const std::size_t total = ns + n_slack + n_art;
  const std::size_t art_begin = ns + n_slack;
  Tableau tab(mr, total);
  std::size_t slack = ns, art = art_begin;
  for (std::size_t i = 0; i < mr; ++i) {
    for (std::size_t j = 0; j < ns; ++j) tab.at(i, j) = rows[i].coeffs[j];
    tab.rhs(i) = rows[i].rhs;
    switch (rows[i].rel) {
      case Relation::less_equal:
        tab.at(i, slack) = 1.0;
        tab.basis()[i] = slack++;
        break;
      case Relation::greater_equal:
        tab.at(i, slack++) = -1.0;
        tab.at(i, art) = 1.0;
        tab.basis()[i] = art++;
        break;
      case Relation::equal:
        tab.at(i, art) = 1.0;
        tab.basis()[i] = art++;
        break;
    }
  }

  tab.snapshot();

  LpSolution sol;
  sol.x = DenseVector(n);
  const std::size_t cap = 50 * (mr + total) + 1000;
  double rhs_scale = 1.0;
  for (const auto& row : rows) rhs_scale = std::max(rhs_scale, row.rhs);

  if (n_art > 0) {
    std::vector<double> phase1(total, 0.0);
    for (std::size_t j = art_begin; j < total; ++j) phase1[j] = 1.0;
    tab.set_costs(phase1);
    const LpStatus st = tab.run(sol.iterations, cap, [](std::size_t) { return true; });
    if (st == LpStatus::iteration_limit) {
      sol.status = st;
      return sol;
    }
    tab.refactor();
    if (-tab.objective_value() > 1e-9 * rhs_scale) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < mr; ++i) {
      if (tab.basis()[i] < art_begin) continue;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (std::abs(tab.at(i, j)) > kPivotTol) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  std::vector<double> phase2(total, 0.0);
  std::copy(cost.begin(), cost.end(), phase2.begin());
  tab.set_costs(phase2);
  sol.status = tab.run(sol.iterations, cap, [art_begin](std::size_t j) { return j < art_begin; });
  if (sol.status != LpStatus::optimal) return sol;
  tab.refactor();

  std::vector<double> xs(total, 0.0);
  for (std::size_t i = 0; i < mr; ++i) xs[tab.basis()[i]] = std::max(0.0, tab.at(i, total));
  double obj = cost_offset;
  for (std::size_t j = 0; j < n; ++j) {
    double v = maps[j].offset;
    for (auto [col, coef] : maps[j].terms) v += coef * xs[col];
    sol.x[j] = v;
  }
  for (std::size_t j = 0; j < ns; ++j) obj += cost[j] * xs[j];
  sol.objective = sense_sign * obj;
  return sol;
}

}  // namespace demix::solvers
