#include "demix/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>

#include "demix/error.hpp"
#include "demix/io.hpp"
#include "demix/parallel.hpp"
#include "demix/random_models.hpp"

namespace demix::experiments {

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::mca: return "mca";
    case ExperimentKind::channel_benign: return "channel_benign";
    case ExperimentKind::channel_erase: return "channel_erase";
    case ExperimentKind::rank_sparsity: return "rank_sparsity";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "mca") return ExperimentKind::mca;
  if (s == "channel_benign") return ExperimentKind::channel_benign;
  if (s == "channel_erase") return ExperimentKind::channel_erase;
  if (s == "rank_sparsity") return ExperimentKind::rank_sparsity;
  throw DomainError("unknown experiment kind '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (schema_version != kConfigSchemaVersion)
    throw DomainError("ExperimentConfig: unsupported schema version " +
                      std::to_string(schema_version));
  if (dim == 0) throw DomainError("ExperimentConfig: dimension must be positive");
  if (kind == ExperimentKind::rank_sparsity && dim > 40)
    throw DomainError("ExperimentConfig: matrix side above 40 is out of scope (basis is n^2 x n^2)");
  if (trials == 0) throw DomainError("ExperimentConfig: trials must be at least 1");
  if (!(success_tol > 0.0)) throw DomainError("ExperimentConfig: success_tol must be positive");
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (double v : axis1)
    if (!in_unit(v)) throw DomainError("ExperimentConfig: axis1 values must lie in [0, 1]");
  for (double v : axis2)
    if (!in_unit(v)) throw DomainError("ExperimentConfig: axis2 values must lie in [0, 1]");
  for (const auto& p : points)
    if (!in_unit(p[0]) || !in_unit(p[1]))
      throw DomainError("ExperimentConfig: points must lie in [0, 1]^2");
  if (points.empty()) {
    if (axis1.empty()) throw DomainError("ExperimentConfig: axis1 grid is empty");
    if (is_channel() && !axis2.empty())
      throw DomainError("ExperimentConfig: channel experiments take a single axis");
    if (!is_channel() && axis2.empty())
      throw DomainError("ExperimentConfig: two-axis experiment needs an axis2 grid");
  }
}

std::vector<std::array<double, 2>> ExperimentConfig::cells() const {
  if (!points.empty()) return points;
  std::vector<std::array<double, 2>> out;
  if (is_channel()) {
    for (double a : axis1) out.push_back({a, 0.0});
    return out;
  }
  for (double a : axis1)
    for (double b : axis2) out.push_back({a, b});
  return out;
}

std::size_t SuccessGrid::total_nonconverged() const noexcept {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.nonconverged;
  return n;
}

TrialInstance make_mca_instance(std::size_t d, std::size_t kx, std::size_t ky, RngState& rng) {
  if (kx > d || ky > d) throw DomainError("make_mca_instance: sparsity exceeds dimension");
  DenseVector x0 = models::sparse_signal(d, kx, rng);
  DenseVector y0 = models::sparse_signal(d, ky, rng);
  DenseMatrix q = models::haar_orthogonal(d, rng);
  TrialInstance t;
  t.problem.z0 = x0 + multiply(q, y0.span());
  t.problem.q = std::move(q);
  t.problem.objective = {solvers::GaugeKind::l1, d};
  t.problem.constraint = {solvers::GaugeKind::l1, d};
  t.problem.alpha = norm1(y0.span());
  t.problem.truth_x0 = std::move(x0);
  t.problem.truth_y0 = std::move(y0);
  t.judged = Component::first;
  return t;
}

TrialInstance make_channel_instance(std::size_t d, std::size_t k, bool erase, RngState& rng) {
  if (k > d) throw DomainError("make_channel_instance: corruption count exceeds dimension");
  DenseVector m0 = models::sign_vector(d, rng);
  DenseMatrix q = models::haar_orthogonal(d, rng);
  const DenseVector coded = multiply(q, m0.span());
  DenseVector z0;
  DenseVector c0;
  if (erase) {
    z0 = models::erase(coded, k);
    c0 = z0 - coded;
  } else {
    c0 = models::sparse_signal(d, k, rng);
    z0 = c0 + coded;
  }
  TrialInstance t;
  t.problem.z0 = std::move(z0);
  t.problem.q = std::move(q);
  t.problem.objective = {solvers::GaugeKind::l1, d};
  t.problem.constraint = {solvers::GaugeKind::linf, d};
  t.problem.alpha = 1.0;
  t.problem.truth_x0 = std::move(c0);
  t.problem.truth_y0 = std::move(m0);
  t.judged = Component::second;
  return t;
}

TrialInstance make_rank_sparsity_instance(std::size_t n, std::size_t r, std::size_t k,
                                          RngState& rng) {
  const std::size_t d = n * n;
  if (r > n || k > d) throw DomainError("make_rank_sparsity_instance: rank or sparsity too large");
  DenseVector x0 = vec(models::low_rank_matrix(n, r, rng));
  DenseVector y0 = models::sparse_signal(d, k, rng);
  DenseMatrix q = models::haar_orthogonal(d, rng);
  TrialInstance t;
  t.problem.z0 = x0 + multiply(q, y0.span());
  t.problem.q = std::move(q);
  t.problem.objective = {solvers::GaugeKind::schatten1, n};
  t.problem.constraint = {solvers::GaugeKind::l1, d};
  t.problem.alpha = norm1(y0.span());
  t.problem.truth_x0 = std::move(x0);
  t.problem.truth_y0 = std::move(y0);
  t.judged = Component::first;
  return t;
}

bool judge_success(const TrialInstance& instance, const solvers::SolveReport& report, double tol) {
  const auto& truth =
      instance.judged == Component::first ? instance.problem.truth_x0 : instance.problem.truth_y0;
  if (!truth) throw DomainError("judge_success: instance carries no ground truth");
  const DenseVector& got = instance.judged == Component::first ? report.x_star : report.y_star;
  return max_abs_diff(got.span(), truth->span()) < tol;
}

TrialInstance make_trial(const ExperimentConfig& cfg, std::size_t cell, std::size_t trial) {
  const auto cells = cfg.cells();
  if (cell >= cells.size()) throw DomainError("make_trial: cell index out of range");
  const auto [a, b] = cells[cell];
  RngState rng = RngState(cfg.master_seed).child(cell).child(trial);
  switch (cfg.kind) {
    case ExperimentKind::mca:
      return make_mca_instance(cfg.dim, models::round_count(a, cfg.dim),
                               models::round_count(b, cfg.dim), rng);
    case ExperimentKind::channel_benign:
    case ExperimentKind::channel_erase:
      return make_channel_instance(cfg.dim, models::round_count(a, cfg.dim),
                                   cfg.kind == ExperimentKind::channel_erase, rng);
    case ExperimentKind::rank_sparsity:
      return make_rank_sparsity_instance(cfg.dim, models::round_count(a, cfg.dim),
                                         models::round_count(b, cfg.dim * cfg.dim), rng);
  }
  throw DomainError("make_trial: unknown experiment kind");
}

namespace {

struct TrialOutcome {
  bool success = false;
  bool converged = false;
};

// Axis values as realized by the integer sparsity counts.
std::array<double, 2> realized(const ExperimentConfig& cfg, const std::array<double, 2>& cell) {
  const double d = static_cast<double>(cfg.dim);
  switch (cfg.kind) {
    case ExperimentKind::mca:
      return {static_cast<double>(models::round_count(cell[0], cfg.dim)) / d,
              static_cast<double>(models::round_count(cell[1], cfg.dim)) / d};
    default: return cell;
  }
}

SuccessGrid run_grid(const ExperimentConfig& cfg, const char* label1, const char* label2) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto cells = cfg.cells();
  const std::size_t tasks = cells.size() * cfg.trials;
  std::vector<TrialOutcome> outcomes(tasks);
  parallel_for(tasks, cfg.threads, [&](std::size_t task) {
    const std::size_t cell = task / cfg.trials;
    const std::size_t trial = task % cfg.trials;
    const TrialInstance inst = make_trial(cfg, cell, trial);
    const solvers::SolveReport rep = solvers::solve_demix(inst.problem, cfg.solver);
    outcomes[task] = {judge_success(inst, rep, cfg.success_tol), rep.converged};
  });

  SuccessGrid grid;
  grid.config = cfg;
  grid.axis1_label = label1;
  grid.axis2_label = label2;
  grid.version = version();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    SuccessCell cell;
    const auto axes = realized(cfg, cells[c]);
    cell.axis1 = axes[0];
    cell.axis2 = axes[1];
    cell.trials = cfg.trials;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialOutcome& o = outcomes[c * cfg.trials + t];
      cell.successes += o.success ? 1 : 0;
      cell.nonconverged += o.converged ? 0 : 1;
    }
    grid.cells.push_back(cell);
  }
  grid.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return grid;
}

}  // namespace

SuccessGrid run_mca(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::mca) throw DomainError("run_mca: config kind is not mca");
  return run_grid(cfg, "tau_x", "tau_y");
}

SuccessGrid run_channel(const ExperimentConfig& cfg) {
  if (!cfg.is_channel()) throw DomainError("run_channel: config kind is not a channel experiment");
  return run_grid(cfg, "tau", "");
}

SuccessGrid run_rank_sparsity(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::rank_sparsity)
    throw DomainError("run_rank_sparsity: config kind is not rank_sparsity");
  return run_grid(cfg, "rho", "tau");
}

SuccessGrid run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::mca: return run_mca(cfg);
    case ExperimentKind::channel_benign:
    case ExperimentKind::channel_erase: return run_channel(cfg);
    case ExperimentKind::rank_sparsity: return run_rank_sparsity(cfg);
  }
  throw DomainError("run_experiment: unknown experiment kind");
}

namespace {

struct Crossings {
  std::vector<double> at;
};

// Linear-interpolated crossings of `level` along a sorted (coordinate, probability) sequence.
Crossings find_crossings(const std::vector<std::pair<double, double>>& seq, double level) {
  Crossings out;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const auto [x0, p0] = seq[i];
    const auto [x1, p1] = seq[i + 1];
    if ((p0 >= level) == (p1 >= level)) continue;
    const double t = (level - p0) / (p1 - p0);
    out.at.push_back(x0 + t * (x1 - x0));
  }
  return out;
}

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("contour level must lie in (0, 1)");
}

}  // namespace

Contour extract_contour(const SuccessGrid& grid, double level) {
  require_level(level);
  std::map<double, std::vector<std::pair<double, double>>> columns;
  for (const auto& c : grid.cells) columns[c.axis1].emplace_back(c.axis2, c.probability());
  Contour out;
  out.curve.x_label = grid.axis1_label;
  out.curve.y_label = grid.axis2_label;
  out.curve.kind = curves::CurveKind::weak;
  out.curve.threshold_x = "empirical";
  out.curve.threshold_y = "empirical";
  out.curve.tolerance = 0.0;
  for (auto& [x, seq] : columns) {
    std::sort(seq.begin(), seq.end());
    const Crossings cr = find_crossings(seq, level);
    if (cr.at.empty()) continue;
    out.curve.points.push_back({x, *std::max_element(cr.at.begin(), cr.at.end())});
    out.multiple_crossings.push_back(cr.at.size() > 1);
  }
  return out;
}

std::optional<double> extract_crossing(const SuccessGrid& grid, double level) {
  require_level(level);
  std::vector<std::pair<double, double>> seq;
  for (const auto& c : grid.cells) seq.emplace_back(c.axis1, c.probability());
  std::sort(seq.begin(), seq.end());
  const Crossings cr = find_crossings(seq, level);
  if (cr.at.empty()) return std::nullopt;
  return *std::max_element(cr.at.begin(), cr.at.end());
}

}  // namespace demix::experiments
