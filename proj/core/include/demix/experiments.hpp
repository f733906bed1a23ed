#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "demix/curves.hpp"
#include "demix/douglas_rachford.hpp"
#include "demix/rng.hpp"

namespace demix::experiments {

enum class ExperimentKind { mca, channel_benign, channel_erase, rank_sparsity };

[[nodiscard]] std::string_view to_string(ExperimentKind kind) noexcept;
/// Accepts "mca", "channel_benign"/"channel-benign", "channel_erase"/"channel-erase",
/// "rank_sparsity"/"rank-sparsity".
[[nodiscard]] ExperimentKind parse_experiment_kind(std::string_view name);

inline constexpr int kConfigSchemaVersion = 1;

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  ExperimentKind kind = ExperimentKind::mca;
  /// Ambient dimension d, or the matrix side n for rank_sparsity.
  std::size_t dim = 40;
  /// Product grid axis1 × axis2. Channel experiments use axis1 only.
  /// mca: (τx, τy); channel: τ; rank_sparsity: (ρ, τ).
  std::vector<double> axis1;
  std::vector<double> axis2;
  /// When nonempty, these cells replace the product grid.
  std::vector<std::array<double, 2>> points;
  std::size_t trials = 20;
  std::uint64_t master_seed = 0;
  solvers::DrParams solver;
  double success_tol = 1e-4;
  std::size_t threads = 1;  ///< 0 = hardware concurrency; never affects results

  /// Throws DomainError when a field is out of range.
  void validate() const;
  /// Cells in evaluation order.
  [[nodiscard]] std::vector<std::array<double, 2>> cells() const;
  [[nodiscard]] bool is_channel() const noexcept {
    return kind == ExperimentKind::channel_benign || kind == ExperimentKind::channel_erase;
  }
};

struct SuccessCell {
  double axis1 = 0.0;
  double axis2 = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t nonconverged = 0;  ///< solver hit max_iter; counted as failures too

  [[nodiscard]] double probability() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
  friend bool operator==(const SuccessCell&, const SuccessCell&) = default;
};

struct SuccessGrid {
  ExperimentConfig config;
  std::string axis1_label;
  std::string axis2_label;
  std::vector<SuccessCell> cells;
  std::string version;
  double wall_seconds = 0.0;  ///< informational; not part of the CSV

  [[nodiscard]] std::size_t total_nonconverged() const noexcept;
};

/// Which recovered component is compared with the truth to declare success.
enum class Component { first, second };

/// A generated instance with its ground truth stored in problem.truth_x0 / truth_y0.
struct TrialInstance {
  solvers::DemixProblem problem;
  Component judged = Component::first;
};

/// kx- and ky-sparse ±1 vectors, Haar Q, ℓ1 objective and ℓ1 constraint with α = ‖y₀‖₁.
[[nodiscard]] TrialInstance make_mca_instance(std::size_t d, std::size_t kx, std::size_t ky,
                                              RngState& rng);
/// Sign message m₀ behind Haar Q with k ±1 corruptions c₀: z₀ = c₀ + Q m₀.
/// With `erase` the corruption zeroes the k largest entries of Q m₀ instead.
/// Objective ℓ1 on c, constraint ‖m‖∞ ≤ 1; success is judged on m.
[[nodiscard]] TrialInstance make_channel_instance(std::size_t d, std::size_t k, bool erase,
                                                  RngState& rng);
/// Rank-r n×n X₀, k-sparse ±1 Y₀, Haar basis on ℝ^{n²}; Schatten-1 objective,
/// ℓ1 constraint with α = ‖Y₀‖₁.
[[nodiscard]] TrialInstance make_rank_sparsity_instance(std::size_t n, std::size_t r,
                                                        std::size_t k, RngState& rng);

/// ‖recovered − truth‖∞ < tol on the judged component.
[[nodiscard]] bool judge_success(const TrialInstance& instance, const solvers::SolveReport& report,
                                 double tol = 1e-4);

/// The instance for one (cell, trial) of an experiment, drawn from
/// RngState(master_seed).child(cell).child(trial).
[[nodiscard]] TrialInstance make_trial(const ExperimentConfig& cfg, std::size_t cell,
                                       std::size_t trial);

[[nodiscard]] SuccessGrid run_mca(const ExperimentConfig& cfg);
[[nodiscard]] SuccessGrid run_channel(const ExperimentConfig& cfg);
[[nodiscard]] SuccessGrid run_rank_sparsity(const ExperimentConfig& cfg);
/// Dispatches on cfg.kind.
[[nodiscard]] SuccessGrid run_experiment(const ExperimentConfig& cfg);

struct Contour {
  curves::CurvePoints curve;
  /// Parallel to curve.points: true where the column crossed the level more than once.
  std::vector<bool> multiple_crossings;
};

/// Per axis1 column, the linearly interpolated crossing of `level` along
/// axis2. With several crossings the outermost one is kept and flagged.
/// Columns that never cross are omitted.
[[nodiscard]] Contour extract_contour(const SuccessGrid& grid, double level = 0.5);

/// Outermost crossing of `level` along axis1 for a one-dimensional grid.
[[nodiscard]] std::optional<double> extract_crossing(const SuccessGrid& grid, double level = 0.5);

}  // namespace demix::experiments
