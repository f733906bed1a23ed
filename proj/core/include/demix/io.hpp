#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "demix/cone_geometry.hpp"
#include "demix/curves.hpp"
#include "demix/douglas_rachford.hpp"
#include "demix/experiments.hpp"
#include "demix/thresholds.hpp"

// CSV files are UTF-8 with LF line endings. Metadata lines start with '#' and
// have the form "# key: value". Numbers are written with 17 significant digits
// so that every file round-trips exactly.
namespace demix {

/// Library version string.
[[nodiscard]] const char* version() noexcept;

using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(std::ostream& out, const Metadata& meta);
/// Shortest round-trip decimal for a double.
[[nodiscard]] std::string format_number(double v);

/// Columns: index_i, v_i.
void write_profile_csv(std::ostream& out, const cones::IntrinsicVolumeProfile& profile,
                       const Metadata& meta = {});
[[nodiscard]] cones::IntrinsicVolumeProfile read_profile_csv(std::istream& in);

/// Columns: x, y, kind.
void write_curve_csv(std::ostream& out, const curves::CurvePoints& curve,
                     const Metadata& meta = {});
[[nodiscard]] curves::CurvePoints read_curve_csv(std::istream& in);
/// Axis labels, tolerance and threshold-function identifiers.
[[nodiscard]] std::string curve_sidecar_json(const curves::CurvePoints& curve);

/// Columns: axis1, axis2, trials, successes, prob, nonconverged.
/// The metadata header echoes the configuration and version; wall time is omitted
/// so that reruns are byte-identical.
void write_grid_csv(std::ostream& out, const experiments::SuccessGrid& grid);
struct GridFile {
  Metadata meta;
  std::vector<experiments::SuccessCell> cells;
};
[[nodiscard]] GridFile read_grid_csv(std::istream& in);

struct ThresholdRow {
  double tau = 0.0;
  double psi = 0.0;
  double theta = 0.0;
};
/// Columns: tau, psi, theta_l1.
void write_threshold_table_csv(std::ostream& out, const std::vector<ThresholdRow>& rows,
                               const Metadata& meta = {});
[[nodiscard]] std::vector<ThresholdRow> read_threshold_table_csv(std::istream& in);
/// Columns: theta, tau, psi_cont, psi_int, psi_ext, psi_total.
void write_exponent_grid_csv(std::ostream& out,
                             const std::vector<thresholds::ExponentPoint>& points,
                             const Metadata& meta = {});
[[nodiscard]] std::vector<thresholds::ExponentPoint> read_exponent_grid_csv(std::istream& in);

[[nodiscard]] std::string report_to_json(const solvers::SolveReport& report);
[[nodiscard]] solvers::SolveReport report_from_json(const std::string& text);

/// Instance schema: {"z0": [...], "q": [[row], ...], "objective": {"kind", "shape"},
/// "constraint": {...}, "alpha", "objective_side": "first"|"second",
/// optional "x0", "y0"}.
[[nodiscard]] std::string problem_to_json(const solvers::DemixProblem& problem);
[[nodiscard]] solvers::DemixProblem problem_from_json(const std::string& text);

[[nodiscard]] std::string config_to_json(const experiments::ExperimentConfig& cfg);
[[nodiscard]] experiments::ExperimentConfig config_from_json(const std::string& text);

}  // namespace demix
