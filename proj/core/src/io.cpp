#include "demix/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "demix/error.hpp"

namespace demix {

using nlohmann::json;

const char* version() noexcept { return DEMIX_VERSION; }

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << ": " << v << '\n';
}

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DomainError("malformed number '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DomainError("malformed count '" + s + "'");
  return v;
}

// Reads a CSV body: collects '#' metadata, checks the header, returns data rows.
std::vector<std::vector<std::string>> read_table(std::istream& in,
                                                 const std::vector<std::string>& header,
                                                 Metadata* meta = nullptr) {
  std::string line;
  bool have_header = false;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (meta) {
        const auto colon = line.find(": ");
        if (colon != std::string::npos && colon > 2)
          meta->emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      }
      continue;
    }
    auto fields = split(line);
    if (!have_header) {
      if (fields != header) throw DomainError("unexpected CSV header '" + line + "'");
      have_header = true;
      continue;
    }
    if (fields.size() != header.size())
      throw DomainError("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
    rows.push_back(std::move(fields));
  }
  if (!have_header) throw DomainError("CSV header missing");
  return rows;
}

template <typename F>
auto json_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw DomainError(std::string("JSON: ") + e.what());
  }
}

json vector_json(const DenseVector& v) { return json(v.values()); }

DenseVector vector_from(const json& j) { return DenseVector(j.get<std::vector<double>>()); }

json gauge_json(const solvers::GaugeSpec& g) {
  return {{"kind", std::string(solvers::to_string(g.kind))}, {"shape", g.shape}};
}

solvers::GaugeSpec gauge_from(const json& j) {
  return {solvers::parse_gauge_kind(j.at("kind").get<std::string>()),
          j.at("shape").get<std::size_t>()};
}

}  // namespace

void write_profile_csv(std::ostream& out, const cones::IntrinsicVolumeProfile& profile,
                       const Metadata& meta) {
  write_metadata(out, meta);
  out << "index_i,v_i\n";
  const long d = static_cast<long>(profile.dim());
  for (long i = -1; i < d; ++i) out << i << ',' << format_number(profile.at(i)) << '\n';
}

cones::IntrinsicVolumeProfile read_profile_csv(std::istream& in) {
  const auto rows = read_table(in, {"index_i", "v_i"});
  std::vector<double> values;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (std::stol(rows[r][0]) != static_cast<long>(r) - 1)
      throw DomainError("profile CSV indices must run -1, 0, 1, ...");
    values.push_back(parse_number(rows[r][1]));
  }
  return cones::IntrinsicVolumeProfile(std::move(values));
}

void write_curve_csv(std::ostream& out, const curves::CurvePoints& curve, const Metadata& meta) {
  write_metadata(out, meta);
  out << "x,y,kind\n";
  for (const auto& [x, y] : curve.points)
    out << format_number(x) << ',' << format_number(y) << ',' << curves::to_string(curve.kind)
        << '\n';
}

curves::CurvePoints read_curve_csv(std::istream& in) {
  const auto rows = read_table(in, {"x", "y", "kind"});
  curves::CurvePoints c;
  for (const auto& r : rows) {
    if (r[2] == "weak") c.kind = curves::CurveKind::weak;
    else if (r[2] == "strong") c.kind = curves::CurveKind::strong;
    else throw DomainError("curve CSV: unknown kind '" + r[2] + "'");
    c.points.push_back({parse_number(r[0]), parse_number(r[1])});
  }
  return c;
}

std::string curve_sidecar_json(const curves::CurvePoints& curve) {
  json j = {{"x_label", curve.x_label},
            {"y_label", curve.y_label},
            {"kind", curves::to_string(curve.kind)},
            {"points", curve.points.size()},
            {"threshold_x", curve.threshold_x},
            {"threshold_y", curve.threshold_y},
            {"tolerance", curve.tolerance},
            {"version", version()}};
  return j.dump(2) + "\n";
}

void write_grid_csv(std::ostream& out, const experiments::SuccessGrid& grid) {
  const auto& cfg = grid.config;
  write_metadata(out, {{"version", grid.version},
                       {"kind", std::string(experiments::to_string(cfg.kind))},
                       {"dim", std::to_string(cfg.dim)},
                       {"trials", std::to_string(cfg.trials)},
                       {"seed", std::to_string(cfg.master_seed)},
                       {"axis1", grid.axis1_label},
                       {"axis2", grid.axis2_label},
                       {"success_tol", format_number(cfg.success_tol)},
                       {"dr_gamma", format_number(cfg.solver.gamma)},
                       {"dr_relaxation", format_number(cfg.solver.relaxation)},
                       {"dr_tol", format_number(cfg.solver.tol)},
                       {"dr_max_iter", std::to_string(cfg.solver.max_iter)},
                       {"nonconverged_total", std::to_string(grid.total_nonconverged())}});
  out << "axis1,axis2,trials,successes,prob,nonconverged\n";
  for (const auto& c : grid.cells) {
    out << format_number(c.axis1) << ',' << format_number(c.axis2) << ',' << c.trials << ','
        << c.successes << ',' << format_number(c.probability()) << ',' << c.nonconverged << '\n';
  }
}

GridFile read_grid_csv(std::istream& in) {
  GridFile f;
  const auto rows =
      read_table(in, {"axis1", "axis2", "trials", "successes", "prob", "nonconverged"}, &f.meta);
  for (const auto& r : rows) {
    experiments::SuccessCell c;
    c.axis1 = parse_number(r[0]);
    c.axis2 = parse_number(r[1]);
    c.trials = parse_count(r[2]);
    c.successes = parse_count(r[3]);
    c.nonconverged = parse_count(r[5]);
    if (c.successes > c.trials) throw DomainError("grid CSV: successes exceed trials");
    if (parse_number(r[4]) != c.probability()) throw DomainError("grid CSV: prob column mismatch");
    f.cells.push_back(c);
  }
  return f;
}

void write_threshold_table_csv(std::ostream& out, const std::vector<ThresholdRow>& rows,
                               const Metadata& meta) {
  write_metadata(out, meta);
  out << "tau,psi,theta_l1\n";
  for (const auto& r : rows)
    out << format_number(r.tau) << ',' << format_number(r.psi) << ',' << format_number(r.theta)
        << '\n';
}

std::vector<ThresholdRow> read_threshold_table_csv(std::istream& in) {
  std::vector<ThresholdRow> out;
  for (const auto& r : read_table(in, {"tau", "psi", "theta_l1"}))
    out.push_back({parse_number(r[0]), parse_number(r[1]), parse_number(r[2])});
  return out;
}

void write_exponent_grid_csv(std::ostream& out,
                             const std::vector<thresholds::ExponentPoint>& points,
                             const Metadata& meta) {
  write_metadata(out, meta);
  out << "theta,tau,psi_cont,psi_int,psi_ext,psi_total\n";
  for (const auto& p : points) {
    out << format_number(p.theta) << ',' << format_number(p.tau) << ','
        << format_number(p.psi_cont) << ',' << format_number(p.psi_int) << ','
        << format_number(p.psi_ext) << ',' << format_number(p.psi_total) << '\n';
  }
}

std::vector<thresholds::ExponentPoint> read_exponent_grid_csv(std::istream& in) {
  std::vector<thresholds::ExponentPoint> out;
  for (const auto& r :
       read_table(in, {"theta", "tau", "psi_cont", "psi_int", "psi_ext", "psi_total"})) {
    out.push_back({parse_number(r[0]), parse_number(r[1]), parse_number(r[2]),
                   parse_number(r[3]), parse_number(r[4]), parse_number(r[5])});
  }
  return out;
}

std::string report_to_json(const solvers::SolveReport& report) {
  json j = {{"x_star", vector_json(report.x_star)},
            {"y_star", vector_json(report.y_star)},
            {"iterations", report.iterations},
            {"residual", report.residual},
            {"converged", report.converged}};
  return j.dump(2) + "\n";
}

solvers::SolveReport report_from_json(const std::string& text) {
  return json_guard([&] {
    const json j = json::parse(text);
    solvers::SolveReport r;
    r.x_star = vector_from(j.at("x_star"));
    r.y_star = vector_from(j.at("y_star"));
    r.iterations = j.at("iterations").get<std::size_t>();
    r.residual = j.at("residual").get<double>();
    r.converged = j.at("converged").get<bool>();
    return r;
  });
}

std::string problem_to_json(const solvers::DemixProblem& p) {
  json rows = json::array();
  for (std::size_t i = 0; i < p.q.rows(); ++i) rows.push_back(p.q.row(i).values());
  json j = {{"z0", vector_json(p.z0)},
            {"q", rows},
            {"objective", gauge_json(p.objective)},
            {"constraint", gauge_json(p.constraint)},
            {"alpha", p.alpha},
            {"objective_side",
             p.objective_side == solvers::ObjectiveSide::first ? "first" : "second"}};
  if (p.truth_x0) j["x0"] = vector_json(*p.truth_x0);
  if (p.truth_y0) j["y0"] = vector_json(*p.truth_y0);
  return j.dump(2) + "\n";
}

solvers::DemixProblem problem_from_json(const std::string& text) {
  return json_guard([&] {
    const json j = json::parse(text);
    solvers::DemixProblem p;
    p.z0 = vector_from(j.at("z0"));
    const auto rows = j.at("q").get<std::vector<std::vector<double>>>();
    p.q = DenseMatrix(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != p.q.cols()) throw DomainError("instance JSON: ragged q");
      for (std::size_t c = 0; c < rows[i].size(); ++c) p.q(i, c) = rows[i][c];
    }
    p.objective = gauge_from(j.at("objective"));
    p.constraint = gauge_from(j.at("constraint"));
    p.alpha = j.at("alpha").get<double>();
    const std::string side = j.value("objective_side", std::string("first"));
    if (side == "first") p.objective_side = solvers::ObjectiveSide::first;
    else if (side == "second") p.objective_side = solvers::ObjectiveSide::second;
    else throw DomainError("instance JSON: objective_side must be 'first' or 'second'");
    if (j.contains("x0")) p.truth_x0 = vector_from(j.at("x0"));
    if (j.contains("y0")) p.truth_y0 = vector_from(j.at("y0"));
    p.validate();
    return p;
  });
}

std::string config_to_json(const experiments::ExperimentConfig& cfg) {
  json points = json::array();
  for (const auto& p : cfg.points) points.push_back({p[0], p[1]});
  json j = {{"schema_version", cfg.schema_version},
            {"kind", std::string(experiments::to_string(cfg.kind))},
            {"dim", cfg.dim},
            {"axis1", cfg.axis1},
            {"axis2", cfg.axis2},
            {"points", points},
            {"trials", cfg.trials},
            {"master_seed", cfg.master_seed},
            {"success_tol", cfg.success_tol},
            {"threads", cfg.threads},
            {"solver",
             {{"gamma", cfg.solver.gamma},
              {"relaxation", cfg.solver.relaxation},
              {"tol", cfg.solver.tol},
              {"max_iter", cfg.solver.max_iter}}}};
  return j.dump(2) + "\n";
}

experiments::ExperimentConfig config_from_json(const std::string& text) {
  return json_guard([&] {
    const json j = json::parse(text);
    experiments::ExperimentConfig cfg;
    cfg.schema_version = j.at("schema_version").get<int>();
    if (cfg.schema_version != experiments::kConfigSchemaVersion)
      throw DomainError("config JSON: unsupported schema_version " +
                        std::to_string(cfg.schema_version));
    cfg.kind = experiments::parse_experiment_kind(j.at("kind").get<std::string>());
    cfg.dim = j.at("dim").get<std::size_t>();
    cfg.axis1 = j.value("axis1", std::vector<double>{});
    cfg.axis2 = j.value("axis2", std::vector<double>{});
    if (j.contains("points")) {
      for (const auto& p : j.at("points")) {
        const auto xy = p.get<std::vector<double>>();
        if (xy.size() != 2) throw DomainError("config JSON: points must be pairs");
        cfg.points.push_back({xy[0], xy[1]});
      }
    }
    cfg.trials = j.at("trials").get<std::size_t>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.success_tol = j.value("success_tol", 1e-4);
    cfg.threads = j.value("threads", std::size_t{1});
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      cfg.solver.gamma = s.value("gamma", cfg.solver.gamma);
      cfg.solver.relaxation = s.value("relaxation", cfg.solver.relaxation);
      cfg.solver.tol = s.value("tol", cfg.solver.tol);
      cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
    }
    cfg.validate();
    return cfg;
  });
}

}  // namespace demix
