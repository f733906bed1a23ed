#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "demix/cone_geometry.hpp"
#include "demix/curves.hpp"
#include "demix/douglas_rachford.hpp"
#include "demix/error.hpp"
#include "demix/experiments.hpp"
#include "demix/io.hpp"
#include "demix/random_models.hpp"
#include "demix/thresholds.hpp"

namespace demix::cli {

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw DomainError("grid '" + text + "': malformed number '" + field + "'");
    }
  }
  if (parts.size() != 3) throw DomainError("grid '" + text + "': expected a:b:step");
  const double a = parts[0], b = parts[1], step = parts[2];
  if (!(step > 0.0) || !(b >= a)) throw DomainError("grid '" + text + "': need step > 0, b >= a");
  const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (n > 1'000'000) throw DomainError("grid '" + text + "': too many points");
  std::vector<double> out(n);
  // Rounded to 12 decimals so 0:1:0.1 gives 0.3 rather than 0.30000000000000004.
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12;
  return out;
}

namespace {

struct Options {
  std::size_t d = 0;
  std::size_t n = 0;
  double tau = 0.0;
  double rho = 0.0;
  double psi = 0.0;
  double sigma = 0.0;
  std::string grid;
  std::string grid2;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::size_t max_iter = 0;
  std::string out;
  std::string contour;
  std::string config;
  std::string instance;
  std::string cone = "orthant";
  std::string cone2 = "orthant";
  std::size_t samples = 10'000;
  std::size_t threads = 1;
  bool paper_scale = false;
  bool monte_carlo = false;
};

// Flags the user set explicitly, by name, across every subcommand that declares them.
class Seen {
 public:
  CLI::Option* track(const std::string& name, CLI::Option* opt) {
    options_[name].push_back(opt);
    return opt;
  }
  [[nodiscard]] bool given(const std::string& name) const {
    const auto it = options_.find(name);
    if (it == options_.end()) return false;
    for (const CLI::Option* o : it->second)
      if (o->count() > 0) return true;
    return false;
  }

 private:
  std::map<std::string, std::vector<CLI::Option*>> options_;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  void header(const Metadata& extra = {}) {
    Metadata meta{{"demix", version()}};
    meta.insert(meta.end(), extra.begin(), extra.end());
    write_metadata(out_, meta);
  }

  std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot open '" + path + "' for writing");
    return f;
  }

  void write_curve(const curves::CurvePoints& c) {
    out_ << std::setw(14) << c.x_label << std::setw(14) << c.y_label << '\n';
    for (const auto& [x, y] : c.points)
      out_ << std::setw(14) << format_number(x) << std::setw(14) << format_number(y) << '\n';
    if (!opt_.out.empty()) {
      {
        auto f = open_out(opt_.out);
        write_curve_csv(f, c, {{"version", version()}, {"x", c.x_label}, {"y", c.y_label}});
      }
      auto side = open_out(opt_.out + ".json");
      side << curve_sidecar_json(c);
    }
  }

  std::vector<double> grid_or(const std::vector<double>& fallback) {
    return opt_.grid.empty() ? fallback : parse_grid(opt_.grid);
  }

  // --- threshold ---
  void threshold_l1();
  void threshold_orthant();
  // --- curve ---
  void curve(const std::string& which);
  // --- demix ---
  void demix();
  // --- cones ---
  cones::PolyhedralCone parse_cone(const std::string& desc, std::size_t d);
  cones::IntrinsicVolumeProfile profile_of(const std::string& desc, std::size_t d,
                                           const RngState& rng);
  void cones_volumes();
  void cones_kinematic();
  void cones_width();
  void cones_intersect();
  // --- experiment ---
  void experiment(experiments::ExperimentKind kind);

  std::ostream& out_;
  std::ostream& err_;
  Options opt_;
  Seen seen_;
};

void Runner::threshold_l1() {
  std::vector<double> taus;
  if (!opt_.grid.empty()) taus = parse_grid(opt_.grid);
  else if (seen_.given("tau")) taus = {opt_.tau};
  else throw DomainError("threshold l1: give --tau or --grid");
  header({{"psi", format_number(opt_.psi)}, {"theta_tol", "1e-08"}, {"grid_step", "0.001"}});
  out_ << std::setw(12) << "tau" << std::setw(14) << "theta_l1" << std::setw(14) << "kappa_l1"
       << '\n';
  std::vector<ThresholdRow> rows;
  for (double t : taus) {
    const double theta = thresholds::theta_l1(t, opt_.psi);
    const double kappa = thresholds::kappa_l1(t);
    rows.push_back({t, opt_.psi, theta});
    out_ << std::setw(12) << format_number(t) << std::setw(14) << std::fixed
         << std::setprecision(8) << theta << std::setw(14) << kappa << '\n'
         << std::defaultfloat;
  }
  if (opt_.out.empty()) return;
  auto f = open_out(opt_.out);
  if (taus.size() > 1) {
    write_threshold_table_csv(f, rows, {{"version", version()}});
    return;
  }
  // A single τ: export the exponent components along θ ∈ [τ, 1].
  std::vector<thresholds::ExponentPoint> pts;
  for (double th : curves::linspace(taus[0], 1.0, 201)) pts.push_back(thresholds::psi_total(th, taus[0]));
  write_exponent_grid_csv(f, pts, {{"version", version()}, {"tau", format_number(taus[0])}});
}

void Runner::threshold_orthant() {
  header();
  out_ << "theta_orthant(" << format_number(opt_.psi)
       << ") = " << format_number(thresholds::theta_orthant(opt_.psi)) << '\n';
}

void Runner::curve(const std::string& which) {
  if (which == "channel") {
    header({{"tau_domain", "[1e-4, 1-1e-4]"}});
    const double weak = curves::channel_weak_threshold();
    const double strong = curves::channel_strong_threshold();
    out_ << "weak   " << std::fixed << std::setprecision(7) << weak << '\n'
         << "strong " << strong << '\n' << std::defaultfloat;
    if (!opt_.out.empty()) {
      auto f = open_out(opt_.out);
      f << "{\n  \"weak\": " << format_number(weak) << ",\n  \"strong\": " << format_number(strong)
        << "\n}\n";
    }
    return;
  }
  if (which == "matrix-bounds") {
    header();
    const auto b = curves::matrix_demix_bounds();
    out_ << "orth_sparse_tau  " << format_number(b.orth_sparse_tau) << '\n'
         << "lowrank_sign_rho " << format_number(b.lowrank_sign_rho) << '\n'
         << "lowrank_orth_rho " << format_number(b.lowrank_orth_rho) << '\n';
    if (!opt_.out.empty()) {
      auto f = open_out(opt_.out);
      f << "{\n  \"orth_sparse_tau\": " << format_number(b.orth_sparse_tau)
        << ",\n  \"lowrank_sign_rho\": " << format_number(b.lowrank_sign_rho)
        << ",\n  \"lowrank_orth_rho\": " << format_number(b.lowrank_orth_rho) << "\n}\n";
    }
    return;
  }
  header({{"points", opt_.grid.empty() ? "200 (default grid)" : opt_.grid}});
  if (which == "mca-weak") {
    write_curve(curves::mca_weak_curve(grid_or(curves::linspace(0.005, 0.995, 200)), opt_.threads));
  } else if (which == "mca-strong") {
    write_curve(curves::mca_strong_curve(grid_or(curves::linspace(0.0005, 0.1, 200)), opt_.threads));
  } else if (which == "rank-sparsity") {
    write_curve(curves::rank_sparsity_curve(grid_or(curves::linspace(0.0, 0.18, 200)), opt_.threads));
  }
}

void Runner::demix() {
  std::ifstream f(opt_.instance);
  if (!f) throw DomainError("cannot read instance '" + opt_.instance + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const solvers::DemixProblem p = problem_from_json(buf.str());
  solvers::DrParams params;
  if (seen_.given("tol")) params.tol = opt_.tol;
  if (seen_.given("max_iter")) params.max_iter = opt_.max_iter;
  header({{"dr_tol", format_number(params.tol)}, {"dr_max_iter", std::to_string(params.max_iter)}});
  const solvers::SolveReport r = solvers::solve_demix(p, params);
  out_ << "dim         " << p.dim() << '\n'
       << "iterations  " << r.iterations << '\n'
       << "residual    " << format_number(r.residual) << '\n'
       << "converged   " << (r.converged ? "yes" : "no") << '\n';
  if (p.truth_x0) {
    const double err = max_abs_diff(r.x_star.span(), p.truth_x0->span());
    out_ << "x_error     " << format_number(err) << '\n'
         << "success     " << (err < 1e-4 ? "yes" : "no") << '\n';
  }
  if (p.truth_y0)
    out_ << "y_error     " << format_number(max_abs_diff(r.y_star.span(), p.truth_y0->span()))
         << '\n';
  if (!opt_.out.empty()) open_out(opt_.out) << report_to_json(r);
}

cones::PolyhedralCone Runner::parse_cone(const std::string& desc, std::size_t d) {
  const auto colon = desc.find(':');
  const std::string name = desc.substr(0, colon);
  std::size_t arg = 0;
  if (colon != std::string::npos) {
    try {
      arg = std::stoul(desc.substr(colon + 1));
    } catch (const std::exception&) {
      throw DomainError("cone '" + desc + "': malformed parameter");
    }
  }
  if (name == "orthant") return cones::orthant_cone(d);
  if (name == "full") return cones::PolyhedralCone::full_space(d);
  if (name == "linf") return cones::linf_descent_cone(DenseVector(d, 1.0));
  if (name == "l1") {
    if (arg > d) throw DomainError("cone '" + desc + "': k exceeds d");
    models::SparsityPattern p;
    p.dim = d;
    for (std::size_t i = 0; i < arg; ++i) {
      p.support.push_back(i);
      p.signs.push_back(1.0);
    }
    return cones::l1_descent_cone(p);
  }
  if (name == "subspace") {
    if (arg > d) throw DomainError("cone '" + desc + "': n exceeds d");
    // span{e₁ … e_n}: vᵢ = 0 for i ≥ n, written as ±eᵢ·v ≤ 0.
    DenseMatrix a(2 * (d - arg), d);
    for (std::size_t i = arg; i < d; ++i) {
      a(2 * (i - arg), i) = 1.0;
      a(2 * (i - arg) + 1, i) = -1.0;
    }
    return {d, std::move(a), desc};
  }
  throw DomainError("unknown cone '" + desc + "' (orthant, full, linf, l1:k, subspace:n)");
}

cones::IntrinsicVolumeProfile Runner::profile_of(const std::string& desc, std::size_t d,
                                                 const RngState& rng) {
  if (!opt_.monte_carlo) {
    if (desc == "orthant" || desc == "linf") return cones::exact_orthant_volumes(d);
    if (desc == "full") return cones::exact_subspace_volumes(d, d);
    if (desc.rfind("subspace:", 0) == 0)
      return cones::exact_subspace_volumes(d, std::stoul(desc.substr(9)));
  }
  return cones::mc_intrinsic_volumes(parse_cone(desc, d), opt_.samples, rng, opt_.threads);
}

void Runner::cones_volumes() {
  const std::size_t d = opt_.d == 0 ? 6 : opt_.d;
  header({{"cone", opt_.cone}, {"d", std::to_string(d)}, {"seed", std::to_string(opt_.seed)},
          {"samples", std::to_string(opt_.samples)}});
  const auto prof = profile_of(opt_.cone, d, RngState(opt_.seed));
  out_ << std::setw(8) << "i" << std::setw(24) << "v_i" << '\n';
  for (long i = -1; i < static_cast<long>(d); ++i)
    out_ << std::setw(8) << i << std::setw(24) << format_number(prof.at(i)) << '\n';
  if (!opt_.out.empty()) {
    auto f = open_out(opt_.out);
    write_profile_csv(f, prof, {{"version", version()}, {"cone", opt_.cone}});
  }
}

void Runner::cones_kinematic() {
  const std::size_t d = opt_.d == 0 ? 6 : opt_.d;
  header({{"cone", opt_.cone}, {"cone2", opt_.cone2}, {"d", std::to_string(d)},
          {"seed", std::to_string(opt_.seed)}});
  const RngState rng(opt_.seed);
  const auto a = profile_of(opt_.cone, d, rng.child(0));
  const auto b = profile_of(opt_.cone2, d, rng.child(1));
  out_ << "P{K meets QK' nontrivially} = " << format_number(cones::kinematic_probability(a, b))
       << '\n';
}

void Runner::cones_width() {
  const std::size_t d = opt_.d == 0 ? 6 : opt_.d;
  header({{"cone", opt_.cone}, {"d", std::to_string(d)}, {"seed", std::to_string(opt_.seed)},
          {"samples", std::to_string(opt_.samples)}});
  const auto w =
      cones::estimate_gaussian_width(parse_cone(opt_.cone, d), opt_.samples, RngState(opt_.seed),
                                     opt_.threads);
  out_ << "width        " << format_number(w.width) << '\n'
       << "std_error    " << format_number(w.std_error) << '\n'
       << "mean_square  " << format_number(w.mean_square) << '\n';
}

void Runner::cones_intersect() {
  const std::size_t d = opt_.d == 0 ? 6 : opt_.d;
  const std::size_t trials = opt_.trials == 0 ? 1 : opt_.trials;
  header({{"cone", opt_.cone}, {"cone2", opt_.cone2}, {"d", std::to_string(d)},
          {"seed", std::to_string(opt_.seed)}, {"trials", std::to_string(trials)}});
  const auto k1 = parse_cone(opt_.cone, d);
  const auto k2 = parse_cone(opt_.cone2, d);
  const RngState master(opt_.seed);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    RngState rng = master.child(t);
    hits += cones::intersects_nontrivially(k1, k2, models::haar_orthogonal(d, rng)) ? 1 : 0;
  }
  out_ << "intersections " << hits << " / " << trials << " (frequency "
       << format_number(static_cast<double>(hits) / static_cast<double>(trials)) << ")\n";
}

void Runner::experiment(experiments::ExperimentKind kind) {
  using experiments::ExperimentKind;
  experiments::ExperimentConfig cfg;
  if (!opt_.config.empty()) {
    std::ifstream f(opt_.config);
    if (!f) throw DomainError("cannot read config '" + opt_.config + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    cfg = config_from_json(buf.str());
    if (cfg.kind != kind) throw DomainError("config kind does not match the experiment verb");
  } else {
    cfg.kind = kind;
    switch (kind) {
      case ExperimentKind::mca:
        cfg.dim = opt_.paper_scale ? 100 : 40;
        cfg.axis1 = cfg.axis2 = opt_.paper_scale ? parse_grid("0:1:0.01") : parse_grid("0:1:0.125");
        cfg.trials = opt_.paper_scale ? 25 : 20;
        break;
      case ExperimentKind::channel_benign:
        cfg.dim = opt_.paper_scale ? 300 : 100;
        cfg.axis1 = curves::linspace(0.0, 0.35, opt_.paper_scale ? 70 : 8);
        cfg.trials = opt_.paper_scale ? 200 : 50;
        break;
      case ExperimentKind::channel_erase:
        cfg.dim = opt_.paper_scale ? 300 : 100;
        cfg.axis1 = curves::linspace(0.0, 1.0, opt_.paper_scale ? 70 : 11);
        cfg.trials = opt_.paper_scale ? 200 : 50;
        break;
      case ExperimentKind::rank_sparsity:
        cfg.dim = opt_.paper_scale ? 35 : 20;
        if (opt_.paper_scale) {
          cfg.axis1 = cfg.axis2 = parse_grid("0:1:" + format_number(1.0 / 35.0));
        } else {
          cfg.axis1 = parse_grid("0:0.3:0.05");
          cfg.axis2 = parse_grid("0:0.5:0.1");
        }
        cfg.trials = opt_.paper_scale ? 25 : 20;
        break;
    }
    if (opt_.paper_scale)
      err_ << "warning: --paper-scale runs take hours; consider --threads\n";
  }
  if (seen_.given("d")) cfg.dim = opt_.d;
  if (seen_.given("n")) cfg.dim = opt_.n;
  if (seen_.given("grid")) {
    cfg.axis1 = parse_grid(opt_.grid);
    if (!cfg.is_channel() && !seen_.given("grid2")) cfg.axis2 = cfg.axis1;
  }
  if (seen_.given("grid2")) cfg.axis2 = parse_grid(opt_.grid2);
  if (seen_.given("trials")) cfg.trials = opt_.trials;
  if (seen_.given("seed")) cfg.master_seed = opt_.seed;
  if (seen_.given("tol")) cfg.solver.tol = opt_.tol;
  if (seen_.given("max_iter")) cfg.solver.max_iter = opt_.max_iter;
  if (seen_.given("threads")) cfg.threads = opt_.threads;
  cfg.validate();

  header({{"kind", std::string(experiments::to_string(cfg.kind))},
          {"dim", std::to_string(cfg.dim)},
          {"trials", std::to_string(cfg.trials)},
          {"seed", std::to_string(cfg.master_seed)},
          {"dr_tol", format_number(cfg.solver.tol)},
          {"dr_max_iter", std::to_string(cfg.solver.max_iter)},
          {"success_tol", format_number(cfg.success_tol)}});
  const experiments::SuccessGrid grid = experiments::run_experiment(cfg);
  out_ << std::setw(10) << grid.axis1_label << std::setw(10) << grid.axis2_label << std::setw(8)
       << "trials" << std::setw(10) << "success" << std::setw(8) << "prob" << std::setw(8)
       << "nonconv" << '\n';
  for (const auto& c : grid.cells) {
    out_ << std::setw(10) << format_number(c.axis1) << std::setw(10)
         << (cfg.is_channel() ? std::string("-") : format_number(c.axis2)) << std::setw(8)
         << c.trials << std::setw(10) << c.successes << std::setw(8) << std::fixed
         << std::setprecision(3) << c.probability() << std::defaultfloat << std::setw(8)
         << c.nonconverged << '\n';
  }
  out_ << "# nonconverged_total: " << grid.total_nonconverged() << '\n';
  if (!opt_.out.empty()) {
    auto f = open_out(opt_.out);
    write_grid_csv(f, grid);
  }
  if (!opt_.contour.empty()) {
    auto f = open_out(opt_.contour);
    if (cfg.is_channel()) {
      const auto x = experiments::extract_crossing(grid);
      curves::CurvePoints c{grid.axis1_label, "level", curves::CurveKind::weak, {}, "empirical",
                            "empirical", 0.0};
      if (x) c.points.push_back({*x, 0.5});
      write_curve_csv(f, c, {{"version", version()}, {"level", "0.5"}});
    } else {
      write_curve_csv(f, experiments::extract_contour(grid).curve,
                      {{"version", version()}, {"level", "0.5"}});
    }
  }
}

int Runner::run(const std::vector<std::string>& args) {
  CLI::App app{"Convex demixing: thresholds, phase-transition curves, cone geometry, experiments",
               "demix"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  auto add_d = [&](CLI::App* s) { seen_.track("d", s->add_option("--d", opt_.d, "ambient dimension")); };
  auto add_seed = [&](CLI::App* s) {
    seen_.track("seed", s->add_option("--seed", opt_.seed, "master seed"));
  };
  auto add_threads = [&](CLI::App* s) {
    seen_.track("threads", s->add_option("--threads", opt_.threads, "worker threads (0 = all cores)"));
  };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", opt_.out, "output file"); };
  auto add_grid = [&](CLI::App* s, const char* help) {
    seen_.track("grid", s->add_option("--grid", opt_.grid, help));
  };

  std::string action;

  // threshold
  auto* threshold_cmd = app.add_subcommand("threshold", "decay thresholds");
  threshold_cmd->require_subcommand(1);
  {
    auto* l1 = threshold_cmd->add_subcommand("l1", "theta_l1(tau, psi) and kappa_l1(tau)");
    seen_.track("tau", l1->add_option("--tau", opt_.tau, "sparsity fraction"));
    l1->add_option("--psi", opt_.psi, "level (default 0)")->check(CLI::NonNegativeNumber);
    add_grid(l1, "tau grid a:b:step");
    add_out(l1);
    l1->callback([&] { action = "threshold-l1"; });

    auto* orth = threshold_cmd->add_subcommand("orthant", "theta_orthant(psi)");
    orth->add_option("--psi", opt_.psi, "level (default 0)");
    orth->callback([&] { action = "threshold-orthant"; });

    auto* s1 = threshold_cmd->add_subcommand("schatten1", "min(6 rho - 3 rho^2, 1)");
    seen_.track("rho", s1->add_option("--rho", opt_.rho, "rank fraction")->required());
    s1->callback([&] { action = "threshold-schatten1"; });

    auto* op = threshold_cmd->add_subcommand("operator", "operator-norm threshold");
    op->callback([&] { action = "threshold-operator"; });

    auto* sub = threshold_cmd->add_subcommand("subspace", "subspace threshold sigma");
    sub->add_option("--sigma", opt_.sigma, "subspace dimension fraction")->required();
    sub->callback([&] { action = "threshold-subspace"; });
  }

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "phase-transition curves and constants");
  curve_cmd->require_subcommand(1);
  std::string curve_which;
  for (const char* name : {"mca-weak", "mca-strong", "channel", "rank-sparsity", "matrix-bounds"}) {
    auto* c = curve_cmd->add_subcommand(name, std::string("curve ") + name);
    if (std::string(name) != "channel" && std::string(name) != "matrix-bounds") {
      add_grid(c, "primary-axis grid a:b:step (default 200 points)");
      add_threads(c);
    }
    add_out(c);
    c->callback([&, name] {
      action = "curve";
      curve_which = name;
    });
  }

  // demix
  auto* dm = app.add_subcommand("demix", "solve one instance given as JSON");
  dm->add_option("instance", opt_.instance, "instance JSON file")->required();
  seen_.track("tol", dm->add_option("--tol", opt_.tol, "DR stopping tolerance"));
  seen_.track("max_iter", dm->add_option("--max-iter", opt_.max_iter, "DR iteration cap"));
  add_out(dm);
  dm->callback([&] { action = "demix"; });

  // cones
  auto* cn = app.add_subcommand("cones", "cone geometry");
  cn->require_subcommand(1);
  {
    auto add_cone = [&](CLI::App* s, bool two) {
      s->add_option("--cone", opt_.cone, "orthant | full | linf | l1:k | subspace:n");
      if (two) s->add_option("--cone2", opt_.cone2, "second cone");
      add_d(s);
      add_seed(s);
    };
    auto* vol = cn->add_subcommand("volumes", "intrinsic volumes");
    add_cone(vol, false);
    vol->add_option("--samples", opt_.samples, "Monte Carlo samples");
    vol->add_flag("--mc", opt_.monte_carlo, "force Monte Carlo even when exact values exist");
    add_threads(vol);
    add_out(vol);
    vol->callback([&] { action = "cones-volumes"; });

    auto* kin = cn->add_subcommand("kinematic", "kinematic-formula probability");
    add_cone(kin, true);
    kin->add_option("--samples", opt_.samples, "Monte Carlo samples for non-exact profiles");
    kin->add_flag("--mc", opt_.monte_carlo, "force Monte Carlo profiles");
    add_threads(kin);
    kin->callback([&] { action = "cones-kinematic"; });

    auto* wid = cn->add_subcommand("width", "Gaussian width");
    add_cone(wid, false);
    wid->add_option("--samples", opt_.samples, "Monte Carlo samples");
    add_threads(wid);
    wid->callback([&] { action = "cones-width"; });

    auto* inter = cn->add_subcommand("intersect", "K meets QK' for Haar Q");
    add_cone(inter, true);
    seen_.track("trials", inter->add_option("--trials", opt_.trials, "number of Haar draws"));
    inter->callback([&] { action = "cones-intersect"; });
  }

  // experiment
  auto* ex = app.add_subcommand("experiment", "Monte Carlo phase-transition experiments");
  ex->require_subcommand(1);
  std::string ex_kind;
  for (const char* name : {"mca", "channel-benign", "channel-erase", "rank-sparsity"}) {
    auto* e = ex->add_subcommand(name, std::string("experiment ") + name);
    add_d(e);
    seen_.track("n", e->add_option("--n", opt_.n, "matrix side (rank-sparsity)"));
    add_grid(e, "axis1 grid a:b:step");
    seen_.track("grid2", e->add_option("--grid2", opt_.grid2, "axis2 grid a:b:step"));
    seen_.track("trials", e->add_option("--trials", opt_.trials, "trials per cell"));
    add_seed(e);
    seen_.track("tol", e->add_option("--tol", opt_.tol, "DR stopping tolerance"));
    seen_.track("max_iter", e->add_option("--max-iter", opt_.max_iter, "DR iteration cap"));
    add_threads(e);
    add_out(e);
    e->add_option("--contour", opt_.contour, "write the empirical 50% contour CSV here");
    e->add_option("--config", opt_.config, "experiment config JSON");
    e->add_flag("--paper-scale", opt_.paper_scale, "use large problem sizes (slow)");
    e->callback([&, name] {
      action = "experiment";
      ex_kind = name;
    });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out_, err_) == 0 ? kOk : kUsageError;
  }

  if (action == "threshold-l1") threshold_l1();
  else if (action == "threshold-orthant") threshold_orthant();
  else if (action == "threshold-schatten1") {
    header();
    out_ << "theta_schatten1(" << format_number(opt_.rho)
         << ") = " << format_number(thresholds::theta_schatten1(opt_.rho)) << '\n';
  } else if (action == "threshold-operator") {
    header();
    out_ << "theta_operator = " << format_number(thresholds::theta_operator()) << '\n';
  } else if (action == "threshold-subspace") {
    header();
    out_ << "theta_subspace(" << format_number(opt_.sigma)
         << ") = " << format_number(thresholds::theta_subspace(opt_.sigma)) << '\n';
  } else if (action == "curve") curve(curve_which);
  else if (action == "demix") demix();
  else if (action == "cones-volumes") cones_volumes();
  else if (action == "cones-kinematic") cones_kinematic();
  else if (action == "cones-width") cones_width();
  else if (action == "cones-intersect") cones_intersect();
  else if (action == "experiment") experiment(experiments::parse_experiment_kind(ex_kind));
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    Runner runner(out, err);
    return runner.run(args);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
}

}  // namespace demix::cli
