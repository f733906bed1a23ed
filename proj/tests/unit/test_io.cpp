#include <gtest/gtest.h>

#include <sstream>

#include "demix/error.hpp"
#include "demix/io.hpp"
#include "demix/random_models.hpp"
#include "json.hpp"

using namespace demix;

TEST(Format, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 0.0, 123456789.125}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(Metadata, HeaderLines) {
  std::ostringstream out;
  write_metadata(out, {{"version", "1"}, {"seed", "7"}});
  EXPECT_EQ(out.str(), "# version: 1\n# seed: 7\n");
  EXPECT_STRNE(version(), "");
}

TEST(ProfileCsv, RoundTrip) {
  const auto p = cones::exact_orthant_volumes(7);
  std::stringstream s;
  write_profile_csv(s, p, {{"cone", "orthant"}});
  EXPECT_NE(s.str().find("index_i,v_i\n"), std::string::npos);
  EXPECT_EQ(read_profile_csv(s), p);
}

TEST(ProfileCsv, RejectsBadHeaderAndIndices) {
  std::istringstream bad("idx,v\n-1,1\n");
  EXPECT_THROW((void)read_profile_csv(bad), DomainError);
  std::istringstream skip("index_i,v_i\n-1,0.5\n1,0.5\n");
  EXPECT_THROW((void)read_profile_csv(skip), DomainError);
}

TEST(CurveCsv, RoundTripAndSidecar) {
  curves::CurvePoints c{"tau_x", "tau_y", curves::CurveKind::strong, {{0.1, 0.2}, {1.0 / 3, 0.05}},
                        "fx", "fy", 1e-5};
  std::stringstream s;
  write_curve_csv(s, c);
  const auto back = read_curve_csv(s);
  EXPECT_EQ(back.points, c.points);
  EXPECT_EQ(back.kind, c.kind);
  const auto j = nlohmann::json::parse(curve_sidecar_json(c));
  EXPECT_EQ(j.at("kind"), "strong");
  EXPECT_EQ(j.at("tolerance").get<double>(), 1e-5);
  EXPECT_EQ(j.at("threshold_x"), "fx");
}

TEST(GridCsv, RoundTripWithoutWallTime) {
  experiments::SuccessGrid g;
  g.config.kind = experiments::ExperimentKind::channel_benign;
  g.config.dim = 50;
  g.config.axis1 = {0.1, 0.2};
  g.config.master_seed = 11;
  g.axis1_label = "tau";
  g.version = version();
  g.cells = {{0.1, 0, 10, 9, 1}, {0.2, 0, 10, 3, 0}};
  g.wall_seconds = 1.234;
  std::stringstream s;
  write_grid_csv(s, g);
  const std::string text = s.str();
  EXPECT_EQ(text.find("1.234"), std::string::npos);
  EXPECT_NE(text.find("# seed: 11"), std::string::npos);
  EXPECT_NE(text.find("# nonconverged_total: 1"), std::string::npos);
  const auto f = read_grid_csv(s);
  EXPECT_EQ(f.cells, g.cells);
  g.wall_seconds = 99;
  std::ostringstream again;
  write_grid_csv(again, g);
  EXPECT_EQ(again.str(), text);
}

TEST(GridCsv, RejectsInconsistentRows) {
  std::istringstream bad("axis1,axis2,trials,successes,prob,nonconverged\n0.1,0,5,6,1.2,0\n");
  EXPECT_THROW((void)read_grid_csv(bad), DomainError);
  std::istringstream short_row("axis1,axis2,trials,successes,prob,nonconverged\n0.1,0,5\n");
  EXPECT_THROW((void)read_grid_csv(short_row), DomainError);
}

TEST(ThresholdCsv, RoundTrip) {
  const std::vector<ThresholdRow> rows{{0.1, 0.0, 0.328}, {0.2, 0.1, 1.0 / 7}};
  std::stringstream s;
  write_threshold_table_csv(s, rows);
  const auto back = read_threshold_table_csv(s);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].theta, 1.0 / 7);
  const std::vector<thresholds::ExponentPoint> pts{{0.5, 0.1, 0.3, 0.1, 0.2, 0.0}};
  std::stringstream e;
  write_exponent_grid_csv(e, pts);
  const auto eb = read_exponent_grid_csv(e);
  ASSERT_EQ(eb.size(), 1u);
  EXPECT_EQ(eb[0].psi_int, 0.1);
}

TEST(Json, ReportRoundTrip) {
  solvers::SolveReport r{DenseVector{1, 2}, DenseVector{0.1, -0.3}, 17, 1e-9, true};
  const auto back = report_from_json(report_to_json(r));
  EXPECT_EQ(back.x_star, r.x_star);
  EXPECT_EQ(back.y_star, r.y_star);
  EXPECT_EQ(back.iterations, 17u);
  EXPECT_EQ(back.residual, 1e-9);
  EXPECT_TRUE(back.converged);
}

TEST(Json, ProblemRoundTrip) {
  RngState rng(81);
  auto inst = experiments::make_rank_sparsity_instance(3, 1, 2, rng);
  inst.problem.objective_side = solvers::ObjectiveSide::second;
  const auto back = problem_from_json(problem_to_json(inst.problem));
  EXPECT_EQ(back.z0, inst.problem.z0);
  EXPECT_EQ(back.q, inst.problem.q);
  EXPECT_EQ(back.objective, inst.problem.objective);
  EXPECT_EQ(back.constraint, inst.problem.constraint);
  EXPECT_EQ(back.alpha, inst.problem.alpha);
  EXPECT_EQ(back.objective_side, solvers::ObjectiveSide::second);
  EXPECT_EQ(back.truth_x0, inst.problem.truth_x0);
}

TEST(Json, ProblemErrors) {
  EXPECT_THROW((void)problem_from_json("{not json"), DomainError);
  EXPECT_THROW((void)problem_from_json(R"({"z0":[1,2],"q":[[1,0],[0]],"objective":{"kind":"l1","shape":2},"constraint":{"kind":"l1","shape":2},"alpha":1})"),
               DomainError);
}

TEST(Json, ConfigRoundTrip) {
  experiments::ExperimentConfig cfg;
  cfg.kind = experiments::ExperimentKind::rank_sparsity;
  cfg.dim = 12;
  cfg.points = {{0.05, 0.05}, {0.3, 0.5}};
  cfg.trials = 3;
  cfg.master_seed = 1ULL << 60;
  cfg.solver.max_iter = 777;
  const auto back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(back.kind, cfg.kind);
  EXPECT_EQ(back.points, cfg.points);
  EXPECT_EQ(back.master_seed, cfg.master_seed);
  EXPECT_EQ(back.solver.max_iter, 777u);
  EXPECT_THROW((void)config_from_json(R"({"schema_version":2,"kind":"mca","dim":4,"trials":1,"master_seed":0})"),
               DomainError);
}
