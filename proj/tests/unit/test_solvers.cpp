#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "demix/douglas_rachford.hpp"
#include "demix/error.hpp"
#include "demix/experiments.hpp"
#include "demix/linalg.hpp"
#include "demix/prox.hpp"
#include "demix/random_models.hpp"
#include "demix/simplex.hpp"
#include "lemma_oracle.hpp"
#include "oracles.hpp"

using namespace demix;
using namespace demix::solvers;

namespace {

DenseVector gaussian_vector(std::size_t d, RngState& rng, double scale = 1.0) {
  DenseVector v(d);
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

double dist(const DenseVector& a, const DenseVector& b) { return norm2((a - b).span()); }

GaugeSpec random_gauge(RngState& rng) {
  const auto kind = static_cast<GaugeKind>(rng.uniform_index(4));
  GaugeSpec g{kind, 0};
  g.shape = g.is_matrix() ? 2 + rng.uniform_index(4) : 1 + rng.uniform_index(12);
  return g;
}

GaugeSpec dual_of(GaugeSpec g) {
  switch (g.kind) {
    case GaugeKind::l1: g.kind = GaugeKind::linf; break;
    case GaugeKind::linf: g.kind = GaugeKind::l1; break;
    case GaugeKind::schatten1: g.kind = GaugeKind::operator_norm; break;
    case GaugeKind::operator_norm: g.kind = GaugeKind::schatten1; break;
  }
  return g;
}

DenseMatrix rotation(double a) {
  return DenseMatrix::from_rows({{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}});
}

}  // namespace

TEST(Gauge, ValuesAndNames) {
  EXPECT_EQ(gauge_value({GaugeKind::l1, 3}, DenseVector{1, -2, 3}), 6.0);
  EXPECT_EQ(gauge_value({GaugeKind::linf, 3}, DenseVector{1, -4, 3}), 4.0);
  const auto m = vec(DenseMatrix::from_rows({{3, 0}, {0, -2}}));
  EXPECT_NEAR(gauge_value({GaugeKind::schatten1, 2}, m), 5.0, 1e-14);
  EXPECT_NEAR(gauge_value({GaugeKind::operator_norm, 2}, m), 3.0, 1e-14);
  EXPECT_EQ(parse_gauge_kind("operator"), GaugeKind::operator_norm);
  EXPECT_EQ(to_string(GaugeKind::schatten1), "schatten1");
  EXPECT_THROW((void)parse_gauge_kind("l2"), DomainError);
  EXPECT_THROW((void)gauge_value({GaugeKind::l1, 3}, DenseVector{1, 2}), DomainError);
}

TEST(ProxL1, Examples) {
  const DenseVector v{3, -1, 0.5};
  EXPECT_EQ(prox_l1(v, 0.0), v);
  EXPECT_EQ(prox_l1(DenseVector{3, -1}, 2.0), (DenseVector{1, 0}));
  EXPECT_THROW((void)prox_l1(v, -1.0), DomainError);
}

TEST(ProxL1, SubgradientOptimality) {
  RngState rng(51);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto v = gaussian_vector(8, rng, 2.0);
    const double t = rng.uniform() * 2.0;
    const auto p = prox_l1(v, t);
    // v − p ∈ t·∂‖p‖₁
    for (std::size_t i = 0; i < 8; ++i) {
      const double g = v[i] - p[i];
      if (p[i] > 0) ASSERT_NEAR(g, t, 1e-12);
      else if (p[i] < 0) ASSERT_NEAR(g, -t, 1e-12);
      else ASSERT_LE(std::abs(g), t + 1e-12);
    }
  }
}

TEST(ProjectBall, Examples) {
  EXPECT_EQ(project_linf_ball(DenseVector{2, -0.5}, 1.0), (DenseVector{1, -0.5}));
  const auto p = project_l1_ball(DenseVector{1, 1}, 1.0);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
  RngState rng(52);
  for (int rep = 0; rep < 100; ++rep) {
    const auto g = random_gauge(rng);
    const auto v = gaussian_vector(g.dim(), rng, 0.1);
    const double alpha = gauge_value(g, v) * 1.5 + 1e-3;
    EXPECT_LT(max_abs_diff(project_ball(g, v, alpha).span(), v.span()), 1e-12);
  }
}

TEST(ProjectBall, L1GridSearch) {
  RngState rng(53);
  for (int rep = 0; rep < 20; ++rep) {
    const DenseVector v{2 * rng.normal(), 2 * rng.normal()};
    const auto p = project_l1_ball(v, 1.0);
    double best = INFINITY;
    DenseVector arg(2);
    for (int a = -1000; a <= 1000; ++a)
      for (int b = -1000; b <= 1000; ++b) {
        const DenseVector u{a * 1e-3, b * 1e-3};
        if (std::abs(u[0]) + std::abs(u[1]) > 1.0) continue;
        const double r = dist(u, v);
        if (r < best) {
          best = r;
          arg = u;
        }
      }
    EXPECT_LE(dist(p, v), best + 1e-12);
    EXPECT_LT(max_abs_diff(p.span(), arg.span()), 1.5e-3);
  }
}

TEST(ProxSchatten1, Examples) {
  RngState rng(54);
  DenseMatrix m(5, 5);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t i = 0; i < 5; ++i) m(i, j) = rng.normal();
  EXPECT_LT(max_abs_diff(prox_schatten1(m, 0.0), m), 1e-12);

  DenseVector u = gaussian_vector(4, rng), w = gaussian_vector(4, rng);
  u *= 1.0 / norm2(u.span());
  w *= 1.0 / norm2(w.span());
  DenseMatrix r1(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r1(i, j) = u[i] * w[j];
  const auto shrunk = prox_schatten1(r1, 0.4);
  DenseMatrix want = r1;
  for (std::size_t j = 0; j < 4; ++j)
    for (double& x : want.col(j)) x *= 0.6;
  EXPECT_LT(max_abs_diff(shrunk, want), 1e-12);
}

TEST(ProxSchatten1, DualCertificate) {
  RngState rng(55);
  for (int rep = 0; rep < 200; ++rep) {
    DenseMatrix m(5, 5);
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t i = 0; i < 5; ++i) m(i, j) = rng.normal();
    const double t = rng.uniform() * 2.0;
    const auto p = prox_schatten1(m, t);
    DenseMatrix r = m;
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t i = 0; i < 5; ++i) r(i, j) -= p(i, j);
    const auto sp = svd(p).singular_values;
    double nuclear = 0;
    for (double s : sp) nuclear += s;
    EXPECT_LE(svd(r).singular_values[0], t + 1e-8);
    EXPECT_NEAR(dot(vec(r).span(), vec(p).span()), t * nuclear, 1e-7);
  }
}

TEST(ProjectBall, L1RadiusAtTheNormItself) {
  // α equal to the sorted-order sum; the unsorted norm may exceed it by an ulp.
  RngState rng(58);
  for (int rep = 0; rep < 2000; ++rep) {
    const auto v = gaussian_vector(1 + rng.uniform_index(40), rng);
    std::vector<double> mag;
    for (double x : v) mag.push_back(std::abs(x));
    std::sort(mag.begin(), mag.end(), std::greater<>());
    double alpha = 0.0;
    for (double m : mag) alpha += m;
    DenseVector p;
    ASSERT_NO_THROW(p = project_l1_ball(v, alpha));
    ASSERT_LT(max_abs_diff(p.span(), v.span()), 1e-12);
  }
}

TEST(Prox, NonexpansiveAndIdempotent) {
  RngState rng(56);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto g = random_gauge(rng);
    const auto u = gaussian_vector(g.dim(), rng, 2.0);
    const auto v = gaussian_vector(g.dim(), rng, 2.0);
    const double t = rng.uniform() * 2.0;
    const double alpha = rng.uniform() * 3.0;
    ASSERT_LE(dist(prox_gauge(g, u, t), prox_gauge(g, v, t)), dist(u, v) + 1e-9);
    const auto pu = project_ball(g, u, alpha);
    ASSERT_LE(dist(pu, project_ball(g, v, alpha)), dist(u, v) + 1e-9);
    ASSERT_LT(max_abs_diff(project_ball(g, pu, alpha).span(), pu.span()), 1e-9);
    ASSERT_LE(gauge_value(g, pu), alpha * (1 + 1e-9) + 1e-12);
  }
}

TEST(Prox, MoreauDecomposition) {
  RngState rng(57);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto v = gaussian_vector(10, rng, 2.0);
    const double t = rng.uniform() * 2.0;
    ASSERT_LT(max_abs_diff((prox_l1(v, t) + project_linf_ball(v, t)).span(), v.span()), 1e-10);
    const auto g = random_gauge(rng);
    const auto w = gaussian_vector(g.dim(), rng, 2.0);
    const auto sum = prox_gauge(g, w, t) + project_ball(dual_of(g), w, t);
    ASSERT_LT(max_abs_diff(sum.span(), w.span()), 1e-9) << to_string(g.kind);
  }
}

TEST(Simplex, SmallCases) {
  LinearProgram lp;
  lp.sense = Sense::maximize;
  lp.objective = DenseVector{1};
  lp.constraints = DenseMatrix::from_rows({{1}});
  lp.rhs = DenseVector{1};
  auto sol = simplex_lp(lp);
  EXPECT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.objective, 1.0, 1e-12);

  lp.rhs = DenseVector{-1};
  EXPECT_EQ(simplex_lp(lp).status, LpStatus::infeasible);

  lp.constraints = DenseMatrix::from_rows({{-1}});
  lp.rhs = DenseVector{1};
  EXPECT_EQ(simplex_lp(lp).status, LpStatus::unbounded);

  lp.rhs = DenseVector{1, 2};
  EXPECT_THROW((void)simplex_lp(lp), DomainError);
}

TEST(Simplex, EqualityAndFreeVariables) {
  // min x + y  s.t.  x − y = 1, x, y free in [−5, 5]
  LinearProgram lp;
  lp.objective = DenseVector{1, 1};
  lp.constraints = DenseMatrix::from_rows({{1, -1}});
  lp.rhs = DenseVector{1};
  lp.relations = {Relation::equal};
  lp.bounds = {{-5, 5}, {-5, 5}};
  const auto sol = simplex_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.objective, -9.0, 1e-10);
  EXPECT_NEAR(sol.x[0], -4.0, 1e-10);
}

TEST(Simplex, MatchesVertexEnumeration) {
  RngState rng(58);
  auto check = [&](std::size_t n, std::size_t m) {
    LinearProgram lp;
    lp.sense = Sense::maximize;
    lp.objective = gaussian_vector(n, rng);
    lp.constraints = DenseMatrix(m, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) lp.constraints(i, j) = rng.normal();
    lp.rhs = DenseVector(m);
    for (auto& b : lp.rhs) b = 0.2 + rng.uniform();
    lp.bounds.assign(n, {-1.0, 1.0});
    const auto sol = simplex_lp(lp);
    ASSERT_EQ(sol.status, LpStatus::optimal);

    oracle::Matrix g;
    std::vector<double> h;
    for (std::size_t i = 0; i < m; ++i) {
      g.push_back(lp.constraints.row(i).values());
      h.push_back(lp.rhs[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      g.push_back(e);
      h.push_back(1.0);
      e[j] = -1.0;
      g.push_back(e);
      h.push_back(1.0);
    }
    const auto best = oracle::lp_vertex_max(g, h, lp.objective.values());
    ASSERT_TRUE(best.has_value());
    EXPECT_NEAR(sol.objective, *best, 1e-8);
  };
  for (int rep = 0; rep < 20; ++rep) check(5, 2);
  for (int rep = 0; rep < 2; ++rep) check(10, 2);
}

TEST(Demix, DegenerateConstraintReturnsObservation) {
  RngState rng(59);
  DemixProblem p;
  p.z0 = gaussian_vector(6, rng);
  p.q = models::haar_orthogonal(6, rng);
  p.objective = {GaugeKind::l1, 6};
  p.constraint = {GaugeKind::l1, 6};
  p.alpha = 0.0;
  const auto r = solve_demix(p);
  EXPECT_EQ(r.x_star, p.z0);
  EXPECT_EQ(norm_inf(r.y_star.span()), 0.0);
}

TEST(Demix, TwoDimensionalMcaMatchesLp) {
  const DenseVector x0{1, 0}, y0{0, 0.5};
  DemixProblem p;
  p.q = rotation(0.3);
  p.z0 = x0 + multiply(p.q, y0.span());
  p.objective = {GaugeKind::l1, 2};
  p.constraint = {GaugeKind::l1, 2};
  p.alpha = 0.5;
  const auto r = solve_demix(p);
  ASSERT_TRUE(r.converged);

  // variables (y1, y2, t1, t2, s1, s2): min t1 + t2 with |z0 − Qy| ≤ t, |y| ≤ s, Σs ≤ α
  LinearProgram lp;
  lp.objective = DenseVector{0, 0, 1, 1, 0, 0};
  lp.constraints = DenseMatrix(9, 6);
  lp.rhs = DenseVector(9);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      lp.constraints(2 * i, j) = p.q(i, j);
      lp.constraints(2 * i + 1, j) = -p.q(i, j);
    }
    lp.constraints(2 * i, 2 + i) = -1;
    lp.constraints(2 * i + 1, 2 + i) = -1;
    lp.rhs[2 * i] = p.z0[i];
    lp.rhs[2 * i + 1] = -p.z0[i];
    lp.constraints(4 + 2 * i, i) = 1;
    lp.constraints(4 + 2 * i, 4 + i) = -1;
    lp.constraints(5 + 2 * i, i) = -1;
    lp.constraints(5 + 2 * i, 4 + i) = -1;
  }
  lp.constraints(8, 4) = lp.constraints(8, 5) = 1;
  lp.rhs[8] = p.alpha;
  const double inf = std::numeric_limits<double>::infinity();
  lp.bounds = {{-inf, inf}, {-inf, inf}, {0, inf}, {0, inf}, {0, inf}, {0, inf}};
  const auto sol = simplex_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(norm1(r.x_star.span()), sol.objective, 1e-5);
  EXPECT_NEAR(r.y_star[0], sol.x[0], 1e-5);
  EXPECT_NEAR(r.y_star[1], sol.x[1], 1e-5);
}

TEST(Demix, ReportsAreAlwaysFeasible) {
  RngState rng(60);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t d = 4 + rng.uniform_index(10);
    auto inst = experiments::make_mca_instance(d, rng.uniform_index(d + 1), rng.uniform_index(d + 1), rng);
    DrParams params;
    params.max_iter = 1 + rng.uniform_index(400);
    const auto r = solve_demix(inst.problem, params);
    const auto recon = r.x_star + multiply(inst.problem.q, r.y_star.span());
    EXPECT_LT(max_abs_diff(recon.span(), inst.problem.z0.span()), 1e-7);
    EXPECT_LE(gauge_value(inst.problem.constraint, r.y_star),
              inst.problem.alpha * (1 + 1e-7) + 1e-12);
  }
}

TEST(Demix, NonConvergenceIsFlagged) {
  RngState rng(61);
  auto inst = experiments::make_mca_instance(20, 5, 5, rng);
  DrParams params;
  params.max_iter = 3;
  const auto r = solve_demix(inst.problem, params);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3u);
}

TEST(Demix, RejectsBadInput) {
  RngState rng(62);
  auto inst = experiments::make_mca_instance(5, 1, 1, rng);
  auto p = inst.problem;
  p.q(0, 0) += 0.1;
  EXPECT_THROW((void)solve_demix(p), DomainError);
  DrParams bad;
  bad.gamma = 0.0;
  EXPECT_THROW((void)solve_demix(inst.problem, bad), DomainError);
  bad.gamma = 1.0;
  bad.relaxation = 2.0;
  EXPECT_THROW((void)solve_demix(inst.problem, bad), DomainError);
  p = inst.problem;
  p.alpha = -1;
  EXPECT_THROW((void)solve_demix(p), DomainError);
}

TEST(Demix, ObjectiveOnSecondComponent) {
  // minimize ‖y‖₁ subject to ‖x‖₁ ≤ ‖x₀‖₁: the same sparse pair is recovered
  RngState rng(63);
  int ok = 0;
  for (int rep = 0; rep < 10; ++rep) {
    auto inst = experiments::make_mca_instance(30, 2, 2, rng);
    auto p = inst.problem;
    p.objective_side = ObjectiveSide::second;
    p.alpha = norm1(p.truth_x0->span());
    const auto r = solve_demix(p);
    const auto recon = r.x_star + multiply(p.q, r.y_star.span());
    EXPECT_LT(max_abs_diff(recon.span(), p.z0.span()), 1e-7);
    EXPECT_LE(norm1(r.x_star.span()), p.alpha * (1 + 1e-7));
    ok += max_abs_diff(r.y_star.span(), p.truth_y0->span()) < 1e-4;
  }
  EXPECT_GE(ok, 9);
}

TEST(Demix, ChannelSuccessAgreesWithGeometry) {
  // d is kept small enough that the ℓ1 descent cone has at most 2^10 halfspaces
  RngState rng(64);
  const std::size_t d = 12;
  int agree = 0, n = 60;
  for (int t = 0; t < n; ++t) {
    const std::size_t k = rng.uniform_index(3);
    const auto inst = experiments::make_channel_instance(d, k, false, rng);
    const auto r = solve_demix(inst.problem);
    agree += experiments::judge_success(inst, r) == lemma::predicts_success(inst);
  }
  EXPECT_GE(agree, static_cast<int>(0.98 * n));
}
