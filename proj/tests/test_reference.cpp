#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "sgarz/monte_carlo.hpp"
#include "sgarz/statistics.hpp"

using namespace sgarz;

namespace {

ModelConfig unit_linear() {
  ModelConfig cfg;
  cfg.closure = Closure::linear_lwr;
  return cfg;
}

RiemannProblem rarefaction_problem() {
  RiemannProblem problem;
  problem.rho_left_min = 0.55;
  problem.rho_left_max = 0.85;
  problem.v_left = 0.3;
  problem.rho_right = 0.3;
  problem.v_right = 0.7;
  problem.jump_position = 1.0;
  return problem;
}

}  // namespace

TEST_CASE("counter rng is a pure function of seed and counter") {
  const CounterRng rng(42);
  const CounterRng same(42);
  const CounterRng other(43);
  for (std::uint64_t m = 0; m < 1000; ++m) {
    const double u = rng.uniform(m);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == same.uniform(m));
  }
  CHECK(rng.uniform(7) != other.uniform(7));
  CHECK(rng.uniform(7) != rng.uniform(8));
}

TEST_CASE("running moments merge equals streaming") {
  std::mt19937_64 gen(83);
  std::normal_distribution<double> normal(0.3, 0.2);
  std::vector<double> data(999);
  for (double& x : data) x = normal(gen);

  RunningMoments all;
  for (double x : data) all.add(x);

  RunningMoments head, tail;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (i < 400 ? head : tail).add(data[i]);
  }
  head.merge(tail);

  CHECK(head.count == all.count);
  CHECK(head.mean == Catch::Approx(all.mean).epsilon(1e-13));
  CHECK(head.variance() == Catch::Approx(all.variance()).epsilon(1e-12));
}

TEST_CASE("gpc statistics from mode vectors") {
  GpcBasis basis = GpcBasis::build(0);
  Grid grid{2.0, 4};

  FieldState field;
  field.cells.assign(4, GpcState{constant_modes(2, 0.3), constant_modes(2, 0.2)});
  field.cells[1].rho[1] = 0.1;
  const StatSummary summary = gpc_statistics(field, grid);
  CHECK(summary.stddev[0] == 0.0);
  CHECK(summary.mean[1] == Catch::Approx(0.3).margin(1e-15));
  CHECK(summary.stddev[1] == Catch::Approx(0.1).margin(1e-15));
  CHECK(summary.lower[1] == Catch::Approx(0.2).margin(1e-15));
  CHECK(summary.upper[1] == Catch::Approx(0.4).margin(1e-15));
  CHECK(summary.x[0] == Catch::Approx(0.25).margin(1e-15));
}

TEST_CASE("projected uniform law approaches the exact standard deviation") {
  // U(0.15, 0.45): mean 0.30, stddev 0.30/sqrt(12)
  const double exact = 0.30 / std::sqrt(12.0);
  double previous_gap = 1.0;
  for (int level : {0, 2, 4}) {
    GpcBasis basis = GpcBasis::build(level);
    const GpcVector modes =
        basis.haar.project([](double xi) { return 0.15 + 0.30 * xi; });
    Grid grid{1.0, 4};
    FieldState field;
    field.cells.assign(4, GpcState{modes, GpcVector::Zero(basis.size())});
    const StatSummary summary = gpc_statistics(field, grid);
    CHECK(summary.mean[0] == Catch::Approx(0.30).margin(1e-14));
    const double gap = std::abs(summary.stddev[0] - exact);
    CHECK(gap < previous_gap);
    previous_gap = gap;
  }
  CHECK(previous_gap <= 1e-4);
}

TEST_CASE("degenerate law gives zero spread and the deterministic solution") {
  RiemannProblem problem = rarefaction_problem();
  problem.rho_left_min = problem.rho_left_max = 0.7;
  const ModelConfig cfg = unit_linear();
  const Grid grid{2.0, 40};
  MonteCarloOptions opts;
  opts.samples = 50;
  opts.seed = 9;

  const StatSummary summary = monte_carlo_reference(
      problem, cfg, ReferenceTarget::arz_homogeneous, 1.0, grid, opts);
  for (int j = 0; j < grid.cells; ++j) {
    CHECK(summary.stddev[j] == 0.0);
    const double speed = (grid.center(j) - problem.jump_position) / 1.0;
    const PrimState exact = arz_riemann_exact(0.7, problem.v_left,
                                              problem.rho_right,
                                              problem.v_right, cfg, speed);
    CHECK(summary.mean[j] == Catch::Approx(exact.rho).margin(1e-15));
  }
}

TEST_CASE("far-field mean matches the law mean within sampling error") {
  const RiemannProblem problem = rarefaction_problem();
  const ModelConfig cfg = unit_linear();
  const Grid grid{2.0, 200};
  MonteCarloOptions opts;
  opts.samples = 10000;
  opts.seed = 12345;
  const StatSummary summary = monte_carlo_reference(
      problem, cfg, ReferenceTarget::lwr_equilibrium, 1.0, grid, opts);
  // x = 0.005: similarity speed -0.995 lies left of every wave
  const double stderr_mean = 0.30 / std::sqrt(12.0 * opts.samples);
  CHECK(std::abs(summary.mean[0] - 0.7) <= 3.0 * stderr_mean);
  CHECK(summary.stddev[0] == Catch::Approx(0.30 / std::sqrt(12.0)).epsilon(0.05));
}

TEST_CASE("monte carlo reference is reproducible") {
  const RiemannProblem problem = rarefaction_problem();
  const ModelConfig cfg = unit_linear();
  const Grid grid{2.0, 20};
  MonteCarloOptions opts;
  opts.samples = 500;
  opts.seed = 77;

  const StatSummary a = monte_carlo_reference(
      problem, cfg, ReferenceTarget::arz_homogeneous, 1.0, grid, opts);
  const StatSummary b = monte_carlo_reference(
      problem, cfg, ReferenceTarget::arz_homogeneous, 1.0, grid, opts);
  CHECK(a.mean == b.mean);
  CHECK(a.stddev == b.stddev);

  MonteCarloOptions threaded = opts;
  threaded.threads = 3;
  const StatSummary c = monte_carlo_reference(
      problem, cfg, ReferenceTarget::arz_homogeneous, 1.0, grid, threaded);
  const StatSummary d = monte_carlo_reference(
      problem, cfg, ReferenceTarget::arz_homogeneous, 1.0, grid, threaded);
  CHECK(c.mean == d.mean);
  // same statistics regardless of partitioning, up to roundoff
  for (int j = 0; j < grid.cells; ++j) {
    CHECK(c.mean[j] == Catch::Approx(a.mean[j]).margin(1e-13));
  }
}

TEST_CASE("sampling error of the mean scales like the inverse square root") {
  RiemannProblem problem = rarefaction_problem();
  const ModelConfig cfg = unit_linear();
  const Grid grid{2.0, 4};  // x = 0.25 sits left of every wave at t = 1
  const int n_seeds = 32;

  auto spread_of_mean = [&](long long samples) {
    RunningMoments across;
    for (int seed = 0; seed < n_seeds; ++seed) {
      MonteCarloOptions opts;
      opts.samples = samples;
      opts.seed = 1000 + seed;
      const StatSummary summary = monte_carlo_reference(
          problem, cfg, ReferenceTarget::lwr_equilibrium, 1.0, grid, opts);
      across.add(summary.mean[0]);
    }
    return std::sqrt(across.variance());
  };

  const double s3 = spread_of_mean(1000);
  const double s4 = spread_of_mean(10000);
  const double ratio = s3 / s4;
  // expected sqrt(10) ~ 3.16, allow generous statistical slack
  CHECK(ratio > 2.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("summary comparison distances") {
  Grid grid{2.0, 10};
  StatSummary a;
  for (int j = 0; j < grid.cells; ++j) {
    a.x.push_back(grid.center(j));
    a.mean.push_back(0.5);
    a.stddev.push_back(0.1);
    a.lower.push_back(0.4);
    a.upper.push_back(0.6);
  }
  const ComparisonReport self = compare_summaries(a, a, grid);
  CHECK(self.l1_mean == 0.0);
  CHECK(self.linf_mean == 0.0);
  CHECK(self.max_l1_band() == 0.0);

  StatSummary shifted = a;
  for (double& m : shifted.mean) m += 1e-3;
  const ComparisonReport shift = compare_summaries(a, shifted, grid);
  CHECK(shift.l1_mean == Catch::Approx(1e-3 * grid.x_end).margin(1e-15));
  CHECK(shift.linf_mean == Catch::Approx(1e-3).margin(1e-15));

  StatSummary off = a;
  off.x[3] += 0.1;
  CHECK_THROWS_AS(compare_summaries(a, off, grid), GridMismatchError);
  Grid other{2.0, 20};
  CHECK_THROWS_AS(compare_summaries(a, a, other), GridMismatchError);
}
