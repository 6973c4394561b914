#pragma once

// Monte-Carlo reference statistics for the uncertain Riemann problems: each
// sample maps a counter-based uniform draw through the left density law and
// evaluates the exact solver at every cell center. Sampling is
// embarrassingly parallel over contiguous counter ranges; per-worker moment
// accumulators are merged in worker order, so results are reproducible for a
// fixed (seed, samples, threads) triple and independent of scheduling.

#include <cstdint>
#include <thread>
#include <vector>

#include "sgarz/riemann.hpp"
#include "sgarz/rng.hpp"
#include "sgarz/statistics.hpp"

namespace sgarz {

enum class ReferenceTarget { arz_homogeneous, lwr_equilibrium };

struct MonteCarloOptions {
  long long samples = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
};

inline StatSummary monte_carlo_reference(const RiemannProblem& problem,
                                         const ModelConfig& cfg,
                                         ReferenceTarget target, double t,
                                         const Grid& grid,
                                         const MonteCarloOptions& opts) {
  problem.validate(cfg);
  grid.validate();
  if (opts.samples < 1) {
    throw ConfigError("monte_carlo_reference: need at least one sample");
  }

  const int n_cells = grid.cells;
  const CounterRng rng(opts.seed);

  auto solve_cell = [&](double rho_l, int j) {
    if (t <= 0.0) {
      return grid.center(j) < problem.jump_position ? rho_l
                                                    : problem.rho_right;
    }
    const double speed = (grid.center(j) - problem.jump_position) / t;
    if (target == ReferenceTarget::lwr_equilibrium) {
      return lwr_riemann_exact(rho_l, problem.rho_right, speed);
    }
    return arz_riemann_exact(rho_l, problem.v_left, problem.rho_right,
                             problem.v_right, cfg, speed)
        .rho;
  };

  auto accumulate_range = [&](long long begin, long long end,
                              std::vector<RunningMoments>& moments) {
    for (long long m = begin; m < end; ++m) {
      const double rho_l = problem.rho_left(rng.uniform(m));
      for (int j = 0; j < n_cells; ++j) {
        moments[j].add(solve_cell(rho_l, j));
      }
    }
  };

  const int workers = static_cast<int>(
      std::max<long long>(1, std::min<long long>(opts.threads, opts.samples)));
  std::vector<std::vector<RunningMoments>> partial(
      workers, std::vector<RunningMoments>(n_cells));
  if (workers == 1) {
    accumulate_range(0, opts.samples, partial[0]);
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (opts.samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long long begin = w * chunk;
      const long long end = std::min<long long>(begin + chunk, opts.samples);
      pool.emplace_back(
          [&, begin, end, w]() { accumulate_range(begin, end, partial[w]); });
    }
    for (std::thread& th : pool) th.join();
  }

  std::vector<RunningMoments> moments(n_cells);
  for (int w = 0; w < workers; ++w) {
    for (int j = 0; j < n_cells; ++j) moments[j].merge(partial[w][j]);
  }

  StatSummary summary;
  summary.x.resize(n_cells);
  summary.mean.resize(n_cells);
  summary.stddev.resize(n_cells);
  summary.lower.resize(n_cells);
  summary.upper.resize(n_cells);
  for (int j = 0; j < n_cells; ++j) {
    const double mean = moments[j].mean;
    const double stddev = std::sqrt(moments[j].variance());
    summary.x[j] = grid.center(j);
    summary.mean[j] = mean;
    summary.stddev[j] = stddev;
    summary.lower[j] = mean - stddev;
    summary.upper[j] = mean + stddev;
  }
  return summary;
}

}  // namespace sgarz
