#pragma once

// Command drivers shared by the command-line tool and the integration tests.
// Every driver returns a process exit code: 0 success, 1 numerical failure,
// 2 configuration or I/O failure, 3 comparison threshold exceeded.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgarz/analysis.hpp"
#include "sgarz/basis_cache.hpp"
#include "sgarz/config.hpp"
#include "sgarz/csv.hpp"
#include "sgarz/galerkin.hpp"
#include "sgarz/monte_carlo.hpp"
#include "sgarz/quadrature.hpp"
#include "sgarz/solver.hpp"
#include "sgarz/statistics.hpp"

namespace sgarz::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitThreshold = 3;

template <typename Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& err) {
    log << "config error: " << err.what() << '\n';
    return kExitConfig;
  } catch (const IoError& err) {
    log << "io error: " << err.what() << '\n';
    return kExitConfig;
  } catch (const SgarzError& err) {
    log << "numerical error: " << err.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& err) {
    log << "error: " << err.what() << '\n';
    return kExitNumerical;
  }
}

namespace detail {

/// Collects emitted files, their sizes, and a running FNV-1a hash of their
/// bytes for the run manifest.
class OutputRecorder {
 public:
  explicit OutputRecorder(std::filesystem::path root) : root_(std::move(root)) {}

  void record(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot re-open output " + path.string());
    char buffer[4096];
    std::uintmax_t bytes = 0;
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
      for (std::streamsize i = 0; i < in.gcount(); ++i) {
        hash_ ^= static_cast<unsigned char>(buffer[i]);
        hash_ *= 1099511628211ULL;
      }
      bytes += static_cast<std::uintmax_t>(in.gcount());
      if (in.eof()) break;
    }
    files_.emplace_back(std::filesystem::relative(path, root_).generic_string(),
                        bytes);
  }

  nlohmann::json file_list() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& [path, bytes] : files_) {
      list.push_back({{"path", path}, {"bytes", bytes}});
    }
    return list;
  }

  std::string content_hash() const {
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << std::setfill('0') << std::setw(16) << hash_;
    return out.str();
  }

 private:
  std::filesystem::path root_;
  std::vector<std::pair<std::string, std::uintmax_t>> files_;
  std::uint64_t hash_ = 1469598103934665603ULL;
};

inline std::string tau_label(const std::optional<double>& tau) {
  if (!tau) return "none";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", *tau);
  return buf;
}

inline void write_manifest(const std::filesystem::path& path,
                           const std::string& command,
                           const std::string& config_text, int level,
                           std::uint64_t seed, long long duration_ms,
                           const OutputRecorder& recorder) {
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["config"] = config_text;
  manifest["level"] = level;
  manifest["seed"] = seed;
  manifest["duration_ms"] = duration_ms;
  manifest["content_hash"] = recorder.content_hash();
  manifest["files"] = recorder.file_list();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << manifest.dump(2) << '\n';
}

/// L2 distance between the exact expansion of rho(xi)^gamma and the Galerkin
/// power of the projected density, for rho(xi) = 0.3 + 0.2 xi.
inline double power_consistency_error(const GpcBasis& basis, int gamma) {
  auto rho = [](double xi) { return 0.3 + 0.2 * xi; };
  const GpcVector modes = basis.haar.project(rho);
  const GpcVector powered = galerkin_power(basis.frame, modes, gamma);
  const QuadratureRule rule = gauss_legendre(5);
  const int n = basis.size();
  double err2 = 0.0;
  for (int s = 0; s < n; ++s) {
    const double approx = basis.haar.evaluate_expansion(powered, (s + 0.5) / n);
    err2 += integrate(
        rule,
        [&](double xi) {
          return std::pow(std::pow(rho(xi), gamma) - approx, 2);
        },
        static_cast<double>(s) / n, static_cast<double>(s + 1) / n);
  }
  return std::sqrt(err2);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckOptions {
  int level = 3;
  std::string basis_cache;
  int random_pairs = 50;
  std::uint64_t seed = 20260810;
  /// When set, the sub-characteristic probe table is also written to
  /// <out_dir>/stability.csv.
  std::string out_dir;
};

/// Runs the assumption checks, the operator-homomorphism sweep, and the
/// power-consistency sweep; prints a residual table.
inline int run_check(const CheckOptions& opts, std::ostream& log) {
  return guarded(log, [&]() {
    const GpcBasis basis = load_or_build_basis(opts.level, opts.basis_cache);

    AssumptionOptions assumptions;
    assumptions.random_pairs = opts.random_pairs;
    assumptions.seed = opts.seed;
    const AssumptionReport report =
        check_assumptions(basis.products, basis.frame, assumptions);

    log << "basis level " << basis.level() << " (" << basis.size()
        << " modes)\n";
    log << "  commuting triple products   max residual " << std::scientific
        << report.commuting_max << (report.commuting_pass ? "  ok" : "  FAIL")
        << '\n';
    log << "  shared diagonalization      max residual "
        << report.diagonalization_max
        << (report.diagonalization_pass ? "  ok" : "  FAIL") << '\n';
    log << "  commuting operators         max residual "
        << report.operator_commute_max
        << (report.operator_commute_pass ? "  ok" : "  FAIL") << '\n';

    std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    double homomorphism_max = 0.0;
    for (int trial = 0; trial < opts.random_pairs; ++trial) {
      GpcVector a(basis.size()), b(basis.size());
      for (int k = 0; k < basis.size(); ++k) a[k] = normal(rng);
      for (int k = 0; k < basis.size(); ++k) b[k] = normal(rng);
      homomorphism_max = std::max(homomorphism_max, homomorphism_check(basis, a, b));
    }
    const bool homomorphism_pass = homomorphism_max <= 1e-11;
    log << "  product homomorphism        max residual " << homomorphism_max
        << (homomorphism_pass ? "  ok" : "  FAIL") << '\n';

    bool consistency_pass = true;
    for (int gamma : {2, 3}) {
      double previous = std::numeric_limits<double>::infinity();
      log << "  power consistency gamma=" << gamma << "  errors";
      for (int level = 0; level <= std::min(opts.level, 4); ++level) {
        const GpcBasis coarse =
            level == basis.level() ? basis : GpcBasis::build(level);
        const double err = detail::power_consistency_error(coarse, gamma);
        log << ' ' << err;
        if (err >= previous) consistency_pass = false;
        previous = err;
      }
      log << '\n';
    }
    log << "  power consistency           "
        << (consistency_pass ? "monotone  ok" : "NOT monotone  FAIL") << '\n';

    // sub-characteristic probe table for the paired closure family
    std::mt19937_64 probe_rng(opts.seed ^ 0x51ab1e5ULL);
    bool stability_pass = true;
    std::ostringstream stability_csv;
    stability_csv << "probe,gamma,min_mu_eigenvalue,schat_pass\n";
    for (int gamma : {1, 2, 3}) {
      ModelConfig model;
      model.closure = Closure::greenshields;
      model.gamma = gamma;
      double worst_mu = std::numeric_limits<double>::infinity();
      int passed = 0;
      const int probes = 20;
      for (int probe = 0; probe < probes; ++probe) {
        const GpcVector rho = random_positive_probe(basis, probe_rng);
        const StabilityReport report = subcharacteristic_check(basis, rho, model);
        worst_mu = std::min(worst_mu, report.min_diffusion_eigenvalue);
        if (report.pass() && report.equivalence_consistent) ++passed;
        stability_csv << probe << ',' << gamma << ','
                      << csv::format_double(report.min_diffusion_eigenvalue)
                      << ',' << (report.pass() ? 1 : 0) << '\n';
      }
      if (passed != probes) stability_pass = false;
      log << "  sub-characteristic gamma=" << gamma << "   " << passed << '/'
          << probes << " probes, min mu eigenvalue " << worst_mu
          << (passed == probes ? "  ok" : "  FAIL") << '\n';
    }
    log << std::defaultfloat;
    if (!opts.out_dir.empty()) {
      std::filesystem::create_directories(opts.out_dir);
      const std::filesystem::path path =
          std::filesystem::path(opts.out_dir) / "stability.csv";
      std::ofstream out = csv::open_output(path.string());
      out << stability_csv.str();
      log << "wrote " << path.string() << '\n';
    }

    if (!report.commuting_pass) {
      log << "failed: triple products " << report.commuting_worst_a << ","
          << report.commuting_worst_b << " do not commute\n";
      return kExitNumerical;
    }
    if (!report.diagonalization_pass) {
      log << "failed: matrix " << report.diagonalization_worst
          << " is not diagonalized by the shared frame\n";
      return kExitNumerical;
    }
    if (!report.operator_commute_pass || !homomorphism_pass ||
        !consistency_pass || !stability_pass) {
      return kExitNumerical;
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::string basis_cache;
  std::optional<std::uint64_t> seed;
};

inline int run_simulate(const SimulateOptions& opts, std::ostream& log) {
  return guarded(log, [&]() {
    namespace fs = std::filesystem;
    const auto started = std::chrono::steady_clock::now();
    const ConfigFile cfg = ConfigFile::load(opts.config_path);
    const SimulationSetup setup = SimulationSetup::parse(cfg);
    const GpcBasis basis = load_or_build_basis(setup.level, opts.basis_cache);

    const fs::path root(opts.out_dir);
    fs::create_directories(root);
    detail::OutputRecorder recorder(root);
    const bool sweep = setup.relaxation_values.size() > 1;

    struct SweepRow {
      std::string label;
      long long steps;
      double final_mass;
      std::string directory;
    };
    std::vector<SweepRow> sweep_rows;

    for (const std::optional<double>& tau : setup.relaxation_values) {
      ModelConfig model = setup.model;
      model.tau = tau;
      const std::string label = detail::tau_label(tau);
      const fs::path dir = sweep ? root / ("tau_" + label) : root;
      fs::create_directories(dir);

      const FieldState initial =
          riemann_initial_state(basis, setup.problem, setup.grid, model);
      const RunResult result =
          run(basis, initial, setup.grid, model, setup.solver);

      {
        std::ofstream index = csv::open_output((dir / "snapshots.csv").string());
        index << "index,t,state_file,stats_file\n";
        for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
          index << i << ',' << csv::format_double(result.snapshots[i].time)
                << ",snapshot_" << i << ".csv,stats_" << i << ".csv\n";
        }
      }
      recorder.record(dir / "snapshots.csv");
      for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
        const fs::path state_path = dir / ("snapshot_" + std::to_string(i) + ".csv");
        const fs::path stats_path = dir / ("stats_" + std::to_string(i) + ".csv");
        csv::write_snapshot(state_path.string(), result.snapshots[i].state,
                            setup.grid);
        csv::write_stat_summary(
            stats_path.string(),
            gpc_statistics(result.snapshots[i].state, setup.grid));
        recorder.record(state_path);
        recorder.record(stats_path);
      }
      csv::write_diagnostics((dir / "diagnostics.csv").string(),
                             result.diagnostics);
      recorder.record(dir / "diagnostics.csv");

      const double final_mass = result.diagnostics.empty()
                                    ? total_mass(initial, setup.grid)
                                    : result.diagnostics.back().total_mass;
      sweep_rows.push_back(SweepRow{label,
                                    static_cast<long long>(result.diagnostics.size()),
                                    final_mass,
                                    fs::relative(dir, root).generic_string()});
      log << "tau=" << label << ": " << result.diagnostics.size() << " steps, "
          << result.snapshots.size() << " snapshots\n";
    }

    if (sweep) {
      const fs::path summary_path = root / "sweep_summary.csv";
      std::ofstream summary = csv::open_output(summary_path.string());
      summary << "tau,steps,final_mass,directory\n";
      for (const SweepRow& row : sweep_rows) {
        summary << row.label << ',' << row.steps << ','
                << csv::format_double(row.final_mass) << ',' << row.directory
                << '\n';
      }
      summary.close();
      recorder.record(summary_path);
    }

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    detail::write_manifest(root / "manifest.json", "simulate", cfg.text(),
                           setup.level, opts.seed.value_or(setup.seed), elapsed,
                           recorder);
    log << "wrote " << (root / "manifest.json").string() << '\n';
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// reference
// ---------------------------------------------------------------------------

struct ReferenceOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<long long> samples;
  int threads = 1;
};

inline int run_reference(const ReferenceOptions& opts, std::ostream& log) {
  return guarded(log, [&]() {
    namespace fs = std::filesystem;
    const auto started = std::chrono::steady_clock::now();
    const ConfigFile cfg = ConfigFile::load(opts.config_path);
    const SimulationSetup setup = SimulationSetup::parse(cfg);

    MonteCarloOptions mc;
    mc.samples = opts.samples.value_or(setup.samples);
    mc.seed = opts.seed.value_or(setup.seed);
    mc.threads = opts.threads;

    const StatSummary summary =
        monte_carlo_reference(setup.problem, setup.model, setup.target,
                              setup.solver.t_end, setup.grid, mc);

    const fs::path root(opts.out_dir);
    fs::create_directories(root);
    detail::OutputRecorder recorder(root);
    const fs::path reference_path = root / "reference.csv";
    csv::write_stat_summary(reference_path.string(), summary);
    recorder.record(reference_path);

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    detail::write_manifest(root / "manifest.json", "reference", cfg.text(),
                           setup.level, mc.seed, elapsed, recorder);
    log << "wrote " << reference_path.string() << " (" << mc.samples
        << " samples)\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct CompareOptions {
  std::string file_a;
  std::string file_b;
  double max_l1_mean = std::numeric_limits<double>::infinity();
  double max_l1_band = std::numeric_limits<double>::infinity();
  double max_linf_mean = std::numeric_limits<double>::infinity();
  double max_linf_band = std::numeric_limits<double>::infinity();
};

inline int run_compare(const CompareOptions& opts, std::ostream& log) {
  return guarded(log, [&]() {
    const StatSummary a = csv::read_stat_summary(opts.file_a);
    const StatSummary b = csv::read_stat_summary(opts.file_b);
    const Grid grid = csv::summary_grid(a);
    const ComparisonReport report = compare_summaries(a, b, grid);

    log << "L1(mean)    " << csv::format_double(report.l1_mean) << '\n'
        << "Linf(mean)  " << csv::format_double(report.linf_mean) << '\n'
        << "L1(lower)   " << csv::format_double(report.l1_lower) << '\n'
        << "Linf(lower) " << csv::format_double(report.linf_lower) << '\n'
        << "L1(upper)   " << csv::format_double(report.l1_upper) << '\n'
        << "Linf(upper) " << csv::format_double(report.linf_upper) << '\n';

    const bool ok = report.l1_mean <= opts.max_l1_mean &&
                    report.max_l1_band() <= opts.max_l1_band &&
                    report.linf_mean <= opts.max_linf_mean &&
                    report.max_linf_band() <= opts.max_linf_band;
    if (!ok) {
      log << "threshold exceeded\n";
      return kExitThreshold;
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// basis
// ---------------------------------------------------------------------------

struct BasisOptions {
  int level = 3;
  std::string cache_path;
};

inline int run_basis(const BasisOptions& opts, std::ostream& log) {
  return guarded(log, [&]() {
    const GpcBasis basis = GpcBasis::build(opts.level);
    if (!opts.cache_path.empty()) {
      save_basis_cache(opts.cache_path, basis);
      log << "cached basis level " << basis.level() << " (" << basis.size()
          << " modes) to " << opts.cache_path << '\n';
    } else {
      log << "built basis level " << basis.level() << " (" << basis.size()
          << " modes)\n";
    }
    const AssumptionReport report =
        check_assumptions(basis.products, basis.frame);
    log << "assumption residuals: " << std::scientific << report.commuting_max
        << ' ' << report.diagonalization_max << ' '
        << report.operator_commute_max << std::defaultfloat << '\n';
    return report.all_pass() ? kExitOk : kExitNumerical;
  });
}

}  // namespace sgarz::app
