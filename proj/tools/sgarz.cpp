// Command-line front end: wires configuration files to basis construction,
// property checks, Galerkin simulations, Monte-Carlo references, and summary
// comparisons. Exit codes: 0 ok, 1 numerical failure, 2 config/IO error,
// 3 comparison threshold exceeded.

#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

#include "sgarz/app.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Stochastic Galerkin solver for the Aw-Rascle-Zhang traffic model"};
  cli.require_subcommand(1);

  sgarz::app::CheckOptions check;
  CLI::App* check_cmd = cli.add_subcommand(
      "check", "Verify basis assumptions and the Galerkin algebra identities");
  check_cmd->add_option("--level", check.level, "Basis level J (default 3)");
  check_cmd->add_option("--basis-cache", check.basis_cache,
                        "Read/write the basis cache at this path");
  check_cmd->add_option("--pairs", check.random_pairs,
                        "Number of random probe pairs");
  check_cmd->add_option("--seed", check.seed, "Seed for the probe vectors");
  check_cmd->add_option("--out", check.out_dir,
                        "Also write the stability probe table here");

  sgarz::app::SimulateOptions simulate;
  std::uint64_t simulate_seed = 0;
  CLI::App* simulate_cmd =
      cli.add_subcommand("simulate", "Advance the Galerkin system from a config");
  simulate_cmd->add_option("--config", simulate.config_path, "Config file")
      ->required();
  simulate_cmd->add_option("--out", simulate.out_dir, "Output directory");
  simulate_cmd->add_option("--basis-cache", simulate.basis_cache,
                           "Read/write the basis cache at this path");
  simulate_cmd->add_option("--seed", simulate_seed,
                           "Seed recorded in the manifest");

  sgarz::app::ReferenceOptions reference;
  std::uint64_t reference_seed = 0;
  long long reference_samples = 0;
  CLI::App* reference_cmd = cli.add_subcommand(
      "reference", "Monte-Carlo reference statistics from the exact solvers");
  reference_cmd->add_option("--config", reference.config_path, "Config file")
      ->required();
  reference_cmd->add_option("--out", reference.out_dir, "Output directory");
  reference_cmd->add_option("--seed", reference_seed, "Sampling seed override");
  reference_cmd->add_option("--samples", reference_samples,
                            "Sample count override");
  reference_cmd->add_option("--threads", reference.threads, "Worker threads");

  sgarz::app::CompareOptions compare;
  CLI::App* compare_cmd = cli.add_subcommand(
      "compare", "L1/Linf distances between two statistics files");
  compare_cmd->add_option("summary_a", compare.file_a, "First statistics CSV")
      ->required();
  compare_cmd->add_option("summary_b", compare.file_b, "Second statistics CSV")
      ->required();
  compare_cmd->add_option("--max-l1-mean", compare.max_l1_mean,
                          "Fail (exit 3) above this L1 distance of means");
  compare_cmd->add_option("--max-l1-band", compare.max_l1_band,
                          "Fail (exit 3) above this L1 distance of band edges");
  compare_cmd->add_option("--max-linf-mean", compare.max_linf_mean,
                          "Fail (exit 3) above this Linf distance of means");
  compare_cmd->add_option("--max-linf-band", compare.max_linf_band,
                          "Fail (exit 3) above this Linf distance of band edges");

  sgarz::app::BasisOptions basis;
  CLI::App* basis_cmd =
      cli.add_subcommand("basis", "Precompute a basis and write its cache");
  basis_cmd->add_option("--level", basis.level, "Basis level J")->required();
  basis_cmd->add_option("--basis-cache", basis.cache_path,
                        "Cache file to write");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = cli.exit(err);
    return code == 0 ? 0 : sgarz::app::kExitConfig;
  }

  if (*check_cmd) return sgarz::app::run_check(check, std::cout);
  if (*simulate_cmd) {
    if (simulate_cmd->count("--seed") > 0) simulate.seed = simulate_seed;
    return sgarz::app::run_simulate(simulate, std::cout);
  }
  if (*reference_cmd) {
    if (reference_cmd->count("--seed") > 0) reference.seed = reference_seed;
    if (reference_cmd->count("--samples") > 0) {
      reference.samples = reference_samples;
    }
    return sgarz::app::run_reference(reference, std::cout);
  }
  if (*compare_cmd) return sgarz::app::run_compare(compare, std::cout);
  if (*basis_cmd) return sgarz::app::run_basis(basis, std::cout);
  return sgarz::app::kExitConfig;
}
