#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "sgarz/analysis.hpp"
#include "support/random_states.hpp"

using namespace sgarz;

namespace {

ModelConfig linear_config(double slope = 1.0) {
  ModelConfig cfg;
  cfg.closure = Closure::linear_lwr;
  cfg.hesitation_slope = slope;
  return cfg;
}

ModelConfig greenshields_config(int gamma, double v_max = 1.0,
                                double rho_max = 1.0) {
  ModelConfig cfg;
  cfg.closure = Closure::greenshields;
  cfg.gamma = gamma;
  cfg.v_max = v_max;
  cfg.rho_max = rho_max;
  return cfg;
}

}  // namespace

TEST_CASE("equilibrium speeds") {
  GpcBasis basis = GpcBasis::build(1);
  const int n = basis.size();

  // deterministic density with the linear closure: f_eq'(rho) = 1 - 2 rho
  const GpcVector det =
      equilibrium_speeds(basis, constant_modes(n, 0.35), linear_config());
  CHECK((det - GpcVector::Constant(n, 1.0 - 0.7)).cwiseAbs().maxCoeff() <= 1e-14);

  // empty-road limit: speeds approach v_max
  const ModelConfig cfg = greenshields_config(1, 1.6);
  const GpcVector empty =
      equilibrium_speeds(basis, constant_modes(n, 1e-6), cfg);
  CHECK((empty - GpcVector::Constant(n, 1.6)).cwiseAbs().maxCoeff() <= 1e-5);

  // multiset matches the dense spectrum of the equilibrium Jacobian
  std::mt19937_64 rng(107);
  for (const ModelConfig& closure : {linear_config(), greenshields_config(2)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const GpcVector rho = testing::random_positive_density(basis, rng);
      std::vector<double> diagonal(n);
      Eigen::Map<GpcVector>(diagonal.data(), n) =
          equilibrium_speeds(basis, rho, closure);
      Eigen::EigenSolver<Eigen::MatrixXd> dense(
          equilibrium_flux_jacobian_dense(basis, rho, closure));
      CHECK(dense.eigenvalues().imag().cwiseAbs().maxCoeff() <= 1e-10);
      std::vector<double> spectrum(n);
      for (int s = 0; s < n; ++s) spectrum[s] = dense.eigenvalues()[s].real();
      std::sort(diagonal.begin(), diagonal.end());
      std::sort(spectrum.begin(), spectrum.end());
      for (int s = 0; s < n; ++s) {
        CHECK(std::abs(diagonal[s] - spectrum[s]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("diffusion coefficient vanishes for the paired closure") {
  GpcBasis basis = GpcBasis::build(2);
  std::mt19937_64 rng(109);
  for (int gamma : {1, 2, 3}) {
    const ModelConfig cfg = greenshields_config(gamma, 1.3, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
      const GpcVector rho = testing::random_positive_density(basis, rng);
      CHECK(diffusion_coefficient(basis, rho, cfg).cwiseAbs().maxCoeff() <=
            1e-12);
    }
  }
}

TEST_CASE("diffusion coefficient reduces to the scalar formula") {
  GpcBasis basis = GpcBasis::build(1);
  const int n = basis.size();
  const double rho = 0.6;

  // mismatched closure h'(rho) = 0.1 < 1 = -V_eq'(rho)
  const ModelConfig cfg = linear_config(0.1);
  const Eigen::MatrixXd mu =
      diffusion_coefficient(basis, constant_modes(n, rho), cfg);
  const double scalar = -rho * rho * (-1.0) * (-1.0 + 0.1);
  CHECK(scalar < 0.0);
  CHECK(mu(0, 0) == Catch::Approx(scalar).margin(1e-13));
  CHECK((mu - scalar * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <=
        1e-13);

  // near-vacuum densities send the diffusion matrix to zero with D(rho)^2
  const Eigen::MatrixXd tiny =
      diffusion_coefficient(basis, constant_modes(n, 1e-5), linear_config());
  CHECK(tiny.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("sub-characteristic condition holds with equality for the linear closure") {
  GpcBasis basis = GpcBasis::build(1);
  const int n = basis.size();
  for (double rho : {0.2, 0.5, 0.8}) {
    const StabilityReport report =
        subcharacteristic_check(basis, constant_modes(n, rho), linear_config());
    CHECK(report.pass());
    CHECK(report.diffusion_psd);
    CHECK(report.equivalence_consistent);
    CHECK(report.lambda2[0] == Catch::Approx(1.0 - rho).margin(1e-13));
    CHECK(report.lambda1[0] == Catch::Approx(1.0 - 2.0 * rho).margin(1e-13));
    CHECK(report.lambda_eq[0] == Catch::Approx(1.0 - 2.0 * rho).margin(1e-13));
  }
}

TEST_CASE("sub-characteristic condition passes across the paired family") {
  GpcBasis basis = GpcBasis::build(2);
  std::mt19937_64 rng(113);
  for (int gamma : {1, 2, 3}) {
    const ModelConfig cfg = greenshields_config(gamma, 1.1, 0.85);
    for (int trial = 0; trial < 100; ++trial) {
      const GpcVector rho = testing::random_positive_density(basis, rng);
      const StabilityReport report = subcharacteristic_check(basis, rho, cfg);
      CHECK(report.pass());
      CHECK(report.equilibrium_slope_negative);
      CHECK(report.diffusion_psd);
      CHECK(report.equivalence_consistent);
    }
  }
}

TEST_CASE("a closure with too little hesitation fails consistently") {
  GpcBasis basis = GpcBasis::build(2);
  const ModelConfig cfg = linear_config(0.1);
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 20; ++trial) {
    const GpcVector rho = testing::random_positive_density(basis, rng);
    const StabilityReport report = subcharacteristic_check(basis, rho, cfg);
    CHECK_FALSE(report.subcharacteristic_pass);
    CHECK(report.min_diffusion_eigenvalue < 0.0);
    CHECK_FALSE(report.diffusion_psd);
    CHECK(report.equivalence_consistent);
  }
}

TEST_CASE("hyperbolicity certificate on deterministic states") {
  GpcBasis basis = GpcBasis::build(1);
  const int n = basis.size();
  const ModelConfig cfg = linear_config();
  const double rho = 0.4, v = 0.6;
  const GpcState state{constant_modes(n, rho),
                       constant_modes(n, rho * (v + rho))};
  const HyperbolicityRecord record = certify_state(basis, state, cfg);
  CHECK(record.certified);
  CHECK(record.max_imaginary <= 1e-12);
  // spectrum is {v - rho, v}, each with multiplicity K+1
  const Eigen::MatrixXd jac = flux_jacobian_dense(basis, state, cfg);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(jac);
  std::vector<double> spectrum(2 * n);
  for (int s = 0; s < 2 * n; ++s) spectrum[s] = solver.eigenvalues()[s].real();
  std::sort(spectrum.begin(), spectrum.end());
  for (int s = 0; s < n; ++s) {
    CHECK(spectrum[s] == Catch::Approx(v - rho).margin(1e-10));
    CHECK(spectrum[n + s] == Catch::Approx(v).margin(1e-10));
  }
}

TEST_CASE("hyperbolicity certificate across random states") {
  GpcBasis basis = GpcBasis::build(1);
  std::mt19937_64 rng(131);
  for (const ModelConfig& cfg : {linear_config(), greenshields_config(2)}) {
    std::vector<GpcState> states;
    for (int trial = 0; trial < 25; ++trial) {
      states.push_back(testing::random_physical_state(basis, cfg, rng));
    }
    for (const HyperbolicityRecord& record :
         hyperbolicity_certificate(basis, states, cfg)) {
      CHECK(record.certified);
      CHECK(record.speed_multiset_gap <= 1e-8);
      CHECK(std::isfinite(record.eigenvector_condition));
    }
  }
}

TEST_CASE("non-positive states are rejected before assembly") {
  GpcBasis basis = GpcBasis::build(1);
  const ModelConfig cfg = linear_config();
  GpcState bad;
  bad.rho = GpcVector::Zero(basis.size());
  bad.rho[1] = 0.5;  // indefinite P(rho)
  bad.z = constant_modes(basis.size(), 0.1);
  CHECK_THROWS_AS(certify_state(basis, bad, cfg), PositivityError);
  CHECK_THROWS_AS(subcharacteristic_check(basis, bad.rho, cfg), PositivityError);
  CHECK_THROWS_AS(diffusion_coefficient(basis, bad.rho, cfg), PositivityError);
  CHECK_THROWS_AS(equilibrium_speeds(basis, bad.rho, cfg), PositivityError);
}

TEST_CASE("scalar reduction of the analysis quantities") {
  GpcBasis basis = GpcBasis::build(2);
  const int n = basis.size();
  std::mt19937_64 rng(137);
  std::uniform_real_distribution<double> rho_dist(0.15, 0.8);
  for (const ModelConfig& cfg :
       {linear_config(), greenshields_config(2, 1.2, 0.9),
        greenshields_config(3)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const double rho = rho_dist(rng);
      const GpcVector probe = constant_modes(n, rho);

      const double f_eq_prime = equilibrium_scalar(rho, cfg) +
                                rho * equilibrium_prime_scalar(rho, cfg);
      const GpcVector lambda_eq = equilibrium_speeds(basis, probe, cfg);
      CHECK((lambda_eq - GpcVector::Constant(n, f_eq_prime)).cwiseAbs().maxCoeff() <=
            1e-13);

      const double mu_scalar =
          -rho * rho * equilibrium_prime_scalar(rho, cfg) *
          (equilibrium_prime_scalar(rho, cfg) + hesitation_prime_scalar(rho, cfg));
      const Eigen::MatrixXd mu = diffusion_coefficient(basis, probe, cfg);
      CHECK((mu - mu_scalar * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <=
            1e-13);
    }
  }
}
