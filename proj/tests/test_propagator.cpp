#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ctap/coupling.hpp"
#include "ctap/errors.hpp"
#include "ctap/fock.hpp"
#include "ctap/hamiltonian.hpp"
#include "ctap/propagator.hpp"

using ctap::CouplingSchedule;
using ctap::EvolutionTrace;
using ctap::HamiltonianModel;
using ctap::IntegratorConfig;
using ctap::Method;
using ctap::SlabParams;

namespace {

const std::complex<double> kImag(0.0, 1.0);

// Two modes, constant unit coupling: the photon flops between the waveguide
// and the bus as psi(z) = cos(z)|wg> - i sin(z)|bus>.
HamiltonianModel flopping_model(double z_max) {
  CouplingSchedule schedule;
  schedule.z_max = z_max;
  schedule.omega_funcs = {[](double) { return 1.0; }};
  return ctap::make_model(ctap::enumerate_basis(2, 1), schedule);
}

Eigen::VectorXcd waveguide_start() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2);
  psi(1) = 1.0;
  return psi;
}

Eigen::VectorXcd flopping_solution(double z) {
  Eigen::VectorXcd psi(2);
  psi(0) = -kImag * std::sin(z);
  psi(1) = std::cos(z);
  return psi;
}

HamiltonianModel divider_model(double z_max) {
  return ctap::make_model(ctap::enumerate_basis(4, 1),
                          ctap::divider_schedule(z_max, SlabParams{}));
}

Eigen::VectorXcd divider_start() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(3) = 1.0;
  return psi;
}

}  // namespace

TEST_SUITE("propagator") {

TEST_CASE("both methods reproduce the constant-coupling flopping solution") {
  const double z_max = std::numbers::pi / 3.0;
  const HamiltonianModel model = flopping_model(z_max);
  const Eigen::VectorXcd expected = flopping_solution(z_max);

  for (const Method method : {Method::rk4, Method::expm}) {
    IntegratorConfig config;
    config.method = method;
    config.trace_samples = 1;
    const EvolutionTrace trace = ctap::evolve(model, waveguide_start(), config);
    CHECK((trace.amplitudes.back() - expected).norm() <= 1e-10);
  }
}

TEST_CASE("the exponential stepper is exact for a constant Hamiltonian") {
  // Any step size integrates a z-independent H exactly, up to the
  // eigensolver's precision.
  const HamiltonianModel model = flopping_model(7.0);
  IntegratorConfig config;
  config.method = Method::expm;
  config.step_count = 100;
  config.trace_samples = 1;
  const EvolutionTrace trace = ctap::evolve(model, waveguide_start(), config);
  CHECK((trace.amplitudes.back() - flopping_solution(7.0)).norm() <= 1e-12);
}

TEST_CASE("halving the step shrinks the rk4 error sixteenfold") {
  const double z_max = std::numbers::pi;
  const HamiltonianModel model = flopping_model(z_max);
  const Eigen::VectorXcd expected = flopping_solution(z_max);

  std::vector<double> errors;
  for (const int steps : {200, 400, 800}) {
    IntegratorConfig config;
    config.step_count = steps;
    config.trace_samples = 1;
    const EvolutionTrace trace = ctap::evolve(model, waveguide_start(), config);
    errors.push_back((trace.amplitudes.back() - expected).norm());
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double ratio = errors[i - 1] / errors[i];
    CHECK(ratio >= 14.0);
    CHECK(ratio <= 18.0);
  }
}

TEST_CASE("the two integration methods agree on an adiabatic transfer") {
  const HamiltonianModel model = divider_model(50.0);
  IntegratorConfig config;
  config.trace_samples = 1;
  config.method = Method::rk4;
  const Eigen::VectorXcd by_rk4 =
      ctap::evolve(model, divider_start(), config).amplitudes.back();
  config.method = Method::expm;
  const Eigen::VectorXcd by_expm =
      ctap::evolve(model, divider_start(), config).amplitudes.back();
  CHECK((by_rk4 - by_expm).norm() <= 1e-6);
}

TEST_CASE("the norm is conserved to 1e-8 along the whole run") {
  const HamiltonianModel model = divider_model(50.0);
  IntegratorConfig config;
  config.trace_samples = 200;
  const EvolutionTrace trace = ctap::evolve(model, divider_start(), config);
  CHECK(trace.final_norm_drift <= 1e-8);
  for (const double norm : trace.norms) {
    CHECK(std::abs(norm - 1.0) <= 1e-8);
  }
}

TEST_CASE("the trace spans the device and stays consistent") {
  const double z_max = 20.0;
  const HamiltonianModel model = divider_model(z_max);
  IntegratorConfig config;
  config.trace_samples = 50;
  const EvolutionTrace trace = ctap::evolve(model, divider_start(), config);

  REQUIRE(!trace.z_grid.empty());
  CHECK(trace.z_grid.front() == 0.0);
  CHECK(trace.z_grid.back() == z_max);
  for (std::size_t s = 1; s < trace.z_grid.size(); ++s) {
    CHECK(trace.z_grid[s] > trace.z_grid[s - 1]);
  }
  CHECK(trace.amplitudes.size() == trace.z_grid.size());
  CHECK(trace.norms.size() == trace.z_grid.size());
  CHECK(trace.bus_population.size() == trace.z_grid.size());
  CHECK(static_cast<int>(trace.max_population.size()) == 4);

  // The recorded bus population is the expected photon number in mode 0.
  for (std::size_t s = 0; s < trace.z_grid.size(); ++s) {
    CHECK(trace.bus_population[s] ==
          doctest::Approx(std::norm(trace.amplitudes[s][0])).epsilon(1e-12));
    CHECK(trace.bus_population[s] <= trace.max_bus_population + 1e-15);
  }
  // Population maxima dominate the endpoint populations.
  const Eigen::VectorXd end_pops = trace.amplitudes.back().cwiseAbs2();
  for (int k = 0; k < 4; ++k) {
    CHECK(trace.max_population[k] + 1e-15 >= end_pops(k));
  }
}

TEST_CASE("a grossly oversized step aborts instead of drifting") {
  // 100 steps across z_max=300 puts the rk4 stability limit far behind:
  // the norm explodes and the run must stop, not return garbage.
  const HamiltonianModel model = divider_model(300.0);
  IntegratorConfig config;
  config.step_count = 100;
  config.trace_samples = 1;
  CHECK_THROWS_AS(ctap::evolve(model, divider_start(), config),
                  ctap::IntegrationFailure);
}

TEST_CASE("step counts below the floor are rejected") {
  IntegratorConfig config;
  config.step_count = 99;
  CHECK_THROWS_AS(ctap::resolve_step_count(config, 10.0),
                  std::invalid_argument);
  config.step_count = 0;
  CHECK(ctap::resolve_step_count(config, 10.0) == 4000);   // floor
  CHECK(ctap::resolve_step_count(config, 300.0) == 120000);  // 400 per unit
}

TEST_CASE("evolve validates its input state") {
  const HamiltonianModel model = flopping_model(1.0);
  IntegratorConfig config;
  CHECK_THROWS_AS(ctap::evolve(model, Eigen::VectorXcd::Zero(3), config),
                  std::invalid_argument);
  Eigen::VectorXcd unnormalised = Eigen::VectorXcd::Zero(2);
  unnormalised(0) = 0.5;
  CHECK_THROWS_AS(ctap::evolve(model, unnormalised, config),
                  std::invalid_argument);
  config.trace_samples = 0;
  CHECK_THROWS_AS(ctap::evolve(model, waveguide_start(), config),
                  std::invalid_argument);
}

TEST_CASE("the endpoint map is unitary and matches column evolutions") {
  const HamiltonianModel model = divider_model(20.0);
  IntegratorConfig config;
  const Eigen::MatrixXcd map = ctap::endpoint_map(model, config);

  const Eigen::MatrixXcd gram = map.adjoint() * map;
  CHECK((gram - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <=
        1e-8);

  IntegratorConfig column_config = config;
  column_config.trace_samples = 1;
  for (int col = 0; col < 4; ++col) {
    Eigen::VectorXcd start = Eigen::VectorXcd::Zero(4);
    start(col) = 1.0;
    const Eigen::VectorXcd end =
        ctap::evolve(model, start, column_config).amplitudes.back();
    CHECK((map.col(col) - end).norm() == 0.0);  // same code path, same bits
  }
}

TEST_CASE("an adiabatic run stays inside the instantaneous null space") {
  const HamiltonianModel model = divider_model(100.0);
  IntegratorConfig config;
  config.trace_samples = 40;
  const EvolutionTrace trace = ctap::evolve(model, divider_start(), config);
  const ctap::AdiabaticityReport report =
      ctap::adiabaticity_report(trace, model);
  CHECK(report.max_bus_population == trace.max_bus_population);
  CHECK(report.max_nonnull_overlap <= 1e-2);
  CHECK(report.end_leakage <= 1e-3);
  CHECK(report.end_leakage <= report.max_nonnull_overlap + 1e-15);
}

}  // TEST_SUITE
