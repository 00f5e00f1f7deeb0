#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ctap/hamiltonian.hpp"

namespace ctap {

/// Integration method for i d|psi>/dz = H(z) |psi> (z plays the role of
/// time, hbar = 1).
enum class Method {
  rk4,   ///< fixed-step classical Runge-Kutta, 4th order
  expm,  ///< piecewise-constant-H exact exponential at interval midpoints
};

struct IntegratorConfig {
  Method method = Method::rk4;
  /// Number of integration steps; 0 selects the default density of 400 steps
  /// per unit z (and never fewer than 4000), which keeps the two methods
  /// within 1e-6 of each other.  Explicit values below 100 are rejected.
  int step_count = 0;
  /// Number of rows recorded in the trace (the endpoint is always included).
  int trace_samples = 1000;
  /// Norm drift beyond this aborts the run with IntegrationFailure.
  double norm_tolerance = 1e-6;
};

/// Steps actually used for a device of length z_max under `config`.
int resolve_step_count(const IntegratorConfig& config, double z_max);

/// Amplitudes and diagnostics sampled along the device.  The per-sample
/// arrays follow z_grid; the max_* diagnostics are tracked at every
/// integration step, not just at the recorded samples.
struct EvolutionTrace {
  std::vector<double> z_grid;
  std::vector<Eigen::VectorXcd> amplitudes;
  std::vector<double> norms;
  std::vector<double> bus_population;  ///< expected photons in mode 0
  double max_bus_population = 0.0;     ///< over every integration step
  std::vector<double> max_population;  ///< per basis state, every step
  double final_norm_drift = 0.0;       ///< | ||psi(z_max)|| - 1 |
};

/// Integrate from psi0 (normalised, basis-sized) across the full device.
/// Throws std::invalid_argument on dimension/norm violations and
/// IntegrationFailure when the norm drifts beyond config.norm_tolerance.
EvolutionTrace evolve(const HamiltonianModel& model,
                      const Eigen::VectorXcd& psi0,
                      const IntegratorConfig& config);

/// Effective evolution operator over the sector: column k is the endpoint of
/// evolving basis state k.  Columns are computed independently and in order,
/// with no shared mutable state, so the result equals any parallel
/// evaluation.  Unitary within 1e-8 at default resolution.
Eigen::MatrixXcd endpoint_map(const HamiltonianModel& model,
                              const IntegratorConfig& config);

/// Summary of how adiabatic a run was.
struct AdiabaticityReport {
  /// Max expected bus photons over every integration step.
  double max_bus_population = 0.0;
  /// Max population outside the instantaneous null space (eigenvalues below
  /// 1e-10 in magnitude count as null), over the recorded samples.
  double max_nonnull_overlap = 0.0;
  /// End-state population outside the null space of H(z_max).
  double end_leakage = 0.0;
};

AdiabaticityReport adiabaticity_report(const EvolutionTrace& trace,
                                       const HamiltonianModel& model);

}  // namespace ctap
