#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "ctap/coupling.hpp"
#include "ctap/fock.hpp"

namespace ctap {

/// Tight-binding model of M modes coupled star-wise through the bus (mode 0):
///   H(z) = sum_i delta_i n_i + sum_{i>=1} Omega_i(z) (a0† a_i + a_i† a0)
/// assembled over a fixed-photon-number Fock basis.  All couplings are real,
/// so H is real symmetric.
struct HamiltonianModel {
  FockBasis basis;
  CouplingSchedule schedule;       ///< one entry per mode 1..M-1
  std::vector<double> detunings;   ///< per-mode offsets delta_i, size M
  int bus_index = 0;

  int mode_count() const { return basis.mode_count; }
};

/// Build a model, defaulting the detunings to zero (degenerate modes).
/// Throws std::invalid_argument if the schedule does not cover exactly
/// mode_count-1 waveguides or the detuning vector has the wrong length.
HamiltonianModel make_model(FockBasis basis, CouplingSchedule schedule,
                            std::vector<double> detunings = {});

/// Assemble H(z) over the model's basis.  Exactly symmetric by construction
/// (the hopping part is built as A + A^T).  Throws std::out_of_range for z
/// outside [0, z_max] (with a small tolerance for roundoff at the ends).
Eigen::MatrixXd assemble(const HamiltonianModel& model, double z);

/// Dark/bright pair of the one-photon qubit span for couplings
/// (omega1, omega2):
///   |D> = (omega2|1> - omega1|2>) / r,  |B> = (omega1|1> + omega2|2>) / r,
/// r = sqrt(omega1^2 + omega2^2).  The dark state has zero matrix element to
/// the bus.  Throws std::invalid_argument when both couplings are zero.
std::pair<Eigen::Vector2d, Eigen::Vector2d> dark_bright_one_photon(
    double omega1, double omega2);

/// The four closed-form (unnormalised) null vectors of the two-photon,
/// four-mode Hamiltonian with zero detunings, in the order of
/// enumerate_basis(4, 2).  Each satisfies H v = 0 for the given couplings and
/// has no support on single-bus-photon states.  Throws SingularFormula if any
/// coupling is exactly zero (they appear in denominators); use a numeric null
/// space for schedule endpoints instead.
std::array<Eigen::VectorXd, 4> two_photon_null_vectors(double omega1,
                                                       double omega2,
                                                       double omega3);

}  // namespace ctap
