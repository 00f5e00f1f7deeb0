#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ctap/fock.hpp"
#include "ctap/gates.hpp"

namespace ctap {

/// Matrix permanent by Ryser's inclusion-exclusion (O(2^n n)).  The empty
/// matrix has permanent 1 by convention.  Throws std::invalid_argument for
/// non-square input or n > 8 (never needed here; keeps cost bounded).
std::complex<double> permanent(const Eigen::MatrixXcd& matrix);

/// Lift a mode-space unitary U (M x M) to the N-photon sector:
///   <n'|Phi(U)|n> = Per(U[n',n]) / sqrt(prod n_i! * prod n'_j!)
/// where U[n',n] repeats rows by the output occupations and columns by the
/// input occupations.  Rows/columns follow enumerate_basis(M, N).  The lift
/// is unitary and multiplicative: Phi(UV) = Phi(U)Phi(V); for N = 1 it is U
/// itself.  Throws std::invalid_argument if U is not unitary within 1e-10.
Eigen::MatrixXcd lift_unitary(const Eigen::MatrixXcd& mode_unitary,
                              int total_photons);

/// |<a|b>|^2 for normalised vectors; throws std::invalid_argument if either
/// norm deviates from 1 by more than 1e-10 (zero vectors included).
double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Identity on mode_count modes with the 2x2 block `g` on (mode_a, mode_b).
Eigen::MatrixXcd embed_mode_gate(const Eigen::Matrix2d& g, int mode_count,
                                 int mode_a, int mode_b);

/// Analytic mode-space unitary of a whole network: the product of each
/// gate's embedded gate_matrix, applied in network order.  This is the
/// reference the adiabatic simulation is validated against.
Eigen::MatrixXcd network_mode_unitary(const CircuitNetwork& network);

}  // namespace ctap
