#include "ctap/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ctap/errors.hpp"

namespace ctap {

HamiltonianModel make_model(FockBasis basis, CouplingSchedule schedule,
                            std::vector<double> detunings) {
  const int modes = basis.mode_count;
  if (schedule.waveguide_count() != modes - 1) {
    throw std::invalid_argument(
        "make_model: schedule must cover exactly mode_count-1 waveguides "
        "(got " + std::to_string(schedule.waveguide_count()) + " for " +
        std::to_string(modes) + " modes)");
  }
  if (detunings.empty()) {
    detunings.assign(modes, 0.0);
  } else if (static_cast<int>(detunings.size()) != modes) {
    throw std::invalid_argument(
        "make_model: detunings must have one entry per mode");
  }
  HamiltonianModel model;
  model.basis = std::move(basis);
  model.schedule = std::move(schedule);
  model.detunings = std::move(detunings);
  return model;
}

Eigen::MatrixXd assemble(const HamiltonianModel& model, double z) {
  const double z_max = model.schedule.z_max;
  const double slack = 1e-9 * std::max(1.0, z_max);
  if (z < -slack || z > z_max + slack) {
    throw std::out_of_range("assemble: z = " + std::to_string(z) +
                            " outside device [0, " + std::to_string(z_max) +
                            "]");
  }
  const FockBasis& basis = model.basis;
  const int dim = basis.size();
  const int modes = basis.mode_count;
  Eigen::MatrixXd hop = Eigen::MatrixXd::Zero(dim, dim);
  // Build only the a0† a_i half; mirroring the transpose supplies a_i† a0 and
  // makes the result exactly symmetric.
  for (int col = 0; col < dim; ++col) {
    const FockState& state = basis.states[col];
    for (int wg = 1; wg < modes; ++wg) {
      const double omega = model.schedule.omega(wg, z);
      if (omega == 0.0) continue;
      auto hopped = apply_hopping(state, model.bus_index, wg);
      if (!hopped) continue;
      hop(basis.index_of(hopped->first), col) += omega * hopped->second;
    }
  }
  Eigen::MatrixXd h = hop + hop.transpose();
  for (int k = 0; k < dim; ++k) {
    double diag = 0.0;
    for (int m = 0; m < modes; ++m) {
      diag += model.detunings[m] * basis.states[k][m];
    }
    h(k, k) += diag;
  }
  return h;
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> dark_bright_one_photon(
    double omega1, double omega2) {
  const double norm = std::hypot(omega1, omega2);
  if (norm == 0.0) {
    throw std::invalid_argument(
        "dark_bright_one_photon: both couplings are zero");
  }
  Eigen::Vector2d dark(omega2 / norm, -omega1 / norm);
  Eigen::Vector2d bright(omega1 / norm, omega2 / norm);
  return {dark, bright};
}

std::array<Eigen::VectorXd, 4> two_photon_null_vectors(double omega1,
                                                       double omega2,
                                                       double omega3) {
  if (omega1 == 0.0 || omega2 == 0.0 || omega3 == 0.0) {
    throw SingularFormula(
        "two_photon_null_vectors: couplings appear in denominators; use a "
        "numeric null space when any coupling is zero");
  }
  const double w1 = omega1, w2 = omega2, w3 = omega3;
  const double s2 = std::sqrt(2.0);
  // Index layout of enumerate_basis(4, 2), lexicographically descending:
  //  0:|2000>  1:|1100>  2:|1010>  3:|1001>  4:|0200>
  //  5:|0110>  6:|0101>  7:|0020>  8:|0011>  9:|0002>
  constexpr int k2000 = 0, k0200 = 4, k0110 = 5, k0101 = 6, k0020 = 7,
                k0011 = 8, k0002 = 9;
  std::array<Eigen::VectorXd, 4> vectors;
  for (auto& v : vectors) v = Eigen::VectorXd::Zero(10);

  vectors[0](k0011) = -(-w1 * w1 + w2 * w2 + w3 * w3) / (s2 * w2 * w3);
  vectors[0](k0101) = -(w1 * w1 - w2 * w2 + w3 * w3) / (s2 * w1 * w3);
  vectors[0](k0110) = -(w1 * w1 + w2 * w2 - w3 * w3) / (s2 * w1 * w2);
  vectors[0](k2000) = 1.0;

  vectors[1](k0011) = w1 * w1 / (s2 * w2 * w3);
  vectors[1](k0101) = -w1 / (s2 * w3);
  vectors[1](k0110) = -w1 / (s2 * w2);
  vectors[1](k0200) = 1.0;

  vectors[2](k0011) = -w2 / (s2 * w3);
  vectors[2](k0101) = w2 * w2 / (s2 * w1 * w3);
  vectors[2](k0110) = -w2 / (s2 * w1);
  vectors[2](k0020) = 1.0;

  vectors[3](k0011) = -w3 / (s2 * w2);
  vectors[3](k0101) = -w3 / (s2 * w1);
  vectors[3](k0110) = w3 * w3 / (s2 * w1 * w2);
  vectors[3](k0002) = 1.0;

  return vectors;
}

}  // namespace ctap
