#include "ctap/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctap/gates.hpp"

namespace ctap {

std::complex<double> permanent(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("permanent: matrix must be square");
  }
  const int n = static_cast<int>(matrix.rows());
  if (n == 0) {
    return 1.0;  // empty product convention
  }
  if (n > 8) {
    throw std::invalid_argument("permanent: capped at 8x8");
  }
  // Ryser: Per(A) = (-1)^n * sum over column subsets S of
  //   (-1)^|S| * prod_i (sum_{j in S} a_ij).
  std::complex<double> total = 0.0;
  const unsigned subsets = 1u << n;
  for (unsigned s = 1; s < subsets; ++s) {
    std::complex<double> product = 1.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> row_sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (s & (1u << j)) row_sum += matrix(i, j);
      }
      product *= row_sum;
    }
    const int parity = __builtin_popcount(s) % 2 == 0 ? 1 : -1;
    total += static_cast<double>(parity) * product;
  }
  const int sign = n % 2 == 0 ? 1 : -1;
  return static_cast<double>(sign) * total;
}

namespace {

double factorial(int n) {
  double result = 1.0;
  for (int k = 2; k <= n; ++k) result *= k;
  return result;
}

void require_unitary(const Eigen::MatrixXcd& u, const char* where) {
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  const double residual =
      (gram - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (residual > 1e-10) {
    throw std::invalid_argument(std::string(where) +
                                ": input matrix is not unitary (residual " +
                                std::to_string(residual) + ")");
  }
}

}  // namespace

Eigen::MatrixXcd lift_unitary(const Eigen::MatrixXcd& mode_unitary,
                              int total_photons) {
  if (mode_unitary.rows() != mode_unitary.cols()) {
    throw std::invalid_argument("lift_unitary: matrix must be square");
  }
  require_unitary(mode_unitary, "lift_unitary");
  const int modes = static_cast<int>(mode_unitary.rows());
  const FockBasis basis = enumerate_basis(modes, total_photons);
  const int dim = basis.size();

  // Row/column mode lists with multiplicity, e.g. (0,2,0,1) -> {1,1,3}.
  auto expand = [](const FockState& state) {
    std::vector<int> modes_list;
    for (int m = 0; m < static_cast<int>(state.size()); ++m) {
      for (int c = 0; c < state[m]; ++c) modes_list.push_back(m);
    }
    return modes_list;
  };
  std::vector<std::vector<int>> expanded(dim);
  std::vector<double> norm_factor(dim);
  for (int k = 0; k < dim; ++k) {
    expanded[k] = expand(basis.states[k]);
    double f = 1.0;
    for (int n : basis.states[k]) f *= factorial(n);
    norm_factor[k] = std::sqrt(f);
  }

  Eigen::MatrixXcd lifted(dim, dim);
  Eigen::MatrixXcd sub(total_photons, total_photons);
  for (int col = 0; col < dim; ++col) {
    for (int row = 0; row < dim; ++row) {
      for (int i = 0; i < total_photons; ++i) {
        for (int j = 0; j < total_photons; ++j) {
          sub(i, j) = mode_unitary(expanded[row][i], expanded[col][j]);
        }
      }
      lifted(row, col) = permanent(sub) / (norm_factor[row] * norm_factor[col]);
    }
  }
  return lifted;
}

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  if (std::abs(a.norm() - 1.0) > 1e-10 || std::abs(b.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("fidelity: states must be normalised");
  }
  return std::norm(a.dot(b));
}

Eigen::MatrixXcd embed_mode_gate(const Eigen::Matrix2d& g, int mode_count,
                                 int mode_a, int mode_b) {
  if (mode_a < 0 || mode_a >= mode_count || mode_b < 0 ||
      mode_b >= mode_count || mode_a == mode_b) {
    throw std::invalid_argument("embed_mode_gate: bad mode pair");
  }
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(mode_count, mode_count);
  u(mode_a, mode_a) = g(0, 0);
  u(mode_a, mode_b) = g(0, 1);
  u(mode_b, mode_a) = g(1, 0);
  u(mode_b, mode_b) = g(1, 1);
  return u;
}

Eigen::MatrixXcd network_mode_unitary(const CircuitNetwork& network) {
  validate_network(network);
  Eigen::MatrixXcd u =
      Eigen::MatrixXcd::Identity(network.mode_count, network.mode_count);
  for (const GateSpec& gate : network.gates) {
    u = embed_mode_gate(gate_matrix(gate.alpha, gate.sign), network.mode_count,
                        gate.mode_a, gate.mode_b) *
        u;
  }
  return u;
}

}  // namespace ctap
