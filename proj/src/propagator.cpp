#include "ctap/propagator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ctap/errors.hpp"

namespace ctap {

namespace {

constexpr double kNullEigenvalueTol = 1e-10;

// H(z) is linear in the couplings, so precompute one hopping-pattern matrix
// per waveguide and a detuning diagonal; every evaluation is then a small
// linear combination instead of a fresh walk over the basis.
struct AssemblyCache {
  std::vector<Eigen::MatrixXd> patterns;  // per waveguide 1..M-1
  Eigen::VectorXd diagonal;
  const CouplingSchedule* schedule = nullptr;

  void eval(double z, Eigen::MatrixXd& h) const {
    h.setZero();
    for (std::size_t w = 0; w < patterns.size(); ++w) {
      const double omega = schedule->omega_funcs[w](z);
      if (omega != 0.0) {
        h.noalias() += omega * patterns[w];
      }
    }
    h.diagonal() += diagonal;
  }
};

AssemblyCache build_cache(const HamiltonianModel& model) {
  const FockBasis& basis = model.basis;
  const int dim = basis.size();
  const int modes = basis.mode_count;
  AssemblyCache cache;
  cache.schedule = &model.schedule;
  cache.patterns.reserve(modes - 1);
  for (int wg = 1; wg < modes; ++wg) {
    Eigen::MatrixXd half = Eigen::MatrixXd::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
      auto hopped = apply_hopping(basis.states[col], model.bus_index, wg);
      if (hopped) {
        half(basis.index_of(hopped->first), col) += hopped->second;
      }
    }
    cache.patterns.emplace_back(half + half.transpose());
  }
  cache.diagonal = Eigen::VectorXd::Zero(dim);
  for (int k = 0; k < dim; ++k) {
    for (int m = 0; m < modes; ++m) {
      cache.diagonal(k) += model.detunings[m] * basis.states[k][m];
    }
  }
  return cache;
}

// Right-hand side of the propagation equation: -i H psi, computed with real
// matvecs (H is real symmetric): -i H (a + i b) = (H b) - i (H a).
void schrodinger_rhs(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi,
                     Eigen::VectorXcd& out) {
  const Eigen::VectorXd ha = h * psi.real();
  const Eigen::VectorXd hb = h * psi.imag();
  out.real() = hb;
  out.imag() = -ha;
}

// One exact step under the midpoint Hamiltonian: psi <- V e^{-i L h} V^T psi,
// done entirely with real matvecs since V is real orthogonal.
void expm_step(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eigen,
               double h, Eigen::VectorXcd& psi) {
  const Eigen::MatrixXd& v = eigen.eigenvectors();
  const Eigen::VectorXd theta = eigen.eigenvalues() * h;
  const Eigen::VectorXd cos_t = theta.array().cos();
  const Eigen::VectorXd sin_t = theta.array().sin();
  const Eigen::VectorXd cr = v.transpose() * psi.real();
  const Eigen::VectorXd ci = v.transpose() * psi.imag();
  // (cr + i ci) * (cos - i sin), elementwise over eigenmodes.
  const Eigen::VectorXd re = cr.cwiseProduct(cos_t) + ci.cwiseProduct(sin_t);
  const Eigen::VectorXd im = ci.cwiseProduct(cos_t) - cr.cwiseProduct(sin_t);
  psi.real() = v * re;
  psi.imag() = v * im;
}

}  // namespace

int resolve_step_count(const IntegratorConfig& config, double z_max) {
  if (config.step_count == 0) {
    const int by_density = static_cast<int>(std::ceil(400.0 * z_max));
    return std::max(4000, by_density);
  }
  if (config.step_count < 100) {
    throw std::invalid_argument("IntegratorConfig: step_count must be >= 100");
  }
  return config.step_count;
}

EvolutionTrace evolve(const HamiltonianModel& model,
                      const Eigen::VectorXcd& psi0,
                      const IntegratorConfig& config) {
  const FockBasis& basis = model.basis;
  const int dim = basis.size();
  if (psi0.size() != dim) {
    throw std::invalid_argument(
        "evolve: state dimension " + std::to_string(psi0.size()) +
        " does not match basis size " + std::to_string(dim));
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("evolve: initial state must be normalised");
  }
  if (config.trace_samples < 1) {
    throw std::invalid_argument("evolve: trace_samples must be >= 1");
  }

  const int steps = resolve_step_count(config, model.schedule.z_max);
  const double h = model.schedule.z_max / steps;
  const int stride = std::max(1, steps / config.trace_samples);
  const AssemblyCache cache = build_cache(model);

  // Expected bus photons of each basis state, for the population diagnostic.
  Eigen::VectorXd bus_photons(dim);
  for (int k = 0; k < dim; ++k) {
    bus_photons(k) = basis.states[k][model.bus_index];
  }

  EvolutionTrace trace;
  trace.max_population.assign(dim, 0.0);
  Eigen::VectorXcd psi = psi0;

  auto record = [&](double z) {
    trace.z_grid.push_back(z);
    trace.amplitudes.push_back(psi);
    trace.norms.push_back(psi.norm());
    trace.bus_population.push_back(bus_photons.dot(psi.cwiseAbs2()));
  };
  auto track_maxima = [&]() {
    const Eigen::VectorXd pops = psi.cwiseAbs2();
    trace.max_bus_population =
        std::max(trace.max_bus_population, bus_photons.dot(pops));
    for (int k = 0; k < dim; ++k) {
      trace.max_population[k] = std::max(trace.max_population[k], pops(k));
    }
  };

  track_maxima();
  record(0.0);

  Eigen::MatrixXd ham(dim, dim), ham_mid(dim, dim), ham_end(dim, dim);
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), stage(dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen;

  for (int step = 0; step < steps; ++step) {
    const double z = step * h;
    const double z_next = (step + 1 == steps) ? model.schedule.z_max : z + h;
    if (config.method == Method::rk4) {
      cache.eval(z, ham);
      cache.eval(z + 0.5 * h, ham_mid);
      cache.eval(z_next, ham_end);
      schrodinger_rhs(ham, psi, k1);
      stage = psi + (0.5 * h) * k1;
      schrodinger_rhs(ham_mid, stage, k2);
      stage = psi + (0.5 * h) * k2;
      schrodinger_rhs(ham_mid, stage, k3);
      stage = psi + h * k3;
      schrodinger_rhs(ham_end, stage, k4);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      cache.eval(z + 0.5 * h, ham_mid);
      eigen.compute(ham_mid);
      expm_step(eigen, h, psi);
    }

    const double drift = std::abs(psi.norm() - 1.0);
    if (drift > config.norm_tolerance) {
      throw IntegrationFailure(
          "evolve: norm drift " + std::to_string(drift) + " at z = " +
          std::to_string(z_next) + " exceeds tolerance " +
          std::to_string(config.norm_tolerance) +
          "; increase step_count (smaller steps)");
    }

    track_maxima();
    if ((step + 1) % stride == 0 && step + 1 != steps) {
      record(z_next);
    }
  }
  record(model.schedule.z_max);
  trace.final_norm_drift = std::abs(trace.norms.back() - 1.0);
  return trace;
}

Eigen::MatrixXcd endpoint_map(const HamiltonianModel& model,
                              const IntegratorConfig& config) {
  const int dim = model.basis.size();
  IntegratorConfig column_config = config;
  column_config.trace_samples = 1;  // endpoints only; no trace retention
  Eigen::MatrixXcd map(dim, dim);
  for (int col = 0; col < dim; ++col) {
    Eigen::VectorXcd basis_state = Eigen::VectorXcd::Zero(dim);
    basis_state(col) = 1.0;
    map.col(col) = evolve(model, basis_state, column_config).amplitudes.back();
  }
  return map;
}

AdiabaticityReport adiabaticity_report(const EvolutionTrace& trace,
                                       const HamiltonianModel& model) {
  AdiabaticityReport report;
  report.max_bus_population = trace.max_bus_population;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen;
  for (std::size_t s = 0; s < trace.z_grid.size(); ++s) {
    eigen.compute(assemble(model, trace.z_grid[s]));
    const Eigen::MatrixXd& v = eigen.eigenvectors();
    const Eigen::VectorXd& lambda = eigen.eigenvalues();
    double outside_null = 0.0;
    for (int k = 0; k < lambda.size(); ++k) {
      if (std::abs(lambda(k)) > kNullEigenvalueTol) {
        const std::complex<double> overlap =
            v.col(k).cast<std::complex<double>>().dot(trace.amplitudes[s]);
        outside_null += std::norm(overlap);
      }
    }
    report.max_nonnull_overlap = std::max(report.max_nonnull_overlap, outside_null);
    if (s + 1 == trace.z_grid.size()) {
      report.end_leakage = outside_null;
    }
  }
  return report;
}

}  // namespace ctap
