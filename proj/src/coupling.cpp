#include "ctap/coupling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ctap/errors.hpp"

namespace ctap {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_slab(const SlabParams& slab) {
  if (!(slab.beta0 > 0.0) || !(slab.omega_max > 0.0)) {
    throw std::invalid_argument("SlabParams: beta0 and omega_max must be > 0");
  }
}

}  // namespace

double CouplingSchedule::omega(int wg, double z) const {
  if (wg < 1 || wg > waveguide_count()) {
    throw std::out_of_range("CouplingSchedule: waveguide index out of range");
  }
  return omega_funcs[wg - 1](z);
}

std::vector<double> CouplingSchedule::at(double z) const {
  std::vector<double> values(omega_funcs.size());
  for (std::size_t i = 0; i < omega_funcs.size(); ++i) {
    values[i] = omega_funcs[i](z);
  }
  return values;
}

double coupling_from_position(double x, const SlabParams& slab) {
  validate_slab(slab);
  return slab.omega_max * std::sin(slab.beta0 * x);
}

double position_for_coupling(double target, const SlabParams& slab,
                             int period) {
  validate_slab(slab);
  if (std::abs(target) > slab.omega_max) {
    throw UnreachableCouplingError(
        "position_for_coupling: |target| = " + std::to_string(std::abs(target)) +
        " exceeds omega_max = " + std::to_string(slab.omega_max));
  }
  const double theta = std::asin(target / slab.omega_max);
  const double parity = (period % 2 == 0) ? 1.0 : -1.0;
  return (period * kPi + parity * theta) / slab.beta0;
}

CouplingSchedule divider_schedule(double z_max, const SlabParams& slab) {
  validate_slab(slab);
  if (!(z_max > 0.0)) {
    throw std::invalid_argument("divider_schedule: z_max must be > 0");
  }
  const double omega_max = slab.omega_max;
  CouplingSchedule schedule;
  schedule.z_max = z_max;
  auto falling = [omega_max, z_max](double z) {
    return omega_max * std::cos(kPi * z / (2.0 * z_max));
  };
  auto rising = [omega_max, z_max](double z) {
    return omega_max * std::sin(kPi * z / (2.0 * z_max));
  };
  schedule.omega_funcs = {falling, falling, rising};
  return schedule;
}

CouplingSchedule usb_gate_schedule(double alpha, double z_max,
                                   const SlabParams& slab) {
  validate_slab(slab);
  if (!(alpha > 0.0)) {
    throw std::invalid_argument(
        "usb_gate_schedule: alpha must be > 0 (a reversed coupling sign is a "
        "gate-level flag, not a negative alpha)");
  }
  if (!(z_max > 0.0)) {
    throw std::invalid_argument("usb_gate_schedule: z_max must be > 0");
  }
  const double omega_max = slab.omega_max;
  CouplingSchedule schedule;
  schedule.z_max = z_max;
  auto first = [omega_max, z_max](double z) {
    return omega_max * std::sin(kPi * z / z_max);
  };
  auto second = [omega_max, z_max, alpha](double z) {
    return alpha * omega_max * std::sin(kPi * z / z_max);
  };
  auto third = [omega_max, z_max](double z) {
    return omega_max * std::cos(kPi * z / z_max);
  };
  schedule.omega_funcs = {first, second, third};
  return schedule;
}

std::vector<WaveguidePath> schedule_to_paths(const CouplingSchedule& schedule,
                                             const SlabParams& slab,
                                             int samples) {
  validate_slab(slab);
  if (samples < 2) {
    throw std::invalid_argument("schedule_to_paths: need at least 2 samples");
  }
  const int waveguides = schedule.waveguide_count();
  std::vector<WaveguidePath> paths(waveguides);
  const double dz = schedule.z_max / (samples - 1);
  for (int w = 0; w < waveguides; ++w) {
    // Home period 2*w keeps the sine orientation positive and gives each
    // waveguide its own lateral lane; asin covers the signed coupling range
    // continuously, crossing a node exactly when the coupling changes sign.
    const int home_period = 2 * w;
    paths[w].z.resize(samples);
    paths[w].x.resize(samples);
    for (int k = 0; k < samples; ++k) {
      const double z = (k == samples - 1) ? schedule.z_max : k * dz;
      const double omega = schedule.omega_funcs[w](z);
      paths[w].z[k] = z;
      paths[w].x[k] = position_for_coupling(omega, slab, home_period);
    }
  }
  return paths;
}

}  // namespace ctap
