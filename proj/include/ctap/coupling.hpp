#pragma once

#include <functional>
#include <vector>

namespace ctap {

/// Parameters of the shared slab (bus) mode: the transverse standing-wave
/// wavenumber and the peak waveguide-bus coupling rate.
struct SlabParams {
  double beta0 = 1.0;      ///< radians per unit lateral length, > 0
  double omega_max = 1.0;  ///< radians per unit propagation length, > 0
};

/// Lateral position of one waveguide sampled along the device.
struct WaveguidePath {
  std::vector<double> z;
  std::vector<double> x;
};

/// Per-waveguide signed coupling strengths Omega_i(z), evaluable at any z in
/// [0, z_max].  Entry i of `omega_funcs` drives mode i+1 of the Hamiltonian
/// (the bus, mode 0, has no self-coupling entry).
struct CouplingSchedule {
  double z_max = 0.0;
  std::vector<std::function<double(double)>> omega_funcs;

  int waveguide_count() const { return static_cast<int>(omega_funcs.size()); }

  /// Coupling of waveguide `wg` (1-based mode index, 1..waveguide_count()).
  double omega(int wg, double z) const;

  /// All couplings at once, in waveguide order.
  std::vector<double> at(double z) const;
};

/// Coupling induced at lateral position x: omega_max * sin(beta0 * x).
/// The sign alternates between standing-wave periods.
double coupling_from_position(double x, const SlabParams& slab);

/// Inverse of coupling_from_position within a chosen standing-wave period:
/// x = (period*pi + (-1)^period * asin(target/omega_max)) / beta0.
/// Any integer period is valid; even and odd periods realise the two sign
/// orientations of the sine.  Throws UnreachableCouplingError when
/// |target| > omega_max.
double position_for_coupling(double target, const SlabParams& slab,
                             int period = 0);

/// Counter-intuitive power-divider schedule over waveguides 1..3:
/// Omega_1 = Omega_2 = omega_max*cos(pi*z/(2*z_max)),
/// Omega_3 = omega_max*sin(pi*z/(2*z_max)).
/// Satisfies Omega_1^2 + Omega_3^2 = omega_max^2 for all z (constant
/// adiabaticity).  Throws std::invalid_argument for z_max <= 0.
CouplingSchedule divider_schedule(double z_max, const SlabParams& slab);

/// Double-passage gate schedule over waveguides 1..3:
/// Omega_1 = omega_max*sin(pi*z/z_max), Omega_2 = alpha*Omega_1,
/// Omega_3 = omega_max*cos(pi*z/z_max).
/// Omega_3 crosses zero exactly once, at z_max/2; the ratio Omega_2/Omega_1
/// stays equal to alpha wherever Omega_1 is nonzero.  A sign-reversed second
/// waveguide is realised at gate level (see gates), not here.
/// Throws std::invalid_argument for alpha <= 0 or z_max <= 0.
CouplingSchedule usb_gate_schedule(double alpha, double z_max,
                                   const SlabParams& slab);

/// Realise a schedule as continuous lateral paths x_i(z).  Each waveguide
/// lives in its own pair of standing-wave periods (home period 2*(i-1)) so
/// the paths do not overlap; sign flips cross into the adjacent period
/// through a node, keeping x continuous.  The induced coupling
/// coupling_from_position(x_i(z)) reproduces the schedule exactly at every
/// sample.  `samples` is the number of sample points (>= 2).
/// Throws UnreachableCouplingError if the schedule exceeds omega_max.
std::vector<WaveguidePath> schedule_to_paths(const CouplingSchedule& schedule,
                                             const SlabParams& slab,
                                             int samples = 1001);

}  // namespace ctap
