#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "ctap/coupling.hpp"
#include "ctap/fock.hpp"
#include "ctap/propagator.hpp"

namespace ctap {

/// One double-passage adiabatic gate: the photon amplitude on `mode_a` and
/// `mode_b` is mixed by the reflection gate_matrix(alpha, sign), routed
/// through the auxiliary mode via the bus.
struct GateSpec {
  double alpha = 1.0;  ///< coupling ratio Omega_2/Omega_1, > 0
  int sign = +1;       ///< +1/-1, realised by the standing-wave period of mode_b
  int mode_a = 1;      ///< first qubit mode
  int mode_b = 2;      ///< second qubit mode
  int aux_mode = 3;    ///< auxiliary mode carrying the intermediate transfer
  int bus_mode = 0;    ///< shared bus
  double z_max = 300.0;
};

/// Gates applied strictly one after another, sharing one bus and one
/// auxiliary mode; modes not named by the active gate stay fully decoupled.
struct CircuitNetwork {
  int mode_count = 8;
  std::vector<GateSpec> gates;
  /// Role labels for truth-table classification; requires keys
  /// "c1", "c0", "t1", "t0" for classify_outcome.
  std::map<std::string, int> roles;
};

enum class Outcome { success, failure };

/// Closed-form endpoint matrix of a double adiabatic passage on the qubit
/// pair:  1/(1+a^2) * [[a^2-1, -2a], [-2a, 1-a^2]], with `sign` multiplying
/// the off-diagonal.  Symmetric, orthogonal, det = -1 and G^2 = identity (a
/// reflection).  Throws std::invalid_argument for alpha <= 0 or sign not +-1.
Eigen::Matrix2d gate_matrix(double alpha, int sign = +1);

/// Coupling ratio producing diagonal magnitude sqrt(r), where r in [0,1) is
/// the probability of remaining in the input mode:
/// alpha = tan(acos(sqrt(r))/2).  r = 0 gives alpha = 1 (full swap),
/// r = 1/2 the 50:50 value, r = 1/3 the 1/3:2/3 value.
/// Throws std::invalid_argument for r outside [0,1).
double alpha_for_reflectivity(double r);

/// Throws std::invalid_argument if the gate's mode indices collide, leave
/// [0, mode_count), or alpha/z_max/sign are invalid.
void validate_gate(const GateSpec& gate, int mode_count);

/// The gate's coupling schedule embedded in a mode_count-mode device:
/// mode_a ramps as sin(pi z/z_max), mode_b as sign*alpha times that, the
/// auxiliary mode as cos(pi z/z_max); all other waveguides stay decoupled.
CouplingSchedule embedded_gate_schedule(const GateSpec& gate, int mode_count,
                                        const SlabParams& slab);

/// Propagate `state` (over `basis`) through one full gate, returning the
/// whole trace.  Throws ProtocolViolation if the state starts with more than
/// 1% population in the bus or auxiliary mode (the protocol requires them
/// empty; small adiabatic residue from earlier gates is tolerated).
EvolutionTrace run_gate_trace(const Eigen::VectorXcd& state,
                              const GateSpec& gate, const FockBasis& basis,
                              const SlabParams& slab,
                              const IntegratorConfig& config);

/// Endpoint-only variant of run_gate_trace.
Eigen::VectorXcd run_gate(const Eigen::VectorXcd& state, const GateSpec& gate,
                          const FockBasis& basis, const SlabParams& slab,
                          const IntegratorConfig& config);

struct NetworkRunResult {
  FockBasis basis;               ///< sector basis the amplitudes live in
  Eigen::VectorXcd final_state;  ///< after the last gate
  EvolutionTrace trace;          ///< stitched across gates; z accumulates
};

/// Validate a network: every gate well-formed, all sharing one bus and one
/// auxiliary mode (the sequential-scheduling contract).
void validate_network(const CircuitNetwork& network);

/// Run every gate in order on `input` (a basis state with empty bus/aux).
/// The state is renormalised between gates so integrator roundoff cannot
/// pile up across a chain; the trace's final_norm_drift reports the summed
/// per-gate drift.
NetworkRunResult run_network(const FockState& input,
                             const CircuitNetwork& network,
                             const SlabParams& slab,
                             const IntegratorConfig& config);

/// Truth-table designation of an outcome for a coincidence-basis CNOT:
/// success iff `outcome` is exactly the coincidence state the CNOT maps
/// `input` to (one photon among {c1,c0}, one among {t1,t0}, target flipped
/// when the control photon is in c1).  Everything else - bunched photons,
/// photons in vacuum/aux/bus modes, wrong coincidence state - is failure.
/// Throws std::invalid_argument if `input` is not a logical two-photon state
/// or the role map is incomplete.
Outcome classify_outcome(const FockState& input, const FockState& outcome,
                         const std::map<std::string, int>& roles);

/// The shipped coincidence-basis CNOT: bus 0, aux 7, roles c1=2, c0=3, t1=4,
/// t0=5, vacuum 1 and 6; gates 50:50 on (4,5), 1/3 on (1,2), 1/3 on (3,4),
/// 1/3 on (5,6), 50:50 on (4,5), all with sign +1.  Validated against the
/// permanent-lifted composition of the analytic gate matrices.
CircuitNetwork cnot_default_network(double z_max_per_gate = 300.0);

/// Parse a network from the plain-text key-value format (see README):
/// lines "mode_count N", "bus_mode N", "aux_mode N", "role NAME MODE" and
/// "gate RATIO SIGN MODE_A MODE_B Z_MAX"; '#' starts a comment.
/// Throws std::invalid_argument with the offending line on malformed input.
CircuitNetwork parse_network_config(const std::string& text);

/// Read and parse a network config file; throws std::runtime_error if the
/// file cannot be read.
CircuitNetwork load_network_config(const std::string& path);

/// Canonical text form of a network in the config format above.
std::string network_config_text(const CircuitNetwork& network);

}  // namespace ctap
