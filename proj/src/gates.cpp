#include "ctap/gates.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ctap/errors.hpp"
#include "ctap/hamiltonian.hpp"

namespace ctap {

namespace {

constexpr double kPi = 3.14159265358979323846;

// A gate (or network) must start with the bus and auxiliary modes empty;
// tolerate the small population a preceding adiabatic gate leaves behind.
constexpr double kProtocolResidueTol = 1e-2;

double occupied_population(const Eigen::VectorXcd& state,
                           const FockBasis& basis, int mode) {
  double population = 0.0;
  for (int k = 0; k < basis.size(); ++k) {
    population += basis.states[k][mode] * std::norm(state(k));
  }
  return population;
}

}  // namespace

Eigen::Matrix2d gate_matrix(double alpha, int sign) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("gate_matrix: alpha must be > 0");
  }
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("gate_matrix: sign must be +1 or -1");
  }
  const double denom = 1.0 + alpha * alpha;
  const double diag = (alpha * alpha - 1.0) / denom;
  const double off = -2.0 * alpha / denom * sign;
  Eigen::Matrix2d g;
  g << diag, off, off, -diag;
  return g;
}

double alpha_for_reflectivity(double r) {
  if (!(r >= 0.0) || r >= 1.0) {
    throw std::invalid_argument(
        "alpha_for_reflectivity: r must lie in [0, 1)");
  }
  return std::tan(std::acos(std::sqrt(r)) / 2.0);
}

void validate_gate(const GateSpec& gate, int mode_count) {
  if (!(gate.alpha > 0.0)) {
    throw std::invalid_argument("GateSpec: alpha must be > 0");
  }
  if (gate.sign != 1 && gate.sign != -1) {
    throw std::invalid_argument("GateSpec: sign must be +1 or -1");
  }
  if (!(gate.z_max > 0.0)) {
    throw std::invalid_argument("GateSpec: z_max must be > 0");
  }
  const int indices[4] = {gate.mode_a, gate.mode_b, gate.aux_mode,
                          gate.bus_mode};
  for (int idx : indices) {
    if (idx < 0 || idx >= mode_count) {
      throw std::invalid_argument("GateSpec: mode index " +
                                  std::to_string(idx) + " outside 0.." +
                                  std::to_string(mode_count - 1));
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (indices[i] == indices[j]) {
        throw std::invalid_argument(
            "GateSpec: qubit, auxiliary and bus modes must be distinct");
      }
    }
  }
}

CouplingSchedule embedded_gate_schedule(const GateSpec& gate, int mode_count,
                                        const SlabParams& slab) {
  validate_gate(gate, mode_count);
  const double omega_max = slab.omega_max;
  const double z_max = gate.z_max;
  const double alpha = gate.alpha;
  const double sign = gate.sign;
  CouplingSchedule schedule;
  schedule.z_max = z_max;
  schedule.omega_funcs.resize(mode_count - 1, [](double) { return 0.0; });
  schedule.omega_funcs[gate.mode_a - 1] = [omega_max, z_max](double z) {
    return omega_max * std::sin(kPi * z / z_max);
  };
  schedule.omega_funcs[gate.mode_b - 1] = [omega_max, z_max, alpha,
                                           sign](double z) {
    return sign * alpha * omega_max * std::sin(kPi * z / z_max);
  };
  schedule.omega_funcs[gate.aux_mode - 1] = [omega_max, z_max](double z) {
    return omega_max * std::cos(kPi * z / z_max);
  };
  return schedule;
}

EvolutionTrace run_gate_trace(const Eigen::VectorXcd& state,
                              const GateSpec& gate, const FockBasis& basis,
                              const SlabParams& slab,
                              const IntegratorConfig& config) {
  validate_gate(gate, basis.mode_count);
  if (gate.mode_a == 0 || gate.mode_b == 0 || gate.aux_mode == 0 ||
      gate.bus_mode != 0) {
    throw std::invalid_argument(
        "run_gate: mode 0 is the bus; qubit and auxiliary modes must be "
        "waveguides");
  }
  const double bus_population = occupied_population(state, basis, gate.bus_mode);
  const double aux_population = occupied_population(state, basis, gate.aux_mode);
  if (bus_population > kProtocolResidueTol || aux_population > kProtocolResidueTol) {
    throw ProtocolViolation(
        "run_gate: bus/auxiliary modes must start empty (bus population " +
        std::to_string(bus_population) + ", aux population " +
        std::to_string(aux_population) + ")");
  }
  HamiltonianModel model =
      make_model(basis, embedded_gate_schedule(gate, basis.mode_count, slab));
  return evolve(model, state, config);
}

Eigen::VectorXcd run_gate(const Eigen::VectorXcd& state, const GateSpec& gate,
                          const FockBasis& basis, const SlabParams& slab,
                          const IntegratorConfig& config) {
  return run_gate_trace(state, gate, basis, slab, config).amplitudes.back();
}

void validate_network(const CircuitNetwork& network) {
  if (network.mode_count < 4) {
    throw std::invalid_argument(
        "CircuitNetwork: need at least bus, two qubit modes and an auxiliary "
        "mode");
  }
  if (network.gates.empty()) {
    return;  // an empty network is legal (identity)
  }
  const int bus = network.gates.front().bus_mode;
  const int aux = network.gates.front().aux_mode;
  for (const GateSpec& gate : network.gates) {
    validate_gate(gate, network.mode_count);
    if (gate.bus_mode != bus || gate.aux_mode != aux) {
      throw std::invalid_argument(
          "CircuitNetwork: all gates must share one bus and one auxiliary "
          "mode (gates run strictly sequentially)");
    }
  }
}

NetworkRunResult run_network(const FockState& input,
                             const CircuitNetwork& network,
                             const SlabParams& slab,
                             const IntegratorConfig& config) {
  validate_network(network);
  if (static_cast<int>(input.size()) != network.mode_count) {
    throw std::invalid_argument("run_network: input state has wrong length");
  }
  int total_photons = 0;
  for (int n : input) total_photons += n;
  if (!network.gates.empty()) {
    const int bus = network.gates.front().bus_mode;
    const int aux = network.gates.front().aux_mode;
    if (input[bus] != 0 || input[aux] != 0) {
      throw ProtocolViolation(
          "run_network: input must have zero photons in bus and auxiliary "
          "modes");
    }
  }

  NetworkRunResult result;
  result.basis = enumerate_basis(network.mode_count, total_photons);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(result.basis.size());
  psi(result.basis.index_of(input)) = 1.0;

  double z_offset = 0.0;
  double accumulated_drift = 0.0;
  result.trace.max_population.assign(result.basis.size(), 0.0);
  for (const GateSpec& gate : network.gates) {
    EvolutionTrace part = run_gate_trace(psi, gate, result.basis, slab, config);
    psi = part.amplitudes.back();
    // Renormalise between gates: per-gate integrator roundoff would
    // otherwise accumulate across the chain and trip the next gate's
    // input-norm validation.  The drift itself is still reported below.
    accumulated_drift += std::abs(psi.norm() - 1.0);
    psi.normalize();
    // Stitch the per-gate trace onto the cumulative one.
    for (std::size_t s = 0; s < part.z_grid.size(); ++s) {
      result.trace.z_grid.push_back(z_offset + part.z_grid[s]);
      result.trace.amplitudes.push_back(part.amplitudes[s]);
      result.trace.norms.push_back(part.norms[s]);
      result.trace.bus_population.push_back(part.bus_population[s]);
    }
    result.trace.max_bus_population =
        std::max(result.trace.max_bus_population, part.max_bus_population);
    for (int k = 0; k < result.basis.size(); ++k) {
      result.trace.max_population[k] =
          std::max(result.trace.max_population[k], part.max_population[k]);
    }
    z_offset += gate.z_max;
  }
  if (network.gates.empty()) {
    result.trace.z_grid.push_back(0.0);
    result.trace.amplitudes.push_back(psi);
    result.trace.norms.push_back(1.0);
    result.trace.bus_population.push_back(0.0);
  }
  result.trace.final_norm_drift = accumulated_drift;
  result.final_state = psi;
  return result;
}

Outcome classify_outcome(const FockState& input, const FockState& outcome,
                         const std::map<std::string, int>& roles) {
  const char* needed[] = {"c1", "c0", "t1", "t0"};
  for (const char* key : needed) {
    if (roles.find(key) == roles.end()) {
      throw std::invalid_argument(
          std::string("classify_outcome: role map is missing '") + key + "'");
    }
  }
  const int c1 = roles.at("c1"), c0 = roles.at("c0");
  const int t1 = roles.at("t1"), t0 = roles.at("t0");

  auto is_logical = [&](const FockState& s, int& control_bit, int& target_bit) {
    int total = 0;
    for (int n : s) total += n;
    if (total != 2) return false;
    const bool control_one = s[c1] == 1, control_zero = s[c0] == 1;
    const bool target_one = s[t1] == 1, target_zero = s[t0] == 1;
    if (control_one == control_zero || target_one == target_zero) return false;
    control_bit = control_one ? 1 : 0;
    target_bit = target_one ? 1 : 0;
    // The two photons must sit exactly on the identified modes.
    return s[control_one ? c1 : c0] + s[target_one ? t1 : t0] == 2;
  };

  int control = 0, target = 0;
  if (!is_logical(input, control, target)) {
    throw std::invalid_argument(
        "classify_outcome: input is not a logical coincidence-basis state");
  }
  FockState expected(input.size(), 0);
  expected[control ? c1 : c0] = 1;
  const int flipped = control ? (1 - target) : target;
  expected[flipped ? t1 : t0] = 1;
  return outcome == expected ? Outcome::success : Outcome::failure;
}

CircuitNetwork cnot_default_network(double z_max_per_gate) {
  // Pairings and signs fixed by exhaustive search against the
  // permanent-lifted analytic composition (see tests): this choice
  // reproduces the coincidence-basis truth table exactly.
  CircuitNetwork network;
  network.mode_count = 8;
  network.roles = {{"c1", 2}, {"c0", 3}, {"t1", 4}, {"t0", 5}};
  const double half = alpha_for_reflectivity(0.5);
  const double third = alpha_for_reflectivity(1.0 / 3.0);
  auto gate = [&](double alpha, int a, int b) {
    GateSpec g;
    g.alpha = alpha;
    g.sign = +1;
    g.mode_a = a;
    g.mode_b = b;
    g.aux_mode = 7;
    g.bus_mode = 0;
    g.z_max = z_max_per_gate;
    return g;
  };
  network.gates = {gate(half, 4, 5), gate(third, 1, 2), gate(third, 3, 4),
                   gate(third, 5, 6), gate(half, 4, 5)};
  return network;
}

namespace {

// Reflectivity r for a given alpha: the diagonal of gate_matrix squared.
double reflectivity_for_alpha(double alpha) {
  const double diag = (1.0 - alpha * alpha) / (1.0 + alpha * alpha);
  return diag * diag;
}

}  // namespace

CircuitNetwork parse_network_config(const std::string& text) {
  CircuitNetwork network;
  network.mode_count = 0;
  int bus_mode = 0, aux_mode = -1;
  std::vector<std::array<double, 5>> raw_gates;  // ratio sign a b zmax
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;  // blank line
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("network config line " +
                                  std::to_string(line_number) + ": " + why);
    };
    if (key == "mode_count") {
      if (!(fields >> network.mode_count)) fail("expected integer mode count");
    } else if (key == "bus_mode") {
      if (!(fields >> bus_mode)) fail("expected integer bus mode");
    } else if (key == "aux_mode") {
      if (!(fields >> aux_mode)) fail("expected integer auxiliary mode");
    } else if (key == "role") {
      std::string name;
      int mode;
      if (!(fields >> name >> mode)) fail("expected 'role NAME MODE'");
      network.roles[name] = mode;
    } else if (key == "gate") {
      std::array<double, 5> g{};
      if (!(fields >> g[0] >> g[1] >> g[2] >> g[3] >> g[4])) {
        fail("expected 'gate RATIO SIGN MODE_A MODE_B Z_MAX'");
      }
      raw_gates.push_back(g);
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (network.mode_count <= 0) {
    throw std::invalid_argument("network config: missing mode_count");
  }
  if (aux_mode < 0) {
    throw std::invalid_argument("network config: missing aux_mode");
  }
  for (const auto& g : raw_gates) {
    GateSpec gate;
    gate.alpha = alpha_for_reflectivity(g[0]);
    gate.sign = static_cast<int>(g[1]);
    gate.mode_a = static_cast<int>(g[2]);
    gate.mode_b = static_cast<int>(g[3]);
    gate.z_max = g[4];
    gate.aux_mode = aux_mode;
    gate.bus_mode = bus_mode;
    network.gates.push_back(gate);
  }
  validate_network(network);
  return network;
}

CircuitNetwork load_network_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("cannot read network config file: " + path);
  }
  std::ostringstream text;
  text << file.rdbuf();
  return parse_network_config(text.str());
}

std::string network_config_text(const CircuitNetwork& network) {
  std::ostringstream out;
  out << "# coincidence-basis gate network\n";
  out << "mode_count " << network.mode_count << "\n";
  if (!network.gates.empty()) {
    out << "bus_mode " << network.gates.front().bus_mode << "\n";
    out << "aux_mode " << network.gates.front().aux_mode << "\n";
  }
  for (const auto& [name, mode] : network.roles) {
    out << "role " << name << " " << mode << "\n";
  }
  char buffer[128];
  for (const GateSpec& gate : network.gates) {
    std::snprintf(buffer, sizeof(buffer), "gate %.17g %+d %d %d %.17g\n",
                  reflectivity_for_alpha(gate.alpha), gate.sign, gate.mode_a,
                  gate.mode_b, gate.z_max);
    out << buffer;
  }
  return out.str();
}

}  // namespace ctap
