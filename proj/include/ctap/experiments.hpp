#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctap/propagator.hpp"

namespace ctap {

/// Everything a verification run can be steered by.  Fields a given command
/// does not use are ignored by it; see each cmd_* for the fields it reads.
struct ExperimentConfig {
  double omega_max = 1.0;  ///< peak coupling rate, sets the rate scale
  /// Device length per adiabatic passage; 0 selects the calibrated default
  /// (300, about 95 coupling lengths), at which every shipped tolerance
  /// holds with margin.
  double z_max = 0.0;
  IntegratorConfig integrator;
  /// Directory for CSV/report output; empty means compute only, write
  /// nothing.  Created (recursively) if missing.
  std::string out_dir;
  /// Network description file for cmd_cnot; empty selects the built-in
  /// coincidence-basis CNOT.
  std::string network_config;
  double bus_detuning = 0.0;  ///< detuning of the bus mode (delta_0)
  /// cmd_cnot: skip the integration and emit the analytic prediction only.
  bool oracle_only = false;
  /// Reflectivity r in [0,1) of the gate under test (cmd_gate), or the
  /// sweep/geometry subject switch: unset means the power divider.
  std::optional<double> ratio;
  /// cmd_gate: waveguide the photon starts in (1 or 2); -1 picks 1.
  int input_mode = -1;
  /// Add re_/im_ amplitude columns to trace CSVs.
  bool dump_amplitudes = false;
  /// cmd_sweep: device lengths to compare; empty selects {5,10,20,50,100}.
  std::vector<double> lengths;
  int trials = 100;    ///< cmd_nullcheck: random coupling draws
  int samples = 1001;  ///< cmd_geometry: points along the device
};

/// One named numeric check: passes when |computed - expected| <= tolerance.
struct CheckRow {
  std::string name;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Outcome of one verification command: hard checks (rows) that decide the
/// verdict plus informational name/value notes that do not.
struct ComparisonReport {
  std::string title;
  std::vector<CheckRow> rows;
  std::vector<std::pair<std::string, std::string>> notes;

  void add_check(const std::string& name, double expected, double computed,
                 double tolerance);
  void add_note(const std::string& name, const std::string& value);
  void add_note(const std::string& name, double value);

  /// Row lookup by name; nullptr when absent.
  const CheckRow* find(const std::string& name) const;
  /// Computed value of the named row; throws std::out_of_range when absent.
  double value(const std::string& name) const;

  /// True when every row passes.
  bool verdict() const;

  /// Human-readable block: title, one line per row, notes, verdict line.
  std::string text() const;
  /// Machine-readable JSON with the same content.
  std::string json() const;
};

/// Power divider: one photon enters waveguide 3 and adiabatically splits
/// 50:50 into waveguides 1 and 2 with the bus never populated.
/// Writes trace.csv, report.txt, report.json.
ComparisonReport cmd_divider(const ExperimentConfig& config);

/// One double-passage gate at reflectivity `ratio` (default 1/2): checks the
/// endpoint populations, the one- and two-photon sector maps against the
/// analytic reflection matrix, and dark-state preservation.
/// Writes trace.csv, report.txt, report.json.
ComparisonReport cmd_gate(const ExperimentConfig& config);

/// Two-photon interference at a 50:50 gate: photons entering waveguides 1
/// and 2 bunch, the coincidence probability vanishes, and the two bunched
/// amplitudes acquire a relative phase of pi.
/// Writes trace.csv, report.txt, report.json.
ComparisonReport cmd_hom(const ExperimentConfig& config);

/// Coincidence-basis CNOT truth table over the four logical two-photon
/// inputs, simulated gate-by-gate and compared against the permanent
/// lift of the analytic network unitary (success probability 1/9 per
/// input).  Writes truth_table.csv, trace_<input>.csv, report.txt,
/// report.json.
ComparisonReport cmd_cnot(const ExperimentConfig& config);

/// Transport quality versus device length for the divider (default) or a
/// gate (--ratio): infidelity must fall monotonically with length, and the
/// first length below 1e-3 infidelity is reported in coupling lengths.
/// Writes sweep.csv, report.txt, report.json.
ComparisonReport cmd_sweep(const ExperimentConfig& config);

/// Randomised audit of the closed-form two-photon null vectors: for `trials`
/// coupling triples drawn from [0.1, 2.0], every vector must annihilate
/// under H to 1e-12, the four must stay linearly independent, and none may
/// touch a single-bus-photon state.  Writes report.txt, report.json.
ComparisonReport cmd_nullcheck(const ExperimentConfig& config);

/// Lay out the divider (default) or gate (--ratio) schedule as physical
/// waveguide paths and verify the induced coupling round-trips through the
/// position map to 1e-9.  Writes geometry.csv, schedule.csv, report.txt,
/// report.json.
ComparisonReport cmd_geometry(const ExperimentConfig& config);

}  // namespace ctap
