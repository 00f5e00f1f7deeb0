// ctapgate: verification runs for adiabatic bus-coupled waveguide gates.
// Each subcommand simulates one experiment, checks it against its analytic
// prediction, prints the report, and exits 0 (all checks pass), 1 (a check
// failed) or 2 (bad usage / runtime error).

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ctap/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Simulator and verification suite for adiabatic light transfer between "
      "waveguides coupled through a shared bus mode"};
  app.require_subcommand(1);

  ctap::ExperimentConfig config;
  std::string method = "rk4";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", config.out_dir,
                    "Directory for CSV and report output (created if missing; "
                    "omit to write nothing)");
    sub->add_option("--zmax", config.z_max,
                    "Device length per passage (default 300)");
    sub->add_option("--steps", config.integrator.step_count,
                    "Integration steps (default: 400 per unit length, "
                    "at least 4000)");
    sub->add_option("--method", method, "Integrator: rk4 or expm")
        ->check(CLI::IsMember({"rk4", "expm"}));
    sub->add_flag("--amplitudes", config.dump_amplitudes,
                  "Add re_/im_ amplitude columns to trace CSVs");
  };

  CLI::App* divider =
      app.add_subcommand("divider",
                         "One photon entering waveguide 3 splits 50:50 into "
                         "waveguides 1 and 2 via the bus");
  add_common(divider);
  divider->add_option("--detuning", config.bus_detuning,
                      "Bus mode detuning (spoils adiabatic transfer)");

  CLI::App* gate = app.add_subcommand(
      "gate", "One double-passage gate; checks endpoint populations and the "
              "one- and two-photon maps against the analytic reflection");
  add_common(gate);
  gate->add_option("--ratio", config.ratio,
                   "Reflectivity r in [0,1): probability of staying in the "
                   "input waveguide (default 0.5)");
  gate->add_option("--input-mode", config.input_mode,
                   "Waveguide the photon starts in: 1 or 2 (default 1)");

  CLI::App* hom = app.add_subcommand(
      "hom", "Two-photon interference at a 50:50 gate: coincidences vanish "
             "and the bunched amplitudes differ by a phase of pi");
  add_common(hom);

  CLI::App* cnot = app.add_subcommand(
      "cnot", "Coincidence-basis CNOT truth table over the four logical "
              "two-photon inputs (success probability 1/9 each)");
  add_common(cnot);
  cnot->add_option("--config", config.network_config,
                   "Network description file (default: built-in network)")
      ->check(CLI::ExistingFile);
  cnot->add_flag("--oracle-only", config.oracle_only,
                 "Skip the integration; emit the analytic prediction only");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Transport infidelity versus device length; must fall "
               "monotonically, crossover below 1e-3 reported");
  add_common(sweep);
  sweep->add_option("--ratio", config.ratio,
                    "Sweep a gate at this reflectivity instead of the "
                    "divider");
  sweep
      ->add_option("--lengths", config.lengths,
                   "Comma-separated device lengths (default "
                   "5,10,20,50,100)")
      ->delimiter(',');

  CLI::App* nullcheck = app.add_subcommand(
      "nullcheck", "Randomised audit of the closed-form two-photon null "
                   "vectors of the four-mode device");
  nullcheck->add_option("--out", config.out_dir,
                        "Directory for report output");
  nullcheck->add_option("--trials", config.trials,
                        "Random coupling draws (default 100)");

  CLI::App* geometry = app.add_subcommand(
      "geometry", "Lay a coupling schedule out as waveguide paths and check "
                  "the induced coupling round-trips");
  geometry->add_option("--out", config.out_dir,
                       "Directory for CSV and report output");
  geometry->add_option("--zmax", config.z_max,
                       "Device length (default 300)");
  geometry->add_option("--ratio", config.ratio,
                       "Lay out a gate at this reflectivity instead of the "
                       "divider");
  geometry->add_option("--samples", config.samples,
                       "Points along the device (default 1001)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  config.integrator.method =
      method == "expm" ? ctap::Method::expm : ctap::Method::rk4;

  ctap::ComparisonReport report;
  try {
    if (divider->parsed()) {
      report = ctap::cmd_divider(config);
    } else if (gate->parsed()) {
      report = ctap::cmd_gate(config);
    } else if (hom->parsed()) {
      report = ctap::cmd_hom(config);
    } else if (cnot->parsed()) {
      report = ctap::cmd_cnot(config);
    } else if (sweep->parsed()) {
      report = ctap::cmd_sweep(config);
    } else if (nullcheck->parsed()) {
      report = ctap::cmd_nullcheck(config);
    } else if (geometry->parsed()) {
      report = ctap::cmd_geometry(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::cout << report.text();
  return report.verdict() ? 0 : 1;
}
