#pragma once

#include "irsfso/config.hpp"
#include "irsfso/csv.hpp"

#include <ostream>
#include <string>

namespace irsfso {

// Scenario engines behind the CLI subcommands. Each returns a CSV table with
// a versioned column contract; sweeps take their grid from the config (or a
// documented per-command default when sweep_variable = none) and label every
// row with the regime classification of the evaluated link, so marginal-zone
// points are visible rather than fatal.
CsvTable run_regimes(const ScenarioConfig& cfg);
CsvTable run_field_map(const ScenarioConfig& cfg);
CsvTable run_gml_sweep(const ScenarioConfig& cfg);
CsvTable run_interference(const ScenarioConfig& cfg);
CsvTable run_ber(const ScenarioConfig& cfg);
CsvTable run_outage(const ScenarioConfig& cfg);

// Dispatch by subcommand name ("regimes", "field-map", "gml-sweep",
// "interference", "ber", "outage").
CsvTable run_sweep(const ScenarioConfig& cfg, const std::string& subcommand);

// Self-check suites (regimes | fields | gml | perf | all). Prints one
// machine-readable line per check (check=… expected=… actual=… tol=…
// status=…) and returns the number of failures.
int run_validate(const ScenarioConfig& cfg, const std::string& suite,
                 std::ostream& report);

}  // namespace irsfso
