// irsfso — IRS-assisted free-space-optical link simulator.
//
// Subcommands evaluate one scenario aspect each and emit a versioned CSV
// (stdout or --out); `validate` runs the built-in analytic-vs-reference
// suites. Exit codes: 0 success, 1 validate-check failures, 2 bad usage,
// unreadable config, or a runtime failure (regime guard, diverged closed
// form, ...).

#include "irsfso/scenario.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_path;
    std::string protocol;
    std::string profile;
    std::string oracle;
    uint64_t trials = 0;
    uint64_t seed = 0;
    int workers = -1;
    bool has_trials = false, has_seed = false;
};

void add_common_options(CLI::App* cmd, CliOverrides& ov) {
    cmd->add_option("--config", ov.config_path,
                    "Scenario file (flat key = value; defaults used if omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", ov.out_path, "Write the CSV here instead of stdout");
    cmd->add_option("--trials", ov.trials, "Monte Carlo trials")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { ov.has_trials = true; });
    cmd->add_option("--seed", ov.seed, "Monte Carlo seed")
        ->each([&](const std::string&) { ov.has_seed = true; });
    cmd->add_option("--workers", ov.workers,
                    "Worker threads (0 = hardware concurrency)")
        ->check(CLI::Range(0, 256));
    cmd->add_option("--protocol", ov.protocol, "IRS sharing protocol")
        ->check(CLI::IsMember({"td", "irsd", "irsh"}));
    cmd->add_option("--profile", ov.profile, "Tile phase profile")
        ->check(CLI::IsMember({"lp", "qp"}));
    cmd->add_option("--oracle", ov.oracle, "Diffraction reference to run alongside")
        ->check(CLI::IsMember({"none", "separable1d", "exact2d"}));
}

irsfso::ScenarioConfig make_config(const CliOverrides& ov) {
    irsfso::ScenarioConfig cfg;
    if (!ov.config_path.empty()) cfg = irsfso::load_config(ov.config_path);
    if (ov.has_trials) cfg.mc_trials = ov.trials;
    if (ov.has_seed) cfg.mc_seed = ov.seed;
    if (ov.workers >= 0) cfg.mc_workers = ov.workers;
    if (!ov.protocol.empty())
        cfg.protocol = ov.protocol == "td"     ? irsfso::ProtocolKind::kTd
                       : ov.protocol == "irsd" ? irsfso::ProtocolKind::kIrsd
                                               : irsfso::ProtocolKind::kIrsh;
    if (!ov.profile.empty())
        cfg.profile = ov.profile == "lp" ? irsfso::ProfileKind::kLinear
                                         : irsfso::ProfileKind::kQuadratic;
    if (!ov.oracle.empty()) cfg.oracle = ov.oracle;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IRS-assisted FSO link simulator"};
    app.require_subcommand(1);

    CliOverrides ov;
    const char* sweep_cmds[] = {"regimes",      "field-map", "gml-sweep",
                                "interference", "ber",       "outage"};
    const char* sweep_help[] = {
        "Field-regime distances and labels per pair",
        "Lens-plane field of pair 1 on a grid (optionally vs an oracle)",
        "Deterministic gain vs IRS-detector distance, closed form vs quadrature",
        "Signal and interference gains/SNRs vs detector elevation",
        "Average bit error rate vs SNR (quadrature, Monte Carlo, series)",
        "Outage probability along the configured sweep"};
    for (int i = 0; i < 6; ++i)
        add_common_options(app.add_subcommand(sweep_cmds[i], sweep_help[i]), ov);

    std::string suite = "all";
    CLI::App* val = app.add_subcommand(
        "validate", "Run the analytic-vs-reference check suites");
    add_common_options(val, ov);
    val->add_option("--suite", suite, "Which suite to run")
        ->check(CLI::IsMember({"regimes", "fields", "gml", "perf", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const irsfso::ScenarioConfig cfg = make_config(ov);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "validate")
            return irsfso::run_validate(cfg, suite, std::cout) == 0 ? 0 : 1;
        const irsfso::CsvTable table = irsfso::run_sweep(cfg, sub);
        if (ov.out_path.empty())
            irsfso::write_csv(table, std::cout);
        else
            irsfso::write_csv_file(table, ov.out_path);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "irsfso: error: " << e.what() << "\n";
        return 2;
    }
}
