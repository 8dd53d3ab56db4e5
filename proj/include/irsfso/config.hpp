#pragma once

#include "irsfso/irs.hpp"
#include "irsfso/protocols.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace irsfso {

struct PairConfig {
    double ls_d_m = 1000.0;
    double ls_theta_rad = M_PI / 3.0;
    double ls_phi_rad = 0.0;
    double pd_d_m = 3000.0;
    double pd_theta_rad = M_PI / 3.0;
    double pd_phi_rad = M_PI;
    double alpha = 2.0;
    double beta = 2.0;
};

// Full scenario description, loadable from a flat key = value file. Every key
// carries its unit in its name; all fields here are converted to SI.
struct ScenarioConfig {
    double wavelength_m = 1550e-9;
    double waist_m = 0.25e-3;
    double peak_field_v_per_m = 60e3;
    double bandwidth_hz = 1e9;
    double noise_psd_w_per_hz = 3.9810717055349565e-21;  // -174 dBm/Hz
    double kappa_db_per_m = 0.43e-3;
    double lens_radius_m = 0.15;
    double irs_lx_m = 1.0;
    double irs_ly_m = 0.5;
    int tiles_x = 2;
    int tiles_y = 1;
    double tile_spacing_m = 0.0;
    double zeta0 = 1.0;
    int num_pairs = 2;
    std::vector<PairConfig> pairs = {PairConfig{},
                                     PairConfig{1000.0, M_PI / 4.0, 0.0, 3000.0,
                                                M_PI / 6.0, M_PI, 2.0, 2.0}};
    ProtocolKind protocol = ProtocolKind::kIrsd;
    ProfileKind profile = ProfileKind::kLinear;
    int misalign_pair = 1;          // 1-based, matching the key names
    double misalign_x_m = 0.0;
    double misalign_y_m = 0.0;
    std::string sweep_variable = "none";  // none|d_p|theta_p1|snr_db|r_e|rate
    double sweep_start = 0.0;
    double sweep_stop = 0.0;
    int sweep_steps = 1;
    uint64_t mc_trials = 1000000;
    uint64_t mc_seed = 1;
    int mc_workers = 0;
    double rate_bit_s = 1.7e9;
    int lens_quad_order = 120;
    int field_map_points = 9;
    bool regime_checks = true;  // strict|off
    std::string oracle = "none";  // none|separable1d|exact2d

    double noise_power_w() const { return noise_psd_w_per_hz * bandwidth_hz; }
    BeamParams beam() const;
    IrsLayout layout() const;
    // Per-pair nominal links (before the protocol installs footprint/lens
    // centers).
    std::vector<LinkGeometry> links() const;
};

// Parses the flat key = value format ('#' comments). Unknown keys, malformed
// values, and inconsistent scenarios all throw std::runtime_error naming the
// offending key; an empty file yields the defaults above.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text);

// Serializes every key (canonical order); parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);
void save_config(const ScenarioConfig& cfg, const std::string& path);

}  // namespace irsfso
