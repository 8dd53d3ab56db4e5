#include "irsfso/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace irsfso {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_num(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::runtime_error("config: invalid number for key '" + key + "': " + v);
    }
}

long to_int(const std::string& key, const std::string& v) {
    const double x = to_num(key, v);
    if (x != std::floor(x))
        throw std::runtime_error("config: key '" + key + "' wants an integer");
    return static_cast<long>(x);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

BeamParams ScenarioConfig::beam() const {
    BeamParams b;
    b.wavelength = wavelength_m;
    b.waist = waist_m;
    b.peak_field = peak_field_v_per_m;
    return b;
}

IrsLayout ScenarioConfig::layout() const {
    return build_layout(irs_lx_m, irs_ly_m, tiles_x, tiles_y, tile_spacing_m,
                        tile_spacing_m);
}

std::vector<LinkGeometry> ScenarioConfig::links() const {
    std::vector<LinkGeometry> out;
    out.reserve(pairs.size());
    for (const PairConfig& p : pairs) {
        LinkGeometry l;
        l.ls = OrientedNode{p.ls_d_m, p.ls_theta_rad, p.ls_phi_rad};
        l.pd = OrientedNode{p.pd_d_m, p.pd_theta_rad, p.pd_phi_rad};
        l.lens_radius = lens_radius_m;
        out.push_back(l);
    }
    return out;
}

ScenarioConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     " has an empty key or value");
        if (kv.count(key))
            throw std::runtime_error("config: duplicate key '" + key + "'");
        kv[key] = val;
    }

    ScenarioConfig cfg;
    const auto take = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::string();
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    const auto num = [&](const char* key, double dflt, double scale) {
        const std::string v = take(key);
        return v.empty() ? dflt : to_num(key, v) * scale;
    };
    const auto integer = [&](const char* key, long dflt) {
        const std::string v = take(key);
        return v.empty() ? dflt : to_int(key, v);
    };

    cfg.wavelength_m = num("wavelength_nm", cfg.wavelength_m / 1e-9, 1.0) * 1e-9;
    cfg.waist_m = num("beam_waist_mm", cfg.waist_m / 1e-3, 1.0) * 1e-3;
    cfg.peak_field_v_per_m =
        num("peak_field_kv_per_m", cfg.peak_field_v_per_m / 1e3, 1.0) * 1e3;
    cfg.bandwidth_hz = num("bandwidth_ghz", cfg.bandwidth_hz / 1e9, 1.0) * 1e9;
    {
        const std::string v = take("noise_psd_dbm_per_hz");
        if (!v.empty())
            cfg.noise_psd_w_per_hz =
                std::pow(10.0, to_num("noise_psd_dbm_per_hz", v) / 10.0) * 1e-3;
    }
    cfg.kappa_db_per_m = num("kappa_db_per_m", cfg.kappa_db_per_m, 1.0);
    cfg.lens_radius_m = num("lens_radius_cm", cfg.lens_radius_m / 1e-2, 1.0) * 1e-2;
    cfg.irs_lx_m = num("irs_length_x_m", cfg.irs_lx_m, 1.0);
    cfg.irs_ly_m = num("irs_length_y_m", cfg.irs_ly_m, 1.0);
    cfg.tiles_x = static_cast<int>(integer("tiles_x", cfg.tiles_x));
    cfg.tiles_y = static_cast<int>(integer("tiles_y", cfg.tiles_y));
    cfg.tile_spacing_m =
        num("tile_spacing_mm", cfg.tile_spacing_m / 1e-3, 1.0) * 1e-3;
    cfg.zeta0 = num("zeta0", cfg.zeta0, 1.0);
    cfg.num_pairs = static_cast<int>(integer("num_pairs", cfg.num_pairs));
    if (cfg.num_pairs < 1 || cfg.num_pairs > 4)
        throw std::runtime_error("config: num_pairs must be between 1 and 4");

    cfg.pairs.resize(cfg.num_pairs);
    if (cfg.num_pairs >= 2 && cfg.pairs.size() >= 2) {
        // Table-style second pair default survives resize from the default ctor
        // only when num_pairs <= 2; re-seed it explicitly.
        cfg.pairs[1] = PairConfig{1000.0, M_PI / 4.0, 0.0, 3000.0,
                                  M_PI / 6.0, M_PI, 2.0, 2.0};
    }
    for (int i = 0; i < cfg.num_pairs; ++i) {
        PairConfig& p = cfg.pairs[i];
        const std::string tag = "pair" + std::to_string(i + 1) + "_";
        const auto pk = [&](const char* suffix) { return tag + suffix; };
        const auto pnum = [&](const char* suffix, double dflt, double scale) {
            const std::string key = pk(suffix);
            auto it = kv.find(key);
            if (it == kv.end()) {
                if (i >= 2)
                    throw std::runtime_error("config: missing key '" + key +
                                             "' (no defaults beyond pair2)");
                return dflt;
            }
            const double v = to_num(key, it->second) * scale;
            kv.erase(it);
            return v;
        };
        p.ls_d_m = pnum("ls_distance_km", p.ls_d_m / 1e3, 1.0) * 1e3;
        p.ls_theta_rad = pnum("ls_theta_deg", p.ls_theta_rad / kDegToRad, 1.0) * kDegToRad;
        p.ls_phi_rad = pnum("ls_phi_deg", p.ls_phi_rad / kDegToRad, 1.0) * kDegToRad;
        p.pd_d_m = pnum("pd_distance_km", p.pd_d_m / 1e3, 1.0) * 1e3;
        p.pd_theta_rad = pnum("pd_theta_deg", p.pd_theta_rad / kDegToRad, 1.0) * kDegToRad;
        p.pd_phi_rad = pnum("pd_phi_deg", p.pd_phi_rad / kDegToRad, 1.0) * kDegToRad;
        p.alpha = pnum("alpha", p.alpha, 1.0);
        p.beta = pnum("beta", p.beta, 1.0);
        if (!(p.ls_d_m > 0.0) || !(p.pd_d_m > 0.0))
            throw std::runtime_error("config: " + tag + "distances must be positive");
        if (!(p.alpha > 0.0) || !(p.beta > 0.0))
            throw std::runtime_error("config: " + tag + "fading shapes must be positive");
    }

    {
        const std::string v = take("protocol");
        if (!v.empty()) {
            if (v == "td") cfg.protocol = ProtocolKind::kTd;
            else if (v == "irsd") cfg.protocol = ProtocolKind::kIrsd;
            else if (v == "irsh") cfg.protocol = ProtocolKind::kIrsh;
            else throw std::runtime_error("config: protocol must be td|irsd|irsh");
        }
    }
    {
        const std::string v = take("profile");
        if (!v.empty()) {
            if (v == "lp") cfg.profile = ProfileKind::kLinear;
            else if (v == "qp") cfg.profile = ProfileKind::kQuadratic;
            else throw std::runtime_error("config: profile must be lp|qp");
        }
    }
    cfg.misalign_pair = static_cast<int>(integer("misalign_pair", cfg.misalign_pair));
    cfg.misalign_x_m = num("misalign_x_cm", cfg.misalign_x_m / 1e-2, 1.0) * 1e-2;
    cfg.misalign_y_m = num("misalign_y_cm", cfg.misalign_y_m / 1e-2, 1.0) * 1e-2;
    if (cfg.misalign_pair < 1 || cfg.misalign_pair > cfg.num_pairs)
        throw std::runtime_error("config: misalign_pair out of range");

    {
        const std::string v = take("sweep_variable");
        if (!v.empty()) {
            if (v != "none" && v != "d_p" && v != "theta_p1" && v != "snr_db" &&
                v != "r_e" && v != "rate")
                throw std::runtime_error(
                    "config: sweep_variable must be one of "
                    "none|d_p|theta_p1|snr_db|r_e|rate");
            cfg.sweep_variable = v;
        }
    }
    cfg.sweep_start = num("sweep_start", cfg.sweep_start, 1.0);
    cfg.sweep_stop = num("sweep_stop", cfg.sweep_stop, 1.0);
    cfg.sweep_steps = static_cast<int>(integer("sweep_steps", cfg.sweep_steps));
    if (cfg.sweep_steps < 1)
        throw std::runtime_error("config: sweep_steps must be >= 1");

    {
        const long t = integer("mc_trials", static_cast<long>(cfg.mc_trials));
        if (t < 1) throw std::runtime_error("config: mc_trials must be >= 1");
        cfg.mc_trials = static_cast<uint64_t>(t);
    }
    cfg.mc_seed = static_cast<uint64_t>(integer("mc_seed", static_cast<long>(cfg.mc_seed)));
    cfg.mc_workers = static_cast<int>(integer("mc_workers", cfg.mc_workers));
    cfg.rate_bit_s = num("rate_gbps", cfg.rate_bit_s / 1e9, 1.0) * 1e9;
    cfg.lens_quad_order = static_cast<int>(integer("lens_quad_order", cfg.lens_quad_order));
    cfg.field_map_points = static_cast<int>(integer("field_map_points", cfg.field_map_points));
    if (cfg.lens_quad_order < 4)
        throw std::runtime_error("config: lens_quad_order must be >= 4");
    if (cfg.field_map_points < 2)
        throw std::runtime_error("config: field_map_points must be >= 2");

    {
        const std::string v = take("regime_checks");
        if (!v.empty()) {
            if (v == "strict") cfg.regime_checks = true;
            else if (v == "off") cfg.regime_checks = false;
            else throw std::runtime_error("config: regime_checks must be strict|off");
        }
    }
    {
        const std::string v = take("oracle");
        if (!v.empty()) {
            if (v != "none" && v != "separable1d" && v != "exact2d")
                throw std::runtime_error(
                    "config: oracle must be none|separable1d|exact2d");
            cfg.oracle = v;
        }
    }

    if (!(cfg.wavelength_m > 0.0) || !(cfg.waist_m > 0.0) ||
        !(cfg.peak_field_v_per_m > 0.0))
        throw std::runtime_error("config: beam parameters must be positive");
    if (!(cfg.bandwidth_hz > 0.0) || !(cfg.noise_psd_w_per_hz > 0.0))
        throw std::runtime_error("config: bandwidth and noise must be positive");
    if (!(cfg.lens_radius_m > 0.0))
        throw std::runtime_error("config: lens_radius_cm must be positive");
    if (!(cfg.zeta0 > 0.0) || cfg.zeta0 > 1.0)
        throw std::runtime_error("config: zeta0 must be in (0, 1]");
    if (!(cfg.rate_bit_s > 0.0))
        throw std::runtime_error("config: rate_gbps must be positive");

    if (!kv.empty())
        throw std::runtime_error("config: unknown key '" + kv.begin()->first + "'");
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream o;
    o << "# irsfso scenario configuration\n";
    o << "wavelength_nm = " << fmt(cfg.wavelength_m / 1e-9) << "\n";
    o << "beam_waist_mm = " << fmt(cfg.waist_m / 1e-3) << "\n";
    o << "peak_field_kv_per_m = " << fmt(cfg.peak_field_v_per_m / 1e3) << "\n";
    o << "bandwidth_ghz = " << fmt(cfg.bandwidth_hz / 1e9) << "\n";
    o << "noise_psd_dbm_per_hz = "
      << fmt(10.0 * std::log10(cfg.noise_psd_w_per_hz / 1e-3)) << "\n";
    o << "kappa_db_per_m = " << fmt(cfg.kappa_db_per_m) << "\n";
    o << "lens_radius_cm = " << fmt(cfg.lens_radius_m / 1e-2) << "\n";
    o << "irs_length_x_m = " << fmt(cfg.irs_lx_m) << "\n";
    o << "irs_length_y_m = " << fmt(cfg.irs_ly_m) << "\n";
    o << "tiles_x = " << cfg.tiles_x << "\n";
    o << "tiles_y = " << cfg.tiles_y << "\n";
    o << "tile_spacing_mm = " << fmt(cfg.tile_spacing_m / 1e-3) << "\n";
    o << "zeta0 = " << fmt(cfg.zeta0) << "\n";
    o << "num_pairs = " << cfg.num_pairs << "\n";
    for (int i = 0; i < cfg.num_pairs; ++i) {
        const PairConfig& p = cfg.pairs[i];
        const std::string tag = "pair" + std::to_string(i + 1) + "_";
        o << tag << "ls_distance_km = " << fmt(p.ls_d_m / 1e3) << "\n";
        o << tag << "ls_theta_deg = " << fmt(p.ls_theta_rad / kDegToRad) << "\n";
        o << tag << "ls_phi_deg = " << fmt(p.ls_phi_rad / kDegToRad) << "\n";
        o << tag << "pd_distance_km = " << fmt(p.pd_d_m / 1e3) << "\n";
        o << tag << "pd_theta_deg = " << fmt(p.pd_theta_rad / kDegToRad) << "\n";
        o << tag << "pd_phi_deg = " << fmt(p.pd_phi_rad / kDegToRad) << "\n";
        o << tag << "alpha = " << fmt(p.alpha) << "\n";
        o << tag << "beta = " << fmt(p.beta) << "\n";
    }
    o << "protocol = "
      << (cfg.protocol == ProtocolKind::kTd
              ? "td"
              : cfg.protocol == ProtocolKind::kIrsd ? "irsd" : "irsh")
      << "\n";
    o << "profile = " << (cfg.profile == ProfileKind::kLinear ? "lp" : "qp") << "\n";
    o << "misalign_pair = " << cfg.misalign_pair << "\n";
    o << "misalign_x_cm = " << fmt(cfg.misalign_x_m / 1e-2) << "\n";
    o << "misalign_y_cm = " << fmt(cfg.misalign_y_m / 1e-2) << "\n";
    o << "sweep_variable = " << cfg.sweep_variable << "\n";
    o << "sweep_start = " << fmt(cfg.sweep_start) << "\n";
    o << "sweep_stop = " << fmt(cfg.sweep_stop) << "\n";
    o << "sweep_steps = " << cfg.sweep_steps << "\n";
    o << "mc_trials = " << cfg.mc_trials << "\n";
    o << "mc_seed = " << cfg.mc_seed << "\n";
    o << "mc_workers = " << cfg.mc_workers << "\n";
    o << "rate_gbps = " << fmt(cfg.rate_bit_s / 1e9) << "\n";
    o << "lens_quad_order = " << cfg.lens_quad_order << "\n";
    o << "field_map_points = " << cfg.field_map_points << "\n";
    o << "regime_checks = " << (cfg.regime_checks ? "strict" : "off") << "\n";
    o << "oracle = " << cfg.oracle << "\n";
    return o.str();
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write '" + path + "'");
    out << serialize_config(cfg);
}

}  // namespace irsfso
