#include "irsfso/scenario.hpp"

#include "irsfso/channel.hpp"
#include "irsfso/performance.hpp"
#include "irsfso/protocols.hpp"
#include "irsfso/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <vector>

namespace irsfso {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / static_cast<double>(n - 1);
    return v;
}

struct SweepGrid {
    std::string variable;
    std::vector<double> values;
};

// The sweep grid for a subcommand: the config's sweep if set (and supported
// by the command), otherwise the command's documented default.
SweepGrid sweep_grid(const ScenarioConfig& cfg,
                     const std::vector<std::string>& supported,
                     const std::string& dflt_var, double a, double b, int n) {
    if (cfg.sweep_variable == "none")
        return SweepGrid{dflt_var, linspace(a, b, n)};
    for (const auto& s : supported)
        if (cfg.sweep_variable == s)
            return SweepGrid{cfg.sweep_variable,
                             linspace(cfg.sweep_start, cfg.sweep_stop,
                                      cfg.sweep_steps)};
    throw std::runtime_error("sweep_variable '" + cfg.sweep_variable +
                             "' is not supported by this subcommand");
}

ScenarioConfig at_sweep_point(const ScenarioConfig& cfg, const std::string& var,
                              double value) {
    ScenarioConfig c = cfg;
    if (var == "d_p") {
        c.pairs[0].pd_d_m = value * 1e3;  // km
    } else if (var == "theta_p1") {
        c.pairs[0].pd_theta_rad = value * kDegToRad;
    } else if (var == "r_e") {
        c.misalign_x_m = value * 1e-2;  // cm
        c.misalign_y_m = 0.0;
    } else if (var == "rate") {
        c.rate_bit_s = value * 1e9;  // Gbit/s
    }
    // snr_db does not change the scenario geometry; handled by the command.
    return c;
}

ProtocolAssignment make_assignment(const ScenarioConfig& cfg) {
    ProtocolAssignment a = build_assignment(cfg.protocol, cfg.links(), cfg.layout(),
                                            cfg.profile, cfg.beam(), cfg.zeta0);
    if (cfg.misalign_x_m != 0.0 || cfg.misalign_y_m != 0.0)
        a = apply_misalignment(a, cfg.misalign_pair - 1,
                               Vec3{cfg.misalign_x_m, cfg.misalign_y_m, 0.0});
    return a;
}

// Slot in which the given pair transmits (0 for the one-slot protocols).
int slot_of(const ProtocolAssignment& a, int pair) {
    for (size_t s = 0; s < a.slots.size(); ++s)
        for (int p : a.slots[s].active_pairs)
            if (p == pair) return static_cast<int>(s);
    throw std::logic_error("pair transmits in no slot");
}

std::string regime_label(const ScenarioConfig& cfg, const LinkGeometry& link,
                         double tile_lx, double tile_ly) {
    const IncidentBeamFrame frame = incident_frame(cfg.beam(), link.ls, link.r_l0);
    const RegimeReport rr =
        regime_distances(std::min(0.5 * tile_lx, frame.w_x),
                         std::min(0.5 * tile_ly, frame.w_y), cfg.wavelength_m);
    return regime_name(rr.classify(link.pd.d));
}

// Electrical SNR scale of a link: transmit power over noise, times the
// squared product of geometric gain and atmospheric loss.
double link_gamma(const ScenarioConfig& cfg, double gml, double d_l, double d_p) {
    const double hp = atmospheric_loss(d_l, d_p, cfg.kappa_db_per_m);
    const double ps = cfg.beam().power() / cfg.noise_power_w();
    return ps * (gml * hp) * (gml * hp);
}

double db10(double x) { return 10.0 * std::log10(x); }

const char* kNan = "nan";

}  // namespace

CsvTable run_regimes(const ScenarioConfig& cfg) {
    const SweepGrid grid = sweep_grid(cfg, {"d_p"}, "none", 0.0, 0.0, 1);
    CsvTable t;
    t.name = "regimes";
    t.columns = {"sweep_variable", "sweep_value", "pair",   "d_l_m", "d_p_m",
                 "w_x_m",          "w_y_m",       "x_e_m",  "y_e_m", "d_f_m",
                 "d_n_m",          "regime"};
    const IrsLayout lay = cfg.layout();
    for (double v : grid.values) {
        const ScenarioConfig c =
            grid.variable == "none" ? cfg : at_sweep_point(cfg, grid.variable, v);
        const auto links = c.links();
        for (int p = 0; p < c.num_pairs; ++p) {
            const IncidentBeamFrame frame =
                incident_frame(c.beam(), links[p].ls, links[p].r_l0);
            const double xe = std::min(0.5 * lay.tile_lx, frame.w_x);
            const double ye = std::min(0.5 * lay.tile_ly, frame.w_y);
            const RegimeReport rr = regime_distances(xe, ye, c.wavelength_m);
            t.add_row({grid.variable, format_g15(v), std::to_string(p + 1),
                       format_g15(links[p].ls.d), format_g15(links[p].pd.d),
                       format_g15(frame.w_x), format_g15(frame.w_y),
                       format_g15(xe), format_g15(ye), format_g15(rr.d_f),
                       format_g15(rr.d_n), regime_name(rr.classify(links[p].pd.d))});
        }
    }
    return t;
}

CsvTable run_field_map(const ScenarioConfig& cfg) {
    if (cfg.sweep_variable != "none")
        throw std::runtime_error("field-map does not sweep");
    CsvTable t;
    t.name = "field-map";
    t.columns = {"x_p_m",      "y_p_m",   "field_re", "field_im",
                 "field_abs",  "oracle_abs", "rel_err", "regime"};

    const ProtocolAssignment a = make_assignment(cfg);
    const int slot = slot_of(a, 0);
    const SlotConfig& sc = a.slots[slot];
    const LinkGeometry link = a.links[0];  // pair-1 signal link
    const BeamParams beam = cfg.beam();

    // The map shows pair 1's configured reflection, so only its own tiles
    // enter. Foreign tiles radiate tens of dB below it here and would force
    // the oracle through megacycle phase sweeps it cannot resolve.
    std::vector<Tile> tiles;
    for (size_t q = 0; q < sc.tiles.size(); ++q)
        if (sc.owner[q] == 0) tiles.push_back(sc.tiles[q]);
    std::vector<TileFieldCoefficients> tcs;
    for (const Tile& tile : tiles)
        tcs.push_back(tile_coefficients(link, tile, beam, cfg.regime_checks));
    const std::string regime =
        regime_label(cfg, link, tiles[0].lx, tiles[0].ly);

    const double aL = cfg.lens_radius_m;
    const int n = cfg.field_map_points;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = -aL + 2.0 * aL * i / (n - 1);
            const double y = -aL + 2.0 * aL * j / (n - 1);
            const Vec3 rp{x, y, 0.0};
            cplx closed(0.0, 0.0);
            for (size_t q = 0; q < tiles.size(); ++q)
                closed += tile_field(rp, tcs[q], tiles[q]);
            std::string ora = kNan, err = kNan;
            if (cfg.oracle != "none") {
                const OracleMode mode = cfg.oracle == "separable1d"
                                            ? OracleMode::kSeparable1d
                                            : OracleMode::kExact2d;
                cplx ref(0.0, 0.0);
                for (const Tile& tile : tiles)
                    ref += hf_oracle_field(rp, link, tile, beam, mode);
                ora = format_g15(std::abs(ref));
                err = format_g15(std::abs(std::abs(closed) - std::abs(ref)) /
                                 std::max(std::abs(ref), 1e-300));
            }
            t.add_row({format_g15(x), format_g15(y), format_g15(closed.real()),
                       format_g15(closed.imag()), format_g15(std::abs(closed)),
                       ora, err, regime});
        }
    }
    return t;
}

CsvTable run_gml_sweep(const ScenarioConfig& cfg) {
    const SweepGrid grid = sweep_grid(cfg, {"d_p"}, "d_p", 1.0, 10.0, 10);
    CsvTable t;
    t.name = "gml-sweep";
    t.columns = {"sweep_variable", "sweep_value", "d_p_m",  "h_closed",
                 "h_quad",         "rel_gap",     "regime"};
    for (double v : grid.values) {
        const ScenarioConfig c = at_sweep_point(cfg, grid.variable, v);
        const ProtocolAssignment a = make_assignment(c);
        const int slot = slot_of(a, 0);
        // Compare on the pair-1-owned tiles: the closed forms are anchored to
        // the owner's configuration, foreign tiles are a quadrature-only story.
        std::vector<Tile> own;
        for (size_t q = 0; q < a.slots[slot].tiles.size(); ++q)
            if (a.slots[slot].owner[q] == 0) own.push_back(a.slots[slot].tiles[q]);
        const LinkGeometry link = a.links[0];
        const BeamParams beam = c.beam();

        // Sweeps deliberately cross into the marginal zone: evaluate with the
        // ratio guards off and let the per-row regime label carry the warning.
        GmlOptions opts;
        opts.enforce_regime = false;
        std::string closed = kNan, gap = kNan;
        double hq = gml_lens_quadrature(link, own, beam, c.lens_quad_order, false);
        const bool in_plane = std::abs(std::sin(link.pd.phi)) < 1e-9;
        try {
            const double hc = in_plane ? gml_in_plane(link, own, beam, opts)
                                       : gml_out_of_plane(link, own, beam, opts);
            closed = format_g15(hc);
            gap = format_g15(std::abs(hc - hq) / std::max(hq, 1e-300));
        } catch (const std::overflow_error&) {
            // The closed form diverged at this distance; the row records it.
        }
        t.add_row({grid.variable, format_g15(v), format_g15(link.pd.d), closed,
                   format_g15(hq), gap,
                   regime_label(c, link, own[0].lx, own[0].ly)});
    }
    return t;
}

CsvTable run_interference(const ScenarioConfig& cfg) {
    if (cfg.num_pairs < 2)
        throw std::runtime_error("interference needs at least two pairs");
    const SweepGrid grid =
        sweep_grid(cfg, {"theta_p1"}, "theta_p1", 45.0, 75.0, 7);
    CsvTable t;
    t.name = "interference";
    t.columns = {"sweep_variable", "sweep_value", "theta_p1_deg", "dth_l_mrad",
                 "h11",            "h21",         "gamma1_db",    "gamma2_db",
                 "regime"};
    for (double v : grid.values) {
        const ScenarioConfig base = at_sweep_point(cfg, grid.variable, v);
        for (double dth_mrad : {0.0, 1.0}) {
            ScenarioConfig c = base;
            c.pairs[0].ls_theta_rad += dth_mrad * 1e-3;
            const ProtocolAssignment a = make_assignment(c);
            const int slot = slot_of(a, 0);
            const BeamParams beam = c.beam();
            const double h11 =
                protocol_gml(a, slot, 0, 0, beam, c.lens_quad_order, c.regime_checks);
            const double h21 =
                protocol_gml(a, slot, 1, 0, beam, c.lens_quad_order, c.regime_checks);
            const double g1 =
                link_gamma(c, h11, c.pairs[0].ls_d_m, c.pairs[0].pd_d_m);
            const double g2 =
                link_gamma(c, h21, c.pairs[1].ls_d_m, c.pairs[0].pd_d_m);
            t.add_row({grid.variable, format_g15(v),
                       format_g15(c.pairs[0].pd_theta_rad / kDegToRad),
                       format_g15(dth_mrad), format_g15(h11), format_g15(h21),
                       format_g15(db10(g1)), format_g15(db10(g2)),
                       regime_label(c, a.links[0], a.slots[slot].tiles[0].lx,
                                    a.slots[slot].tiles[0].ly)});
        }
    }
    return t;
}

namespace {

// Deterministic gains and fading setup of the pair-1 receiver under the
// configured protocol: desired gain first, then every interferer with a
// nonzero cross gain.
struct ReceiverBudget {
    double h11 = 0.0;
    std::vector<double> cross;          // h_m1 for m != 1 (protocol order)
    std::vector<double> cross_d_l;      // interferer source distances
    std::vector<FadingParams> fading;   // desired first
    std::vector<double> gamma_ratio;    // gamma_m / gamma_n for the kept terms
};

ReceiverBudget receiver_budget(const ScenarioConfig& cfg,
                               const ProtocolAssignment& a) {
    ReceiverBudget b;
    const int slot = slot_of(a, 0);
    const BeamParams beam = cfg.beam();
    b.h11 = protocol_gml(a, slot, 0, 0, beam, cfg.lens_quad_order, cfg.regime_checks);
    b.fading.push_back(FadingParams{cfg.pairs[0].alpha, cfg.pairs[0].beta});
    const double gn = link_gamma(cfg, b.h11, cfg.pairs[0].ls_d_m, cfg.pairs[0].pd_d_m);
    for (int m = 1; m < cfg.num_pairs; ++m) {
        const double hm1 =
            protocol_gml(a, slot, m, 0, beam, cfg.lens_quad_order, cfg.regime_checks);
        if (hm1 <= 0.0) continue;  // TD slots carry no cross traffic
        const double gm = link_gamma(cfg, hm1, cfg.pairs[m].ls_d_m, cfg.pairs[0].pd_d_m);
        b.cross.push_back(hm1);
        b.cross_d_l.push_back(cfg.pairs[m].ls_d_m);
        b.fading.push_back(FadingParams{cfg.pairs[m].alpha, cfg.pairs[m].beta});
        b.gamma_ratio.push_back(gm / gn);
    }
    return b;
}

}  // namespace

CsvTable run_ber(const ScenarioConfig& cfg) {
    const SweepGrid grid = sweep_grid(cfg, {"snr_db"}, "snr_db", 40.0, 70.0, 4);
    CsvTable t;
    t.name = "ber";
    t.columns = {"sweep_variable", "sweep_value", "snr_db",    "gamma_i_db",
                 "ber_quad",       "ber_mc",      "ber_mc_se", "ber_series_nl",
                 "regime"};

    const ProtocolAssignment a = make_assignment(cfg);
    const ReceiverBudget bud = receiver_budget(cfg, a);
    const std::string regime =
        regime_label(cfg, a.links[0], a.slots[slot_of(a, 0)].tiles[0].lx,
                     a.slots[slot_of(a, 0)].tiles[0].ly);
    McOptions mc;
    mc.trials = cfg.mc_trials;
    mc.seed = cfg.mc_seed;
    mc.workers = cfg.mc_workers;

    for (double snr_db : grid.values) {
        PerfSpec spec;
        spec.gamma.push_back(std::pow(10.0, snr_db / 10.0));
        double gi_total = 0.0;
        for (double r : bud.gamma_ratio) {
            spec.gamma.push_back(spec.gamma[0] * r);
            gi_total += spec.gamma.back();
        }
        std::string quad = kNan;
        if (spec.gamma.size() <= 3)
            quad = format_g15(
                average_ber(spec, bud.fading, AverageMethod::kQuad).value);
        const Estimate mce = average_ber(spec, bud.fading, AverageMethod::kMc, mc);
        std::string series = kNan;
        try {
            series = format_g15(ber_noise_limited_series(spec.gamma[0],
                                                         bud.fading[0].alpha,
                                                         bud.fading[0].beta)
                                    .value);
        } catch (const std::domain_error&) {
            // integer alpha - beta: the series has a pole there
        }
        t.add_row({grid.variable, format_g15(snr_db), format_g15(snr_db),
                   gi_total > 0.0 ? format_g15(db10(gi_total)) : kNan, quad,
                   format_g15(mce.value), format_g15(mce.std_error), series,
                   regime});
    }
    return t;
}

CsvTable run_outage(const ScenarioConfig& cfg) {
    const SweepGrid grid =
        sweep_grid(cfg, {"theta_p1", "r_e", "rate"}, "theta_p1", 45.0, 75.0, 7);
    CsvTable t;
    t.name = "outage";
    t.columns = {"sweep_variable", "sweep_value",         "r_e_cm",
                 "h11",            "gamma_n_db",          "gamma_thr",
                 "pout_noise_limited", "pout_mc",         "pout_mc_se",
                 "regime"};
    McOptions mc;
    mc.trials = cfg.mc_trials;
    mc.seed = cfg.mc_seed;
    mc.workers = cfg.mc_workers;

    for (double v : grid.values) {
        const ScenarioConfig c = at_sweep_point(cfg, grid.variable, v);
        const ProtocolAssignment a = make_assignment(c);
        const ReceiverBudget bud = receiver_budget(c, a);
        const double gn = link_gamma(c, bud.h11, c.pairs[0].ls_d_m, c.pairs[0].pd_d_m);
        // TD serves each pair a 1/N fraction of the time, so the per-slot
        // rate target (and with it the SINR threshold) scales by N.
        const double rate = c.protocol == ProtocolKind::kTd
                                ? c.rate_bit_s * c.num_pairs
                                : c.rate_bit_s;
        const double thr = capacity_threshold_snr(rate, c.bandwidth_hz);

        PerfSpec spec;
        spec.gamma.push_back(gn);
        for (double r : bud.gamma_ratio) spec.gamma.push_back(gn * r);
        spec.gamma_thr = thr;

        const double closed =
            gamma_gamma_cdf(std::sqrt(thr / gn), bud.fading[0].alpha,
                            bud.fading[0].beta);
        const Estimate mce =
            outage_upper_bound(spec, bud.fading, AverageMethod::kMc, mc);
        t.add_row({grid.variable, format_g15(v), format_g15(c.misalign_x_m / 1e-2),
                   format_g15(bud.h11), format_g15(db10(gn)), format_g15(thr),
                   format_g15(closed), format_g15(mce.value),
                   format_g15(mce.std_error),
                   regime_label(c, a.links[0],
                                a.slots[slot_of(a, 0)].tiles[0].lx,
                                a.slots[slot_of(a, 0)].tiles[0].ly)});
    }
    return t;
}

CsvTable run_sweep(const ScenarioConfig& cfg, const std::string& subcommand) {
    if (subcommand == "regimes") return run_regimes(cfg);
    if (subcommand == "field-map") return run_field_map(cfg);
    if (subcommand == "gml-sweep") return run_gml_sweep(cfg);
    if (subcommand == "interference") return run_interference(cfg);
    if (subcommand == "ber") return run_ber(cfg);
    if (subcommand == "outage") return run_outage(cfg);
    throw std::runtime_error("unknown subcommand '" + subcommand + "'");
}

// ---------------------------------------------------------------------------

namespace {

struct Check {
    std::string name;
    double expected;
    double actual;
    double tol;  // on |actual - expected| / max(|expected|, tiny) unless expected==0
};

void run_check(std::ostream& out, int& fails, const Check& c) {
    const double scale = std::max(std::abs(c.expected), 1e-300);
    const double err = c.expected == 0.0 ? std::abs(c.actual)
                                         : std::abs(c.actual - c.expected) / scale;
    const bool ok = err <= c.tol;
    if (!ok) ++fails;
    out << "check=" << c.name << " expected=" << format_g15(c.expected)
        << " actual=" << format_g15(c.actual) << " tol=" << format_g15(c.tol)
        << " status=" << (ok ? "PASS" : "FAIL") << "\n";
}

LinkGeometry table1_link1() {
    LinkGeometry l;
    l.ls = OrientedNode{1000.0, M_PI / 3.0, 0.0};
    l.pd = OrientedNode{3000.0, M_PI / 3.0, M_PI};
    l.lens_radius = 0.15;
    return l;
}

void validate_regimes(std::ostream& out, int& fails) {
    {
        BeamParams b;
        b.waist = 2.5e-3;
        const double w = beam_width(1000.0, b);
        const double wx = w / std::sin(M_PI / 8.0);
        const RegimeReport rr =
            regime_distances(std::min(0.25, wx), std::min(0.25, w), b.wavelength);
        run_check(out, fails,
                  {"regimes.low_waist.w_x", 0.5157473429653163, wx, 1e-12});
        run_check(out, fails,
                  {"regimes.low_waist.w_y", 0.1973679634391424, w, 1e-12});
        run_check(out, fails,
                  {"regimes.low_waist.d_f", 32727.13322326279, rr.d_f, 1e-12});
        run_check(out, fails,
                  {"regimes.low_waist.d_n", 85.56012780288658, rr.d_n, 1e-12});
    }
    {
        BeamParams b;  // Table-1 waist
        const double w = beam_width(1000.0, b);
        const double wx = w / std::sin(M_PI / 3.0);
        const RegimeReport rr =
            regime_distances(std::min(0.25, wx), std::min(0.25, w), b.wavelength);
        run_check(out, fails,
                  {"regimes.table1.w_x", 2.2788261193610087, wx, 1e-12});
        run_check(out, fails,
                  {"regimes.table1.w_y", 1.9735213101741427, w, 1e-12});
        run_check(out, fails,
                  {"regimes.table1.d_f", 40322.58064516129, rr.d_f, 1e-12});
        run_check(out, fails,
                  {"regimes.table1.d_n", 100.40241611281236, rr.d_n, 1e-12});
    }
}

void validate_fields(std::ostream& out, int& fails) {
    const BeamParams beam;
    const LinkGeometry link = table1_link1();

    // Total emitted power is conserved on the IRS plane.
    const IncidentBeamFrame frame = incident_frame(beam, link.ls, Vec3{});
    const auto& rule = gauss_legendre(100);
    double pw = 0.0;
    const double hx = 6.0 * frame.w_x, hy = 6.0 * frame.w_y;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        for (size_t j = 0; j < rule.nodes.size(); ++j) {
            const Vec3 r{hx * rule.nodes[i], hy * rule.nodes[j], 0.0};
            pw += rule.weights[i] * rule.weights[j] * hx * hy *
                  std::norm(incident_field(r, frame, beam));
        }
    pw /= 2.0 * kEta;
    run_check(out, fails, {"fields.incident_power", beam.power(), pw, 1e-9});

    // Closed-form tile field against the aperture-integral oracle. At the
    // lens center the two agree to quadrature precision; off-center the
    // closed form linearizes the observation offset (its c1..c6 direction
    // cosines), leaving a few-times-1e-5 truncation at Table-1 scale, so the
    // off-center tolerance documents that scale rather than rounding.
    Tile tile;
    tile.lx = tile.ly = 0.5;
    for (ProfileKind kind : {ProfileKind::kLinear, ProfileKind::kQuadratic}) {
        tile.profile = kind == ProfileKind::kLinear
                           ? lp_profile(link.ls, link.pd, Vec3{})
                           : qp_profile(link.ls, link.pd, frame, Vec3{});
        const TileFieldCoefficients tc = tile_coefficients(link, tile, beam);
        const char* pn = kind == ProfileKind::kLinear ? "lp" : "qp";
        char name[64];
        const double c0 = std::abs(tile_field(Vec3{}, tc, tile));
        const double r0 = std::abs(
            hf_oracle_field(Vec3{}, link, tile, beam, OracleMode::kSeparable1d));
        std::snprintf(name, sizeof name, "fields.%s_tile_vs_oracle_center", pn);
        run_check(out, fails, {name, r0, c0, 2e-6});
        const Vec3 pt{0.07, -0.04, 0.0};
        const double c1 = std::abs(tile_field(pt, tc, tile));
        const double r1 = std::abs(
            hf_oracle_field(pt, link, tile, beam, OracleMode::kSeparable1d));
        std::snprintf(name, sizeof name, "fields.%s_tile_vs_oracle_offcenter", pn);
        run_check(out, fails, {name, r1, c1, 1e-3});
    }

    // A beam-contained specular tile converges to the conventional-mirror
    // beam in the far field (with the Table-1 waist the beam overfills any
    // tile and edge waves never die out, so this uses the wider waist).
    BeamParams wide = beam;
    wide.waist = 2.5e-3;
    LinkGeometry far = link;
    far.pd.d = 293203.00101591676;  // 10x the far-field distance below
    Tile big;
    big.lx = big.ly = 3.0;
    big.zeta_bar = passivity_factor(far.pd.theta);
    big.profile = lp_profile(far.ls, far.pd, Vec3{});
    const TileFieldCoefficients ftc = tile_coefficients(far, big, wide);
    // The elliptical-beam parameters approach the exact field at a rate of
    // O(R(d_hat)/d_p), ~0.3% at ten far-field distances.
    const Vec3 probe{0.05, 0.03, 0.0};
    run_check(out, fails,
              {"fields.mirror_limit", std::abs(mirror_field(probe, far, wide)),
               std::abs(tile_field(probe, ftc, big)), 1e-2});
}

void validate_gml(std::ostream& out, int& fails) {
    const BeamParams beam;
    const LinkGeometry link = table1_link1();
    Tile tile;
    tile.lx = tile.ly = 0.5;
    tile.zeta_bar = passivity_factor(link.pd.theta);
    tile.profile = lp_profile(link.ls, link.pd, Vec3{});
    const std::vector<Tile> tiles{tile};

    const double h_in = gml_in_plane(link, tiles, beam);
    const double h_out = gml_out_of_plane(link, tiles, beam);
    run_check(out, fails, {"gml.in_vs_out_of_plane", h_out, h_in, 1e-8});
    // The closed form swaps the lens disc for an equal-area square and
    // freezes its edge terms at one lens point, so it carries a model error
    // that shrinks with distance: about -21% at 3 km for this tile, a few
    // percent at 5 km, sub-percent by 10 km. The tolerances track that decay.
    const struct {
        double d_p, tol;
    } decay[] = {{3000.0, 0.25}, {5000.0, 0.05}, {10000.0, 0.01}};
    for (const auto& row : decay) {
        LinkGeometry l2 = link;
        l2.pd.d = row.d_p;
        std::vector<Tile> t2 = tiles;
        t2[0].profile = lp_profile(l2.ls, l2.pd, Vec3{});
        const double hq = gml_lens_quadrature(l2, t2, beam, 160);
        const double hc = gml_in_plane(l2, t2, beam);
        char name[48];
        std::snprintf(name, sizeof name, "gml.closed_vs_quadrature_%gkm",
                      row.d_p / 1000.0);
        run_check(out, fails, {name, hq, hc, row.tol});
    }

    LinkGeometry far = link;
    far.pd = OrientedNode{403225.80645161291, M_PI / 6.0, M_PI};
    const double h_cor = anomalous_gml(far, beam);
    const double h_ref = integrate_disc(
        [&](double x, double y) {
            return std::norm(anomalous_field(Vec3{x, y, 0.0}, far, beam));
        },
        far.lens_radius, 80) /
        (2.0 * kEta * beam.power());
    run_check(out, fails, {"gml.anomalous_beam", h_ref, h_cor, 1e-9});
}

void validate_perf(std::ostream& out, int& fails) {
    PerfSpec one;
    one.gamma = {4.0};
    run_check(out, fails,
              {"perf.instantaneous_ber", 0.15865525393145705,
               instantaneous_ber({1.0}, one), 1e-12});

    const double thr = capacity_threshold_snr(1.7e9, 1e9);
    run_check(out, fails,
              {"perf.capacity_identity", 1.7e9, capacity_lower_bound(thr, 1e9),
               1e-12});

    const double mass = integrate_adaptive(
        [](double u) { return 2.0 * u * gamma_gamma_pdf(u * u, 2.0, 2.0); }, 1e-8,
        std::sqrt(gamma_gamma_tail_cut(2.0, 2.0, 1e-10)), 1e-10, 1e-9);
    run_check(out, fails, {"perf.fading_normalization", 1.0, mass, 1e-6});

    PerfSpec spec;
    spec.gamma = {1e6};
    const std::vector<FadingParams> fad{FadingParams{2.1, 1.3}};
    const double quad = average_ber(spec, fad, AverageMethod::kQuad).value;
    const double series = ber_noise_limited_series(1e6, 2.1, 1.3).value;
    run_check(out, fails, {"perf.series_vs_quad", quad, series, 1e-2});

    McOptions mc;
    mc.trials = 200000;
    const std::vector<FadingParams> f22{FadingParams{}};
    PerfSpec s22;
    s22.gamma = {1e6};
    const Estimate e = average_ber(s22, f22, AverageMethod::kMc, mc);
    const double q = average_ber(s22, f22, AverageMethod::kQuad).value;
    run_check(out, fails,
              {"perf.mc_vs_quad_sigma", 0.0, (e.value - q) / (3.0 * e.std_error),
               1.0});
}

}  // namespace

int run_validate(const ScenarioConfig& cfg, const std::string& suite,
                 std::ostream& report) {
    (void)cfg;
    int fails = 0;
    const bool all = suite == "all";
    if (!all && suite != "regimes" && suite != "fields" && suite != "gml" &&
        suite != "perf")
        throw std::runtime_error(
            "validate: suite must be regimes|fields|gml|perf|all");
    if (all || suite == "regimes") validate_regimes(report, fails);
    if (all || suite == "fields") validate_fields(report, fails);
    if (all || suite == "gml") validate_gml(report, fails);
    if (all || suite == "perf") validate_perf(report, fails);
    report << "validate: " << (fails == 0 ? "all checks passed"
                                          : std::to_string(fails) + " check(s) failed")
           << "\n";
    return fails;
}

}  // namespace irsfso
