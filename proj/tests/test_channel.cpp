#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "irsfso/channel.hpp"
#include "support.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace irsfso;
using testsupport::load_fixture;
using testsupport::rel_err;

namespace {
constexpr double kPi = 3.14159265358979323846;

LinkGeometry table1_link() {
    LinkGeometry l;
    l.ls = OrientedNode{1000.0, kPi / 3.0, 0.0};
    l.pd = OrientedNode{3000.0, kPi / 3.0, kPi};
    l.lens_radius = 0.15;
    return l;
}

Tile lp_tile(const LinkGeometry& link, double zeta_bar = 1.0) {
    Tile t;
    t.lx = t.ly = 0.5;
    t.profile = lp_profile(link.ls, link.pd, Vec3{});
    t.zeta_bar = zeta_bar;
    return t;
}
}  // namespace

TEST_CASE("aperture-integral oracle reproduces frozen magnitudes") {
    BeamParams beam;
    const LinkGeometry link = table1_link();
    const Tile tile = lp_tile(link);
    for (const auto& row : load_fixture("separable_oracle_ref")) {
        const Vec3 rp{row["xp"].get<double>(), row["yp"].get<double>(), 0.0};
        const cplx e = hf_oracle_field(rp, link, tile, beam, OracleMode::kSeparable1d);
        CAPTURE(rp.x);
        CAPTURE(rp.y);
        CHECK(rel_err(std::abs(e), row["absE"].get<double>()) < 1e-6);
    }
}

TEST_CASE("closed-form field agrees with the oracle at the lens center") {
    BeamParams beam;
    const LinkGeometry link = table1_link();
    const IncidentBeamFrame frame = incident_frame(beam, link.ls, link.r_l0);
    for (ProfileKind kind : {ProfileKind::kLinear, ProfileKind::kQuadratic}) {
        Tile tile;
        tile.lx = tile.ly = 0.5;
        tile.profile = kind == ProfileKind::kLinear
                           ? lp_profile(link.ls, link.pd, Vec3{})
                           : qp_profile(link.ls, link.pd, frame, Vec3{});
        const TileFieldCoefficients tc = tile_coefficients(link, tile, beam);
        const double closed = std::abs(tile_field(Vec3{}, tc, tile));
        const double oracle = std::abs(
            hf_oracle_field(Vec3{}, link, tile, beam, OracleMode::kSeparable1d));
        CHECK(rel_err(closed, oracle) < 2e-6);
    }
}

TEST_CASE("oracle rejects a fixed resolution too coarse for the phase") {
    BeamParams beam;
    const LinkGeometry link = table1_link();
    const Tile tile = lp_tile(link);
    CHECK_THROWS_AS((void)hf_oracle_field(Vec3{}, link, tile, beam,
                                          OracleMode::kSeparable1d, 51),
                    std::runtime_error);
}

TEST_CASE("exact spherical kernel backs the separable expansion at model scale") {
    // Scaled geometry (tile under 2e3 wavelengths) where the full kernel is
    // tractable; the quadratic-expansion truncation must stay below 1e-3.
    BeamParams beam;
    beam.wavelength = 1e-3;
    beam.waist = 5e-3;
    LinkGeometry link;
    link.ls = OrientedNode{30.0, kPi / 3.0, 0.0};
    link.pd = OrientedNode{100.0, kPi / 3.0, kPi};
    link.lens_radius = 0.3;
    Tile tile;
    tile.lx = tile.ly = 0.775;
    tile.profile = lp_profile(link.ls, link.pd, Vec3{});
    for (const Vec3& rp : {Vec3{0.0, 0.0, 0.0}, Vec3{0.1, -0.05, 0.0}}) {
        const cplx sep =
            hf_oracle_field(rp, link, tile, beam, OracleMode::kSeparable1d);
        const cplx full = hf_oracle_field(rp, link, tile, beam, OracleMode::kExact2d);
        CAPTURE(rp.x);
        CAPTURE(rp.y);
        CHECK(std::abs(full - sep) / std::abs(full) < 1e-3);
    }
}

TEST_CASE("exact kernel refuses full-size tiles") {
    BeamParams beam;  // 1550 nm: a 0.5 m tile spans ~3e5 wavelengths
    const LinkGeometry link = table1_link();
    const Tile tile = lp_tile(link);
    CHECK_THROWS_AS(
        (void)hf_oracle_field(Vec3{}, link, tile, beam, OracleMode::kExact2d),
        std::invalid_argument);
}

TEST_CASE("lens gain reproduces the frozen distance sweep") {
    BeamParams beam;
    const double zq = std::sqrt(std::sin(kPi / 3.0));
    for (const auto& row : load_fixture("gml_sweep_ref")) {
        const double dp = row["dp"].get<double>();
        LinkGeometry link = table1_link();
        link.pd.d = dp;
        const std::vector<Tile> tiles{lp_tile(link, zq)};
        // dp = 1 km sits inside ten times the intermediate-field distance;
        // the reference values were generated with the guard lifted
        const bool marginal = dp < 1100.0;
        CAPTURE(dp);
        const double hq = gml_lens_quadrature(link, tiles, beam, 160, !marginal);
        CHECK(rel_err(hq, row["h_quad"].get<double>()) < 1e-9);
        GmlOptions opts;
        opts.enforce_regime = !marginal;
        if (row["h_closed"].is_null()) {
            // the analytic continuation genuinely diverges here
            CHECK_THROWS_AS((void)gml_in_plane(link, tiles, beam, opts),
                            std::overflow_error);
        } else {
            CHECK(rel_err(gml_in_plane(link, tiles, beam, opts),
                          row["h_closed"].get<double>()) < 1e-9);
        }
    }
}

TEST_CASE("in-plane and out-of-plane closed forms coincide at azimuth pi") {
    BeamParams beam;
    const LinkGeometry link = table1_link();
    const std::vector<Tile> tiles{lp_tile(link, passivity_factor(link.pd.theta))};
    const double hi = gml_in_plane(link, tiles, beam);
    const double ho = gml_out_of_plane(link, tiles, beam);
    CHECK(rel_err(ho, hi) < 1e-8);
}

TEST_CASE("out-of-plane gain tracks the diffraction pattern off-azimuth") {
    // The 0.5 m coherent tile has a ~3 urad beamwidth at 1550 nm, so the gain
    // may only be treated as continuous well inside that scale...
    BeamParams beam;
    LinkGeometry link = table1_link();
    const std::vector<Tile> tiles{lp_tile(link, passivity_factor(link.pd.theta))};
    const double at_pi = gml_out_of_plane(link, tiles, beam);
    link.pd.phi = kPi - 1e-8;
    const double near_pi = gml_out_of_plane(link, tiles, beam);
    CHECK(rel_err(near_pi, at_pi) < 2e-4);

    // ...while a milliradian swings the detector meters off the lobe: the
    // closed form and the disc quadrature must agree the signal collapses.
    link.pd.phi = kPi - 1e-3;
    const double off_lobe = gml_out_of_plane(link, tiles, beam);
    const double off_lobe_quad = gml_lens_quadrature(link, tiles, beam, 160);
    CHECK(off_lobe < 1e-3 * at_pi);
    CHECK(off_lobe / off_lobe_quad > 0.5);
    CHECK(off_lobe / off_lobe_quad < 2.0);
}

TEST_CASE("in-plane closed form rejects skew azimuths") {
    BeamParams beam;
    LinkGeometry link = table1_link();
    link.pd.phi = 3.0 * kPi / 4.0;
    const std::vector<Tile> tiles{lp_tile(link)};
    CHECK_THROWS_AS((void)gml_in_plane(link, tiles, beam), std::domain_error);
}

TEST_CASE("closed forms demand at least one tile") {
    BeamParams beam;
    const LinkGeometry link = table1_link();
    CHECK_THROWS_AS((void)gml_in_plane(link, {}, beam), std::invalid_argument);
    CHECK_THROWS_AS((void)gml_lens_quadrature(link, {}, beam), std::invalid_argument);
}

TEST_CASE("large-tile gain matches the frozen anomalous-redirection sweep") {
    const auto ref = load_fixture("corollary2_ref");
    BeamParams beam;
    beam.waist = 2.5e-3;
    const double zq = std::sqrt(std::sin(kPi / 6.0));
    for (const auto& row : ref["rows"]) {
        LinkGeometry link;
        link.ls = OrientedNode{1000.0, kPi / 3.0, 0.0};
        link.pd = OrientedNode{row["dp"].get<double>(), kPi / 6.0, kPi};
        link.lens_radius = 0.15;
        Tile tile;
        tile.lx = tile.ly = 3.0;
        tile.profile = lp_profile(link.ls, link.pd, Vec3{});
        tile.zeta_bar = zq;
        const double h = gml_in_plane(link, {tile}, beam);
        CAPTURE(row["tag"].get<std::string>());
        CHECK(rel_err(h, row["h_closed"].get<double>()) < 1e-9);
    }
    // deep in the far field the single big tile behaves like the anomalous
    // mirror (sub-percent agreement); at 3 km the two disagree hard
    const auto& far = ref["rows"][0];
    const auto& near = ref["rows"][1];
    CHECK(rel_err(far["h_closed"].get<double>(), far["h_cor2"].get<double>()) < 0.05);
    CHECK(rel_err(near["h_closed"].get<double>(), near["h_cor2"].get<double>()) > 0.10);
}

TEST_CASE("atmospheric loss at Table-1 scale") {
    CHECK(rel_err(atmospheric_loss(1000.0, 3000.0, 0.43e-3),
                  std::pow(10.0, -0.172)) < 1e-12);
    CHECK(atmospheric_loss(1000.0, 3000.0, 0.0) == 1.0);
    CHECK_THROWS_AS((void)atmospheric_loss(-1.0, 10.0, 0.43e-3),
                    std::invalid_argument);
}

TEST_CASE("channel composition multiplies the three amplitude factors") {
    const ChannelGain g = compose_channel(0.5, 0.9, 0.8);
    CHECK(g.h == doctest::Approx(0.36).epsilon(1e-15));
    CHECK(g.h_irs == 0.5);
    CHECK(g.h_p == 0.9);
    CHECK(g.h_a == 0.8);
    CHECK_THROWS_AS((void)compose_channel(-0.1, 1.0, 1.0), std::invalid_argument);
}
