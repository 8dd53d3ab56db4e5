#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "irsfso/irs.hpp"
#include "support.hpp"

#include <cmath>
#include <stdexcept>

using namespace irsfso;
using testsupport::load_fixture;
using testsupport::rel_err;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Table-1 link 1: specular pi/3 hop, 1 km in / 3 km out.
LinkGeometry table1_link() {
    LinkGeometry l;
    l.ls = OrientedNode{1000.0, kPi / 3.0, 0.0};
    l.pd = OrientedNode{3000.0, kPi / 3.0, kPi};
    l.lens_radius = 0.15;
    return l;
}

Tile half_meter_tile(const PhaseProfile& profile) {
    Tile t;
    t.lx = t.ly = 0.5;
    t.profile = profile;
    return t;
}
}  // namespace

TEST_CASE("build_layout splits the surface into the advertised grid") {
    const IrsLayout two = build_layout(1.0, 0.5, 2, 1);
    CHECK(two.tile_lx == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(two.tile_ly == doctest::Approx(0.5).epsilon(1e-15));
    REQUIRE(two.centers.size() == 2);
    CHECK(two.centers[0].x == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(two.centers[1].x == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(two.centers[0].y == 0.0);

    const IrsLayout grid = build_layout(1.0, 0.5, 8, 2);
    CHECK(grid.tile_lx == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(grid.tile_ly == doctest::Approx(0.25).epsilon(1e-15));
    REQUIRE(grid.centers.size() == 16);
    // x-major: centers[ix*qy + iy]
    CHECK(grid.centers[0].x == doctest::Approx(-0.4375).epsilon(1e-15));
    CHECK(grid.centers[0].y == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK(grid.centers[1].x == doctest::Approx(-0.4375).epsilon(1e-15));
    CHECK(grid.centers[1].y == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(grid.centers[15].x == doctest::Approx(0.4375).epsilon(1e-15));
    CHECK(grid.centers[15].y == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("build_layout honors inter-tile spacing") {
    const IrsLayout lay = build_layout(1.0, 0.5, 2, 1, 0.1, 0.0);
    CHECK(lay.tile_lx == doctest::Approx(0.45).epsilon(1e-15));
    CHECK(lay.centers[0].x == doctest::Approx(-0.275).epsilon(1e-15));
    CHECK(lay.centers[1].x == doctest::Approx(0.275).epsilon(1e-15));
}

TEST_CASE("build_layout rejects inconsistent dimensions") {
    CHECK_THROWS_AS((void)build_layout(1.0, 0.5, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)build_layout(-1.0, 0.5, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)build_layout(1.0, 0.5, 2, 1, -0.1, 0.0), std::invalid_argument);
    // spacing eats the whole surface
    CHECK_THROWS_AS((void)build_layout(1.0, 0.5, 2, 1, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("linear profile gradient vanishes exactly in specular geometry") {
    const LinkGeometry link = table1_link();
    const PhaseProfile p = lp_profile(link.ls, link.pd, Vec3{});
    CHECK(p.phx == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p.phy == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p.ph0 == doctest::Approx(link.pd.d - link.ls.d).epsilon(1e-15));
    CHECK(p.kind == ProfileKind::kLinear);

    // a non-specular detector needs a real x-gradient; in-plane geometry
    // never needs a y-gradient
    const OrientedNode pd{3000.0, kPi / 6.0, kPi};
    const PhaseProfile q = lp_profile(link.ls, pd, Vec3{});
    CHECK(q.phx == doctest::Approx(std::cos(kPi / 3.0) - std::cos(kPi / 6.0))
                       .epsilon(1e-15));
    CHECK(q.phy == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("quadratic profile keeps the linear steering terms") {
    BeamParams beam;
    const LinkGeometry link = table1_link();
    const IncidentBeamFrame frame = incident_frame(beam, link.ls, link.r_l0);
    const PhaseProfile p = qp_profile(link.ls, link.pd, frame, Vec3{});
    const PhaseProfile l = lp_profile(link.ls, link.pd, Vec3{});
    CHECK(p.kind == ProfileKind::kQuadratic);
    CHECK(p.phx == l.phx);
    CHECK(p.phy == l.phy);
    // curvature terms engage: both second-order coefficients are nonzero
    CHECK(std::abs(p.phx2) > 0.0);
    CHECK(std::abs(p.phy2) > 0.0);
}

TEST_CASE("passivity factor") {
    CHECK(passivity_factor(kPi / 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(passivity_factor(kPi / 6.0) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(passivity_factor(kPi / 3.0) ==
          doctest::Approx(std::sqrt(std::sin(kPi / 3.0))).epsilon(1e-15));
}

TEST_CASE("closed-form tile field reproduces the frozen lens-point values") {
    BeamParams beam;
    const LinkGeometry link = table1_link();
    const IncidentBeamFrame frame = incident_frame(beam, link.ls, link.r_l0);
    const PhaseProfile lp = lp_profile(link.ls, link.pd, Vec3{});
    const PhaseProfile qp = qp_profile(link.ls, link.pd, frame, Vec3{});
    for (const auto& row : load_fixture("tile_field_ref")) {
        const bool linear = row["profile"].get<std::string>() == "lp";
        const Tile tile = half_meter_tile(linear ? lp : qp);
        const TileFieldCoefficients tc = tile_coefficients(link, tile, beam);
        const Vec3 rp{row["xp"].get<double>(), row["yp"].get<double>(), 0.0};
        const cplx e = tile_field(rp, tc, tile);
        CAPTURE(row["profile"].get<std::string>());
        CAPTURE(rp.x);
        CAPTURE(rp.y);
        CHECK(rel_err(e.real(), row["re"].get<double>()) < 1e-12);
        CHECK(rel_err(e.imag(), row["im"].get<double>()) < 1e-12);
    }
}

TEST_CASE("tile field is y-symmetric for in-plane links") {
    BeamParams beam;
    const LinkGeometry link = table1_link();
    const Tile tile = half_meter_tile(lp_profile(link.ls, link.pd, Vec3{}));
    const TileFieldCoefficients tc = tile_coefficients(link, tile, beam);
    const cplx up = tile_field({0.03, 0.08, 0.0}, tc, tile);
    const cplx dn = tile_field({0.03, -0.08, 0.0}, tc, tile);
    CHECK(rel_err(dn.real(), up.real()) < 1e-12);
    CHECK(rel_err(dn.imag(), up.imag()) < 1e-12);
}

TEST_CASE("linear-profile anchor shift is invisible in the field magnitude") {
    // Re-anchoring a linear profile only redistributes constant phase.
    BeamParams beam;
    const LinkGeometry link = table1_link();
    const OrientedNode pd{3000.0, kPi / 6.0, kPi};  // non-trivial gradient
    LinkGeometry steered = link;
    steered.pd = pd;
    const Tile t0 = half_meter_tile(lp_profile(link.ls, pd, Vec3{}));
    const Tile t1 = half_meter_tile(lp_profile(link.ls, pd, Vec3{0.1, -0.05, 0.0}));
    const TileFieldCoefficients c0 = tile_coefficients(steered, t0, beam);
    const TileFieldCoefficients c1 = tile_coefficients(steered, t1, beam);
    for (const Vec3& rp : {Vec3{0.0, 0.0, 0.0}, Vec3{0.05, 0.1, 0.0}}) {
        CHECK(rel_err(std::abs(tile_field(rp, c1, t1)),
                      std::abs(tile_field(rp, c0, t0))) < 1e-12);
    }
}

TEST_CASE("tile response scales linearly with the loss factor") {
    BeamParams beam;
    const LinkGeometry link = table1_link();
    Tile tile = half_meter_tile(lp_profile(link.ls, link.pd, Vec3{}));
    const cplx full = tile_field({0.02, 0.0, 0.0},
                                 tile_coefficients(link, tile, beam), tile);
    tile.zeta0 = 0.6;
    tile.zeta_bar = 0.5;
    const cplx lossy = tile_field({0.02, 0.0, 0.0},
                                  tile_coefficients(link, tile, beam), tile);
    CHECK(rel_err(std::abs(lossy), 0.3 * std::abs(full)) < 1e-12);
}

TEST_CASE("coefficient invariants: principal square-root branch") {
    BeamParams beam;
    const LinkGeometry link = table1_link();
    const Tile tile = half_meter_tile(lp_profile(link.ls, link.pd, Vec3{}));
    const TileFieldCoefficients tc = tile_coefficients(link, tile, beam);
    CHECK(tc.sqrt_bx.real() >= 0.0);
    CHECK(tc.sqrt_by.real() >= 0.0);
    CHECK(rel_err(std::abs(tc.sqrt_bx * tc.sqrt_bx - tc.bx), 0.0) <
          1e-12 * std::abs(tc.bx));
    CHECK(rel_err(std::abs(tc.sqrt_by * tc.sqrt_by - tc.by), 0.0) <
          1e-12 * std::abs(tc.by));
    CHECK(tc.k == doctest::Approx(beam.k()).epsilon(1e-15));
}

TEST_CASE("regime guard trips in the marginal zone and can be bypassed") {
    BeamParams beam;
    LinkGeometry link = table1_link();
    link.pd.d = 500.0;  // inside 10x the intermediate-field distance
    const Tile tile = half_meter_tile(lp_profile(link.ls, link.pd, Vec3{}));
    CHECK_THROWS_AS((void)tile_coefficients(link, tile, beam), std::domain_error);
    const TileFieldCoefficients tc = tile_coefficients(link, tile, beam, false);
    const cplx e = tile_field({0.0, 0.0, 0.0}, tc, tile);
    CHECK(std::isfinite(e.real()));
    CHECK(std::isfinite(e.imag()));
}

TEST_CASE("mirror and anomalous beams coincide in specular geometry") {
    BeamParams beam;
    beam.waist = 2.5e-3;
    LinkGeometry link = table1_link();
    link.pd.d = 2.0e5;
    const ReflectedBeam m = mirror_beam(link, beam);
    const ReflectedBeam a = anomalous_beam(link, beam);
    CHECK(m.w_x == a.w_x);
    CHECK(m.w_y == a.w_y);
    CHECK(m.peak_intensity == a.peak_intensity);
    CHECK(m.w_x == doctest::Approx(m.w_y).epsilon(1e-15));
    CHECK(m.zeta_t2 == doctest::Approx(1.0).epsilon(1e-15));
    const cplx fm = mirror_field({0.04, 0.02, 0.0}, link, beam);
    const cplx fa = anomalous_field({0.04, 0.02, 0.0}, link, beam);
    CHECK(fm.real() == fa.real());
    CHECK(fm.imag() == fa.imag());
}

TEST_CASE("reflected far-field envelope matches its advertised parameters") {
    BeamParams beam;
    beam.waist = 2.5e-3;
    LinkGeometry link = table1_link();
    link.pd = OrientedNode{2.0e5, kPi / 6.0, kPi};  // anomalous redirection
    const ReflectedBeam rb = anomalous_beam(link, beam, 0.9);
    // redirecting to the shallower angle widens x by sin(theta_l)/sin(theta_p)
    CHECK(rel_err(rb.w_x, rb.w_y * std::sin(kPi / 3.0) / std::sin(kPi / 6.0)) < 1e-14);
    CHECK(rel_err(std::norm(anomalous_field({0.0, 0.0, 0.0}, link, beam, 0.9)),
                  rb.peak_intensity) < 1e-12);
    const Vec3 probe{0.08, -0.03, 0.0};
    const double expected =
        std::sqrt(rb.peak_intensity) *
        std::exp(-probe.x * probe.x / (rb.w_x * rb.w_x) -
                 probe.y * probe.y / (rb.w_y * rb.w_y));
    CHECK(rel_err(std::abs(anomalous_field(probe, link, beam, 0.9)), expected) < 1e-12);
}

TEST_CASE("anomalous mirror conserves power: huge lens captures zeta0^2") {
    BeamParams beam;
    beam.waist = 2.5e-3;
    LinkGeometry link;
    link.ls = OrientedNode{1000.0, kPi / 3.0, 0.0};
    link.pd = OrientedNode{3.0e5, kPi / 6.0, kPi};
    const ReflectedBeam rb = anomalous_beam(link, beam);
    link.lens_radius = 8.0 * std::max(rb.w_x, rb.w_y);
    CHECK(anomalous_gml(link, beam, 1.0) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(anomalous_gml(link, beam, 0.8) == doctest::Approx(0.64).epsilon(1e-4));
}

TEST_CASE("anomalous-mirror lens gain reproduces the frozen reference values") {
    const auto ref = load_fixture("corollary2_ref");
    BeamParams beam;
    beam.waist = 2.5e-3;
    for (const auto& row : ref["rows"]) {
        LinkGeometry link;
        link.ls = OrientedNode{1000.0, kPi / 3.0, 0.0};
        link.pd = OrientedNode{row["dp"].get<double>(), kPi / 6.0, kPi};
        link.lens_radius = 0.15;
        CAPTURE(row["tag"].get<std::string>());
        CHECK(rel_err(anomalous_gml(link, beam), row["h_cor2"].get<double>()) < 1e-9);
    }
}
