#include "irsfso/irs.hpp"

#include "irsfso/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace irsfso {

IrsLayout build_layout(double lx_tot, double ly_tot, int qx, int qy,
                       double spacing_x, double spacing_y) {
    if (qx < 1 || qy < 1)
        throw std::invalid_argument("build_layout: tile counts must be >= 1");
    if (!(lx_tot > 0.0) || !(ly_tot > 0.0))
        throw std::invalid_argument("build_layout: surface extents must be positive");
    if (spacing_x < 0.0 || spacing_y < 0.0)
        throw std::invalid_argument("build_layout: spacing must be non-negative");

    IrsLayout lay;
    lay.qx = qx;
    lay.qy = qy;
    lay.spacing_x = spacing_x;
    lay.spacing_y = spacing_y;
    lay.total_lx = lx_tot;
    lay.total_ly = ly_tot;
    lay.tile_lx = (lx_tot - (qx - 1) * spacing_x) / qx;
    lay.tile_ly = (ly_tot - (qy - 1) * spacing_y) / qy;
    if (!(lay.tile_lx > 0.0) || !(lay.tile_ly > 0.0))
        throw std::invalid_argument(
            "build_layout: inconsistent dimensions (spacing leaves no tile area)");

    const double px = lay.tile_lx + spacing_x;
    const double py = lay.tile_ly + spacing_y;
    lay.centers.reserve(static_cast<size_t>(qx) * qy);
    for (int i = 0; i < qx; ++i)
        for (int j = 0; j < qy; ++j)
            lay.centers.push_back(Vec3{(i - 0.5 * (qx - 1)) * px,
                                       (j - 0.5 * (qy - 1)) * py, 0.0});
    return lay;
}

PhaseProfile lp_profile(const OrientedNode& ls, const OrientedNode& pd,
                        const Vec3& r_qt, double x_l0) {
    PhaseProfile p;
    p.kind = ProfileKind::kLinear;
    p.r_qt = r_qt;
    const double d_hat = ls.d + x_l0 * std::cos(ls.theta);
    p.ph0 = pd.d - d_hat;
    p.phx = std::cos(ls.theta) * std::cos(ls.phi) + std::cos(pd.theta) * std::cos(pd.phi);
    p.phy = std::cos(ls.theta) * std::sin(ls.phi) + std::cos(pd.theta) * std::sin(pd.phi);
    return p;
}

PhaseProfile qp_profile(const OrientedNode& ls, const OrientedNode& pd,
                        const IncidentBeamFrame& frame, const Vec3& r_qt) {
    PhaseProfile p;
    p.kind = ProfileKind::kQuadratic;
    p.r_qt = r_qt;
    p.ph0 = pd.d - frame.d_hat;
    p.phx = std::cos(ls.theta) * std::cos(ls.phi) + std::cos(pd.theta) * std::cos(pd.phi);
    p.phy = std::cos(ls.theta) * std::sin(ls.phi) + std::cos(pd.theta) * std::sin(pd.phi);

    const double ctp = std::cos(pd.theta);
    const double cfp = std::cos(pd.phi);
    const double sfp = std::sin(pd.phi);
    const double stl = std::sin(ls.theta);
    const double dp = pd.d;
    // Curvature matching: incoming wavefront curvature is cancelled and the
    // outgoing spherical divergence toward the lens is focused; the x-axis
    // sees the incidence-plane projections, the y-axis the transverse ones.
    p.phx2 = (1.0 + ctp * ctp * cfp * cfp) / (2.0 * dp) -
             stl * stl / (2.0 * frame.r_at) - 1.0 / (4.0 * dp);
    p.phy2 = (1.0 + ctp * ctp * sfp * sfp) / (2.0 * dp) -
             1.0 / (2.0 * frame.r_at) - 1.0 / (4.0 * dp);
    return p;
}

double passivity_factor(double theta_p) {
    return std::sqrt(std::abs(std::sin(theta_p)));
}

TileFieldCoefficients tile_coefficients(const LinkGeometry& link, const Tile& tile,
                                        const BeamParams& beam, bool enforce_regime) {
    const OrientedNode& ls = link.ls;
    const OrientedNode& pd = link.pd;
    const double lam = beam.wavelength;

    if (enforce_regime) {
        require_much_greater(ls.d, std::max(tile.lx, tile.ly),
                             "source distance vs tile extent");
        require_much_greater(pd.d, link.lens_radius, "lens distance vs lens radius");
        require_much_greater(pd.d, std::abs(link.r_l0.x),
                             "lens distance vs footprint x-offset");
        require_much_greater(pd.d, std::abs(link.r_l0.y),
                             "lens distance vs footprint y-offset");
        if (tile.lx < 1e3 * lam || tile.ly < 1e3 * lam)
            throw std::domain_error(
                "tile_coefficients: tile extent not large against the wavelength");
    }

    const IncidentBeamFrame frame = incident_frame(beam, ls, link.r_l0);

    if (enforce_regime) {
        const RegimeReport rr = regime_distances(std::min(0.5 * tile.lx, frame.w_x),
                                                 std::min(0.5 * tile.ly, frame.w_y), lam);
        require_much_greater(pd.d, rr.d_n, "lens distance vs near-field bound d_n");
    }

    const double k = beam.k();
    const double dp = pd.d;
    const double stl = std::sin(ls.theta);
    const double ctl = std::cos(ls.theta);
    const double stp = std::sin(pd.theta);
    const double ctp = std::cos(pd.theta);
    const double cfp = std::cos(pd.phi);
    const double sfp = std::sin(pd.phi);
    const double xl0 = link.r_l0.x;
    const double yl0 = link.r_l0.y;
    const double xp0 = link.r_p0.x;
    const double yp0 = link.r_p0.y;
    const double sl2 = stl * stl;
    const cplx nu = frame.nu;
    const cplx jk(0.0, k);
    const PhaseProfile& pf = tile.profile;

    TileFieldCoefficients tc;
    tc.k = k;
    tc.c1 = cfp * stp / dp;
    tc.c2 = -sfp / dp;
    tc.c3 = sfp * stp / dp;
    tc.c4 = cfp / dp;
    tc.c5 = cfp * ctp / dp;
    tc.c6 = sfp * ctp / dp;
    tc.phi_x = -ctl - ctp * cfp;
    tc.phi_y = -ctp * sfp;

    tc.bx = nu * sl2 -
            jk / (2.0 * dp) * (1.0 - tc.c5 * tc.c5 * dp * dp - 2.0 * tc.c5 * xp0) +
            jk * pf.phx2;
    tc.by = nu -
            jk / (2.0 * dp) * (1.0 - tc.c6 * tc.c6 * dp * dp - 2.0 * tc.c6 * yp0) +
            jk * pf.phy2;
    if (!(tc.bx.real() > 0.0) || !(tc.by.real() > 0.0))
        throw std::domain_error(
            "tile_coefficients: Gaussian width coefficient lost positivity");
    tc.sqrt_bx = std::sqrt(tc.bx);
    tc.sqrt_by = std::sqrt(tc.by);

    tc.a0 = 2.0 * cplx(0.0, 1.0) * nu * xl0 * sl2 / k + xp0 / dp + tc.phi_x;
    tc.b0 = 2.0 * cplx(0.0, 1.0) * nu * yl0 / k + yp0 / dp + tc.phi_y;

    const double xt = pf.r_qt.x;
    const double yt = pf.r_qt.y;
    tc.delta_q = -pf.phx2 * xt * xt - pf.phy2 * yt * yt + pf.phx * xt + pf.phy * yt -
                 pf.ph0;
    tc.c_q = tile.zeta() * std::exp(cplx(0.0, k * tc.delta_q));

    // Lens-point-independent parts of X and Y.
    tc.x0 = tc.a0 + pf.phx - 2.0 * xt * pf.phx2;
    tc.y0 = tc.b0 + pf.phy - 2.0 * yt * pf.phy2;

    const double amp = beam.peak_field * beam.waist * frame.zeta_in /
                       (lam * frame.w_at * dp);
    const cplx expo = cplx(0.0, -k * (frame.d_hat - dp) + std::atan(frame.d_hat / beam.rayleigh())) -
                      nu * (sl2 * xl0 * xl0 + yl0 * yl0);
    tc.c_pref = cplx(0.0, -amp) * std::exp(expo);
    return tc;
}

cplx tile_field(const Vec3& r_p, const TileFieldCoefficients& tc, const Tile& tile) {
    const cplx x = tc.x0 + tc.c1 * r_p.x + tc.c2 * r_p.y;
    const cplx y = tc.y0 + tc.c3 * r_p.x + tc.c4 * r_p.y;
    const cplx brx = gauss_bracket(tc.bx, tc.sqrt_bx, tile.center.x + 0.5 * tile.lx,
                                   tile.center.x - 0.5 * tile.lx, tc.k * x);
    const cplx bry = gauss_bracket(tc.by, tc.sqrt_by, tile.center.y + 0.5 * tile.ly,
                                   tile.center.y - 0.5 * tile.ly, tc.k * y);
    return tc.c_pref * tc.c_q * (M_PI / (4.0 * tc.sqrt_bx * tc.sqrt_by)) * brx * bry;
}

namespace {

ReflectedBeam reflected_beam(const LinkGeometry& link, const BeamParams& beam,
                             double zeta0, bool anomalous) {
    const IncidentBeamFrame frame = incident_frame(beam, link.ls, link.r_l0);
    const double k = beam.k();
    const double dp = link.pd.d;
    const double abs_nu = std::abs(frame.nu);
    const double stl = std::sin(link.ls.theta);
    const double stp = anomalous ? std::sin(link.pd.theta) : stl;
    if (std::abs(stp) < 1e-12)
        throw std::invalid_argument("reflected beam undefined at grazing exit angle");

    ReflectedBeam rb;
    rb.w_y = 2.0 * abs_nu * dp * frame.w_at / k;
    rb.w_x = rb.w_y * std::abs(stl) / std::abs(stp);
    rb.r_y = 4.0 * dp * dp * abs_nu * abs_nu * frame.r_at / (k * k);
    rb.r_x = rb.r_y * stl * stl / (stp * stp);
    rb.zeta_t2 = zeta0 * zeta0 * std::abs(stp) / std::abs(stl);
    const double e0w0 = beam.peak_field * beam.waist;
    rb.peak_intensity = e0w0 * e0w0 * rb.zeta_t2 / (rb.w_x * rb.w_y) * (stl / stp);
    return rb;
}

cplx reflected_field(const Vec3& r_p, const LinkGeometry& link, const BeamParams& beam,
                     const ReflectedBeam& rb) {
    const IncidentBeamFrame frame = incident_frame(beam, link.ls, link.r_l0);
    const double k = beam.k();
    const double xp = r_p.x;
    const double yp = r_p.y;
    const double envelope = -xp * xp / (rb.w_x * rb.w_x) - yp * yp / (rb.w_y * rb.w_y);
    const double phase = k * (frame.d_hat + link.pd.d) +
                         k * (xp * xp / (2.0 * rb.r_x) + yp * yp / (2.0 * rb.r_y));
    // Overall constant phase is a convention; all observables use |field|^2.
    return std::sqrt(rb.peak_intensity) * std::exp(envelope) *
           cplx(std::cos(phase), -std::sin(phase));
}

}  // namespace

ReflectedBeam mirror_beam(const LinkGeometry& link, const BeamParams& beam, double zeta0) {
    return reflected_beam(link, beam, zeta0, false);
}

ReflectedBeam anomalous_beam(const LinkGeometry& link, const BeamParams& beam,
                             double zeta0) {
    return reflected_beam(link, beam, zeta0, true);
}

cplx mirror_field(const Vec3& r_p, const LinkGeometry& link, const BeamParams& beam,
                  double zeta0) {
    return reflected_field(r_p, link, beam, mirror_beam(link, beam, zeta0));
}

cplx anomalous_field(const Vec3& r_p, const LinkGeometry& link, const BeamParams& beam,
                     double zeta0) {
    return reflected_field(r_p, link, beam, anomalous_beam(link, beam, zeta0));
}

double anomalous_gml(const LinkGeometry& link, const BeamParams& beam, double zeta0,
                     int n) {
    const ReflectedBeam rb = anomalous_beam(link, beam, zeta0);
    const double sum = integrate_disc(
        [&](double x, double y) {
            return rb.peak_intensity *
                   std::exp(-2.0 * x * x / (rb.w_x * rb.w_x) -
                            2.0 * y * y / (rb.w_y * rb.w_y));
        },
        link.lens_radius, n);
    return sum / (2.0 * kEta * beam.power());
}

}  // namespace irsfso
