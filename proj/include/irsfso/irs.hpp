#pragma once

#include "irsfso/beam.hpp"
#include "irsfso/geometry.hpp"
#include "irsfso/special.hpp"

#include <vector>

namespace irsfso {

struct IrsLayout {
    int qx = 1, qy = 1;
    double tile_lx = 0.0, tile_ly = 0.0;  // per-tile extents
    double spacing_x = 0.0, spacing_y = 0.0;
    double total_lx = 0.0, total_ly = 0.0;
    // x-major order: centers[ix*qy + iy], matching the tile enumeration used
    // by the sharing protocols.
    std::vector<Vec3> centers;
};

// Tile sizes are back-computed from the surface totals:
// L_tot = Q*L + (Q-1)*spacing on each axis.
IrsLayout build_layout(double lx_tot, double ly_tot, int qx, int qy,
                       double spacing_x = 0.0, double spacing_y = 0.0);

enum class ProfileKind { kLinear, kQuadratic };

// Tile phase-shift profile: the reflected phase is
//   Phi(r) = k*(ph0 + phx*(x-xt) + phy*(y-yt) + phx2*(x-xt)^2 + phy2*(y-yt)^2)
// anchored at the profile center r_qt = (xt, yt).
struct PhaseProfile {
    double ph0 = 0.0;          // m
    double phx = 0.0, phy = 0.0;
    double phx2 = 0.0, phy2 = 0.0;  // 1/m
    Vec3 r_qt{};
    ProfileKind kind = ProfileKind::kLinear;
};

// Linear profile steering ls -> pd. x_l0 is the beam footprint x-offset used
// in the constant term ph0 = d_p - d_hat; it only matters for the relative
// phase between tiles configured for different pairs (any common constant is
// invisible in |field|).
PhaseProfile lp_profile(const OrientedNode& ls, const OrientedNode& pd,
                        const Vec3& r_qt, double x_l0 = 0.0);
// Quadratic profile: adds the curvature-matching and focusing terms, which
// need the incident-beam frame (for R(d_hat)).
PhaseProfile qp_profile(const OrientedNode& ls, const OrientedNode& pd,
                        const IncidentBeamFrame& frame, const Vec3& r_qt);

// sqrt(|sin theta_p|): scales the tile response so redirection toward a
// shallower outgoing angle cannot create power.
double passivity_factor(double theta_p);

struct Tile {
    Vec3 center{};
    double lx = 0.0, ly = 0.0;
    PhaseProfile profile{};
    double zeta0 = 1.0;      // resistive loss, (0,1]
    double zeta_bar = 1.0;   // passivity factor
    int assigned_pair = -1;  // -1: unowned

    double zeta() const { return zeta0 * zeta_bar; }
};

// Everything in the closed-form tile field that does not depend on the lens
// point. X0/Y0 are the values of the linear-phase symbols X, Y at the lens
// center; the full ones are X = X0 + c1*xp + c2*yp and Y = Y0 + c3*xp + c4*yp.
struct TileFieldCoefficients {
    cplx bx{}, by{};
    cplx sqrt_bx{}, sqrt_by{};  // principal branch, Re >= 0, frozen here
    cplx a0{}, b0{};
    cplx x0{}, y0{};
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0;  // 1/m
    double phi_x = 0, phi_y = 0;   // free-space linear phase gradients
    double delta_q = 0;            // profile constant collected into C_q
    cplx c_pref{};                 // C
    cplx c_q{};                    // C_q = zeta_q * exp(j k delta_q)
    double k = 0;
};

// Assembles the closed-form coefficients for one tile of one link. With
// enforce_regime the "much greater than" preconditions are ratio-checked at
// the documented 10x threshold (d_l vs tile size; d_p vs lens radius,
// footprint offsets, and the intermediate-field distance d_n); pass false to
// evaluate anyway, e.g. in sweeps that deliberately enter the marginal zone
// and label the regime per row.
TileFieldCoefficients tile_coefficients(const LinkGeometry& link, const Tile& tile,
                                        const BeamParams& beam,
                                        bool enforce_regime = true);

// Closed-form reflected field of one tile at lens point r_p.
cplx tile_field(const Vec3& r_p, const TileFieldCoefficients& tc, const Tile& tile);

// Far-field special cases: reflected beam parameters for a conventional
// mirror (circular Gaussian) and an anomalous mirror (elliptical Gaussian
// redirected to theta_p != theta_l).
struct ReflectedBeam {
    double w_x = 0, w_y = 0;  // m
    double r_x = 0, r_y = 0;  // m
    double zeta_t2 = 0;       // composite power efficiency
    double peak_intensity = 0;  // |E(0)|^2, V^2/m^2
};

ReflectedBeam mirror_beam(const LinkGeometry& link, const BeamParams& beam,
                          double zeta0 = 1.0);
ReflectedBeam anomalous_beam(const LinkGeometry& link, const BeamParams& beam,
                             double zeta0 = 1.0);

cplx mirror_field(const Vec3& r_p, const LinkGeometry& link, const BeamParams& beam,
                  double zeta0 = 1.0);
cplx anomalous_field(const Vec3& r_p, const LinkGeometry& link, const BeamParams& beam,
                     double zeta0 = 1.0);

// GML of the anomalous-mirror far-field beam over the circular lens
// (quadrature of the elliptical Gaussian intensity).
double anomalous_gml(const LinkGeometry& link, const BeamParams& beam,
                     double zeta0 = 1.0, int n = 60);

}  // namespace irsfso
