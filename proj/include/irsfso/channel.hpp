#pragma once

#include "irsfso/irs.hpp"

#include <vector>

namespace irsfso {

enum class OracleMode { kSeparable1d, kExact2d };

// Huygens-Fresnel reference field of one tile at lens-plane point r_p,
// evaluated by direct quadrature of the aperture integral (no closed form).
//
// kSeparable1d keeps the quadratic expansion of the propagation distance (the
// same truncation the closed form rests on) so the two axes separate; it is
// valid at real Table-1 scale and is the primary cross-check for the closed
// form. kExact2d integrates the full spherical kernel with no expansion, which
// is only tractable when the tile spans <= 2e3 wavelengths (scaled-geometry
// configurations); it bounds the error of the expansion itself.
//
// resolution = 0 picks the sample count from the worst local phase advance
// (target ~128 samples per cycle, Simpson rule). A fixed resolution is
// rejected if any step would advance the phase by more than pi/4.
cplx hf_oracle_field(const Vec3& r_p, const LinkGeometry& link, const Tile& tile,
                     const BeamParams& beam, OracleMode mode, long resolution = 0);

struct GmlOptions {
    // Absolute tolerance of the lens-axis quadrature, relative to the
    // integrand's own scale (probed on a coarse grid).
    double abs_tol = 1e-8;
    bool enforce_regime = true;
};

// Geometric mean lens-captured power ratio (GML): |sum of tile fields|^2
// integrated over the lens disc, normalized by 2 eta P_l.
//
// gml_out_of_plane: closed-form lens integral along x, adaptive quadrature
// along y_p; valid for any detector azimuth. Throws std::overflow_error when
// the analytic continuation genuinely diverges (the closed form's documented
// failure mode near the intermediate-field boundary).
double gml_out_of_plane(const LinkGeometry& link, const std::vector<Tile>& tiles,
                        const BeamParams& beam, const GmlOptions& opts = {});

// Fully closed form for in-plane geometries (detector azimuth 0 or pi, where
// the x/y cross-coupling vanishes identically). Throws std::domain_error if
// the geometry is not actually in-plane.
double gml_in_plane(const LinkGeometry& link, const std::vector<Tile>& tiles,
                    const BeamParams& beam, const GmlOptions& opts = {});

// Reference evaluation: product Gauss-Legendre quadrature of the closed-form
// tile fields over the true lens disc (no equal-area square substitution, no
// frozen edge terms). This is the engine the protocol evaluations use.
double gml_lens_quadrature(const LinkGeometry& link, const std::vector<Tile>& tiles,
                           const BeamParams& beam, int n = 120,
                           bool enforce_regime = true);

// Power attenuation over the total path at kappa dB/m: 10^(-kappa (d_l+d_p)/10).
double atmospheric_loss(double d_l, double d_p, double kappa_db_per_m);

// Channel amplitude composition: deterministic IRS amplitude (sqrt of a GML),
// atmospheric loss, and the fading realization.
struct ChannelGain {
    double h_irs = 0.0;
    double h_p = 1.0;
    double h_a = 1.0;
    double h = 0.0;
};

ChannelGain compose_channel(double h_irs, double h_p, double h_a);

}  // namespace irsfso
