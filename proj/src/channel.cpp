#include "irsfso/channel.hpp"

#include "irsfso/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace irsfso {

namespace {

constexpr double kMaxExp = 700.0;  // exp() beyond this overflows double

cplx guarded_exp(const cplx& z) {
    if (z.real() > kMaxExp)
        throw std::overflow_error(
            "closed-form gain overflow: analytic continuation diverged");
    return std::exp(z);
}

// Composite Simpson over [a, b] with n points (n odd).
cplx simpson_c(const std::function<cplx(double)>& f, double a, double b, long n) {
    const double h = (b - a) / static_cast<double>(n - 1);
    cplx acc = f(a) + f(b);
    for (long i = 1; i + 1 < n; ++i)
        acc += f(a + h * static_cast<double>(i)) * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

long make_odd(long n) { return (n % 2 == 0) ? n + 1 : n; }

// Sample count for an oscillatory Simpson integral from the worst local phase
// rate. target_per_cycle samples per 2*pi; throws once the cap is exceeded,
// and rejects explicit resolutions that would step more than pi/4 of phase.
long resolve_samples(double max_phase_rate, double length, long requested,
                     long floor_n, long cap_n, double target_per_cycle) {
    if (requested > 0) {
        const long n = make_odd(std::max<long>(requested, 3));
        const double step = length / static_cast<double>(n - 1);
        if (max_phase_rate * step > M_PI / 4.0)
            throw std::runtime_error(
                "hf_oracle_field: resolution insufficient (phase advance per step "
                "exceeds pi/4)");
        return n;
    }
    const double cycles = max_phase_rate * length / (2.0 * M_PI);
    const double want = cycles * target_per_cycle + 1.0;
    if (want > static_cast<double>(cap_n))
        throw std::runtime_error(
            "hf_oracle_field: resolution insufficient (required sample count "
            "exceeds the supported cap)");
    return make_odd(std::max<long>(floor_n, static_cast<long>(want)));
}

double max_abs_on(const std::function<double(double)>& f, double a, double b, int n) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = a + (b - a) * i / static_cast<double>(n - 1);
        m = std::max(m, std::abs(f(t)));
    }
    return m;
}

cplx separable_field(const Vec3& r_p, const LinkGeometry& link, const Tile& tile,
                     const BeamParams& beam, long resolution) {
    const IncidentBeamFrame frame = incident_frame(beam, link.ls, link.r_l0);
    const double k = beam.k();
    const double ctl = std::cos(link.ls.theta);
    const double stl = std::sin(link.ls.theta);
    const cplx nu_s = frame.nu * (stl * stl);
    const Vec3 r_o = lens_to_irs_frame(r_p, link.pd, link.r_p0);
    const double ro = r_o.norm();
    const double xo = r_o.x;
    const double yo = r_o.y;
    const double xl0 = link.r_l0.x;
    const double yl0 = link.r_l0.y;
    const PhaseProfile& pf = tile.profile;
    const double xt = pf.r_qt.x;
    const double yt = pf.r_qt.y;

    const double x_lo = tile.center.x - 0.5 * tile.lx;
    const double x_hi = tile.center.x + 0.5 * tile.lx;
    const double y_lo = tile.center.y - 0.5 * tile.ly;
    const double y_hi = tile.center.y + 0.5 * tile.ly;

    // Quadratic expansion of |r_o - r| along each axis (t3 and higher dropped,
    // exactly the truncation the closed form uses).
    const auto gx = [&](double x) {
        const double tx = -x * xo / ro + x * x / (2.0 * ro) -
                          x * x * xo * xo / (2.0 * ro * ro * ro);
        const double ph = pf.phx * (x - xt) + pf.phx2 * (x - xt) * (x - xt);
        const cplx expo = -nu_s * ((x - xl0) * (x - xl0)) +
                          cplx(0.0, k * (x * ctl + tx - ph));
        return std::exp(expo);
    };
    const auto gy = [&](double y) {
        const double ty = -y * yo / ro + y * y / (2.0 * ro) -
                          y * y * yo * yo / (2.0 * ro * ro * ro);
        const double ph = pf.phy * (y - yt) + pf.phy2 * (y - yt) * (y - yt);
        const cplx expo = -frame.nu * ((y - yl0) * (y - yl0)) +
                          cplx(0.0, k * (ty - ph));
        return std::exp(expo);
    };

    const auto rate_x = [&](double x) {
        const double txp = -xo / ro + x / ro - x * xo * xo / (ro * ro * ro);
        const double php = pf.phx + 2.0 * pf.phx2 * (x - xt);
        return k * (ctl + txp - php) - 2.0 * nu_s.imag() * (x - xl0);
    };
    const auto rate_y = [&](double y) {
        const double typ = -yo / ro + y / ro - y * yo * yo / (ro * ro * ro);
        const double php = pf.phy + 2.0 * pf.phy2 * (y - yt);
        return k * (typ - php) - 2.0 * frame.nu.imag() * (y - yl0);
    };

    const long nx = resolve_samples(max_abs_on(rate_x, x_lo, x_hi, 33), x_hi - x_lo,
                                    resolution, 20001, 2000001, 128.0);
    const long ny = resolve_samples(max_abs_on(rate_y, y_lo, y_hi, 33), y_hi - y_lo,
                                    resolution, 20001, 2000001, 128.0);

    const cplx ix = simpson_c(gx, x_lo, x_hi, nx);
    const cplx iy = simpson_c(gy, y_lo, y_hi, ny);

    const double amp = beam.peak_field * beam.waist * frame.zeta_in / frame.w_at;
    const double gouy = std::atan(frame.d_hat / beam.rayleigh());
    const cplx pref = 1.0 / (cplx(0.0, 1.0) * beam.wavelength * ro) *
                      std::exp(cplx(0.0, k * ro)) * amp *
                      std::exp(cplx(0.0, gouy - k * frame.d_hat)) * tile.zeta() *
                      std::exp(cplx(0.0, -k * pf.ph0));
    return pref * ix * iy;
}

cplx exact2d_field(const Vec3& r_p, const LinkGeometry& link, const Tile& tile,
                   const BeamParams& beam, long resolution) {
    const double lam = beam.wavelength;
    if (std::max(tile.lx, tile.ly) > 2e3 * lam)
        throw std::invalid_argument(
            "hf_oracle_field: exact2d needs a scaled geometry (tile extent above "
            "2e3 wavelengths)");

    const IncidentBeamFrame frame = incident_frame(beam, link.ls, link.r_l0);
    const double k = beam.k();
    const double ctl = std::cos(link.ls.theta);
    const Vec3 r_o = lens_to_irs_frame(r_p, link.pd, link.r_p0);
    const PhaseProfile& pf = tile.profile;
    const double xt = pf.r_qt.x;
    const double yt = pf.r_qt.y;
    const double xl0 = link.r_l0.x;
    const double yl0 = link.r_l0.y;

    const double x_lo = tile.center.x - 0.5 * tile.lx;
    const double x_hi = tile.center.x + 0.5 * tile.lx;
    const double y_lo = tile.center.y - 0.5 * tile.ly;
    const double y_hi = tile.center.y + 0.5 * tile.ly;

    const auto dist = [&](double x, double y) {
        const double dx = r_o.x - x;
        const double dy = r_o.y - y;
        return std::sqrt(dx * dx + dy * dy + r_o.z * r_o.z);
    };
    // d/dx of the total integrand phase: conjugated incident phase, kernel
    // phase k*s, and the profile.
    const auto rate_x = [&](double x, double y) {
        return k * (ctl - (x - xl0) / frame.r_x + (x - r_o.x) / dist(x, y) -
                    pf.phx - 2.0 * pf.phx2 * (x - xt));
    };
    const auto rate_y = [&](double x, double y) {
        return k * (-(y - yl0) / frame.r_y + (y - r_o.y) / dist(x, y) - pf.phy -
                    2.0 * pf.phy2 * (y - yt));
    };
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            const double x = x_lo + (x_hi - x_lo) * i / 8.0;
            const double y = y_lo + (y_hi - y_lo) * j / 8.0;
            mx = std::max(mx, std::abs(rate_x(x, y)));
            my = std::max(my, std::abs(rate_y(x, y)));
        }
    const long nx = resolve_samples(mx, x_hi - x_lo, resolution, 801, 8001, 32.0);
    const long ny = resolve_samples(my, y_hi - y_lo, resolution, 801, 8001, 32.0);

    const auto inner = [&](double x) {
        return simpson_c(
            [&](double y) {
                const double s = dist(x, y);
                const double phi_q =
                    k * (pf.ph0 + pf.phx * (x - xt) + pf.phy * (y - yt) +
                         pf.phx2 * (x - xt) * (x - xt) +
                         pf.phy2 * (y - yt) * (y - yt));
                const cplx kern = std::exp(cplx(0.0, k * s)) / s;
                return incident_field(Vec3{x, y, 0.0}, frame, beam) *
                       std::exp(cplx(0.0, -phi_q)) * kern;
            },
            y_lo, y_hi, ny);
    };
    const cplx total = simpson_c(inner, x_lo, x_hi, nx);
    return total * tile.zeta() / (cplx(0.0, 1.0) * lam);
}

// ---------------------------------------------------------------------------
// Closed-form GML machinery shared by the in-plane and out-of-plane paths.

struct T2Tile {
    cplx a, b;        // lens-independent linear-phase symbols
    cplx xh, yh;      // the same symbols frozen at the reference lens point
    cplx ibx, iby;    // 1 / b_x, 1 / b_y
    cplx log_half;    // log of this tile's half of the pair prefactor
    bool dead = false;  // prefactor underflowed to zero: contributes nothing
};

struct T2Link {
    double k = 0.0;
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    double a_tilde = 0.0;  // half-width of the equal-area square lens
    std::vector<T2Tile> tiles;
};

T2Link assemble(const LinkGeometry& link, const std::vector<Tile>& tiles,
                const BeamParams& beam, bool enforce_regime) {
    if (tiles.empty())
        throw std::invalid_argument("closed-form gain needs at least one tile");
    T2Link out;
    const double a = link.lens_radius;
    out.a_tilde = std::sqrt(M_PI) * a / 2.0;
    out.tiles.reserve(tiles.size());
    for (const Tile& t : tiles) {
        const TileFieldCoefficients tc =
            tile_coefficients(link, t, beam, enforce_regime);
        out.k = tc.k;
        out.c1 = tc.c1;
        out.c2 = tc.c2;
        out.c3 = tc.c3;
        out.c4 = tc.c4;
        T2Tile tt;
        tt.a = tc.x0;
        tt.b = tc.y0;
        tt.ibx = 1.0 / tc.bx;
        tt.iby = 1.0 / tc.by;
        // Edge terms frozen at the representative lens point (a/2, a/2).
        tt.xh = tc.x0 + (tc.c1 + tc.c2) * a / 2.0;
        tt.yh = tc.y0 + (tc.c3 + tc.c4) * a / 2.0;
        const cplx brx = gauss_bracket(tc.bx, tc.sqrt_bx, t.center.x + 0.5 * t.lx,
                                       t.center.x - 0.5 * t.lx, tc.k * tt.xh);
        const cplx bry = gauss_bracket(tc.by, tc.sqrt_by, t.center.y + 0.5 * t.ly,
                                       t.center.y - 0.5 * t.ly, tc.k * tt.yh);
        const cplx full = tc.c_pref * tc.c_q;
        if (full == cplx(0.0) || brx == cplx(0.0) || bry == cplx(0.0)) {
            tt.dead = true;
        } else {
            tt.log_half = std::log(full) - std::log(tc.sqrt_bx) -
                          std::log(tc.sqrt_by) + std::log(brx) + std::log(bry) +
                          std::log(M_PI / 4.0);
        }
        out.tiles.push_back(tt);
    }
    return out;
}

struct T2Pair {
    cplx rho_x, rho_y, rho_xy;
    cplx vrho_x, vrho_y;  // linear-term coefficients
    cplx corr;            // constant exponent (prefactor folded in as log)
};

T2Pair make_pair(const T2Link& L, const T2Tile& tq, const T2Tile& ts) {
    const double k2 = L.k * L.k;
    const cplx ibxq = tq.ibx;
    const cplx ibxs = std::conj(ts.ibx);
    const cplx ibyq = tq.iby;
    const cplx ibys = std::conj(ts.iby);
    T2Pair p;
    p.rho_x = k2 / 4.0 * (L.c1 * L.c1 * (ibxq + ibxs) + L.c3 * L.c3 * (ibyq + ibys));
    p.rho_y = k2 / 4.0 * (L.c2 * L.c2 * (ibxq + ibxs) + L.c4 * L.c4 * (ibyq + ibys));
    p.rho_xy = k2 / 2.0 * (L.c1 * L.c2 * (ibxq + ibxs) + L.c3 * L.c4 * (ibyq + ibys));
    const cplx vx = tq.a * ibxq + std::conj(ts.a) * ibxs;
    const cplx vy = tq.b * ibyq + std::conj(ts.b) * ibys;
    p.vrho_x = k2 / 2.0 * (L.c1 * vx + L.c3 * vy);
    p.vrho_y = k2 / 2.0 * (L.c2 * vx + L.c4 * vy);
    p.corr = -k2 / 4.0 *
                 ((tq.a * tq.a - tq.xh * tq.xh) * ibxq +
                  std::conj(ts.a * ts.a - ts.xh * ts.xh) * ibxs +
                  (tq.b * tq.b - tq.yh * tq.yh) * ibyq +
                  std::conj(ts.b * ts.b - ts.yh * ts.yh) * ibys) +
             tq.log_half + std::conj(ts.log_half);
    return p;
}

// (exponent, mantissa) decomposition of exp(q^2) * [erf(q + sg) - erf(q - sg)]
// via the Faddeeva function; the exp(q^2) constants survive only when the two
// erf arguments straddle the imaginary axis.
struct BracketTerms {
    cplx expo[3];
    cplx mant[3];
    int count = 0;
};

BracketTerms bracket_terms(const cplx& q, const cplx& sg) {
    BracketTerms bt;
    const cplx z1 = q + sg;
    const cplx z2 = q - sg;
    const cplx j(0.0, 1.0);
    bt.expo[bt.count] = -2.0 * q * sg - sg * sg;
    bt.mant[bt.count] = (z1.real() >= 0.0) ? -faddeeva_w(j * z1) : faddeeva_w(-j * z1);
    ++bt.count;
    bt.expo[bt.count] = 2.0 * q * sg - sg * sg;
    bt.mant[bt.count] = (z2.real() >= 0.0) ? faddeeva_w(j * z2) : -faddeeva_w(-j * z2);
    ++bt.count;
    if (z1.real() >= 0.0 && z2.real() < 0.0) {
        bt.expo[bt.count] = q * q;
        bt.mant[bt.count] = 2.0;
        ++bt.count;
    }
    return bt;
}

double finish(const cplx& total, const BeamParams& beam) {
    const double denom = 2.0 * kEta * beam.power();
    const double re = total.real() / denom;
    const double im = total.imag() / denom;
    if (std::abs(im) > 1e-9 * std::max(std::abs(re), 1e-300))
        throw std::domain_error(
            "closed-form gain: Hermitian double sum left a non-real residue");
    return re;
}

}  // namespace

cplx hf_oracle_field(const Vec3& r_p, const LinkGeometry& link, const Tile& tile,
                     const BeamParams& beam, OracleMode mode, long resolution) {
    switch (mode) {
        case OracleMode::kSeparable1d:
            return separable_field(r_p, link, tile, beam, resolution);
        case OracleMode::kExact2d:
            return exact2d_field(r_p, link, tile, beam, resolution);
    }
    throw std::invalid_argument("hf_oracle_field: unknown mode");
}

double gml_lens_quadrature(const LinkGeometry& link, const std::vector<Tile>& tiles,
                           const BeamParams& beam, int n, bool enforce_regime) {
    if (tiles.empty())
        throw std::invalid_argument("gml_lens_quadrature needs at least one tile");
    std::vector<TileFieldCoefficients> tcs;
    tcs.reserve(tiles.size());
    for (const Tile& t : tiles)
        tcs.push_back(tile_coefficients(link, t, beam, enforce_regime));

    const double sum = integrate_disc(
        [&](double x, double y) {
            cplx e(0.0, 0.0);
            const Vec3 rp{x, y, 0.0};
            for (size_t i = 0; i < tiles.size(); ++i)
                e += tile_field(rp, tcs[i], tiles[i]);
            return std::norm(e);
        },
        link.lens_radius, n);
    return sum / (2.0 * kEta * beam.power());
}

double gml_out_of_plane(const LinkGeometry& link, const std::vector<Tile>& tiles,
                        const BeamParams& beam, const GmlOptions& opts) {
    const T2Link L = assemble(link, tiles, beam, opts.enforce_regime);
    const double at = L.a_tilde;
    cplx total(0.0, 0.0);
    for (const T2Tile& tq : L.tiles) {
        for (const T2Tile& ts : L.tiles) {
            if (tq.dead || ts.dead) continue;
            const T2Pair p = make_pair(L, tq, ts);
            if (!(p.rho_x.real() > 0.0) || !(p.rho_y.real() > 0.0))
                throw std::domain_error(
                    "closed-form gain: lens Gaussian exponent lost positivity");
            const cplx sq = std::sqrt(p.rho_x);
            const cplx sg = sq * at;

            const auto integrand = [&](double yp) {
                const cplx q = (p.rho_xy * yp + p.vrho_x) / (2.0 * sq);
                const cplx ey = p.corr - p.rho_y * (yp * yp) - p.vrho_y * yp;
                const BracketTerms bt = bracket_terms(q, sg);
                cplx acc(0.0, 0.0);
                for (int i = 0; i < bt.count; ++i)
                    acc += guarded_exp(ey + bt.expo[i]) * bt.mant[i];
                return acc;
            };

            double scale = 0.0;
            for (int i = 0; i < 17; ++i)
                scale = std::max(scale, std::abs(integrand(-at + 2.0 * at * i / 16.0)));
            const double abs_tol = opts.abs_tol * std::max(scale * 2.0 * at, 1e-300);
            const cplx iy = integrate_adaptive_c(integrand, -at, at, abs_tol, 1e-9);
            total += iy * (std::sqrt(M_PI) / 2.0) / sq;
        }
    }
    return finish(total, beam);
}

double gml_in_plane(const LinkGeometry& link, const std::vector<Tile>& tiles,
                    const BeamParams& beam, const GmlOptions& opts) {
    const T2Link L = assemble(link, tiles, beam, opts.enforce_regime);
    const double at = L.a_tilde;
    cplx total(0.0, 0.0);
    for (const T2Tile& tq : L.tiles) {
        for (const T2Tile& ts : L.tiles) {
            if (tq.dead || ts.dead) continue;
            const T2Pair p = make_pair(L, tq, ts);
            if (std::abs(p.rho_xy) > 1e-9 * std::abs(p.rho_x + p.rho_y))
                throw std::domain_error(
                    "gml_in_plane: geometry is not in-plane (x/y lens coupling "
                    "present); use gml_out_of_plane");
            if (!(p.rho_x.real() > 0.0) || !(p.rho_y.real() > 0.0))
                throw std::domain_error(
                    "closed-form gain: lens Gaussian exponent lost positivity");
            const cplx sqx = std::sqrt(p.rho_x);
            const cplx sqy = std::sqrt(p.rho_y);
            const cplx corr =
                p.corr + std::log(M_PI / (4.0 * sqx * sqy));
            const BracketTerms bx = bracket_terms(p.vrho_x / (2.0 * sqx), sqx * at);
            const BracketTerms by = bracket_terms(p.vrho_y / (2.0 * sqy), sqy * at);
            for (int i = 0; i < bx.count; ++i)
                for (int j = 0; j < by.count; ++j)
                    total += guarded_exp(corr + bx.expo[i] + by.expo[j]) *
                             bx.mant[i] * by.mant[j];
        }
    }
    return finish(total, beam);
}

double atmospheric_loss(double d_l, double d_p, double kappa_db_per_m) {
    if (d_l < 0.0 || d_p < 0.0)
        throw std::invalid_argument("atmospheric_loss: negative path length");
    return std::pow(10.0, -kappa_db_per_m * (d_l + d_p) / 10.0);
}

ChannelGain compose_channel(double h_irs, double h_p, double h_a) {
    if (h_irs < 0.0 || h_p < 0.0 || h_a < 0.0)
        throw std::invalid_argument("compose_channel: amplitudes must be non-negative");
    ChannelGain g;
    g.h_irs = h_irs;
    g.h_p = h_p;
    g.h_a = h_a;
    g.h = h_irs * h_p * h_a;
    return g;
}

}  // namespace irsfso
