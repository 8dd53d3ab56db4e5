#include "irsfso/special.hpp"

#include "irsfso/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace irsfso {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrtPi = 1.772453850905516027298167483341145183;

// Trapezoid step for the Faddeeva sum. The two error terms of the
// residue-corrected trapezoid rule are exp(-pi^2/h^2) ~ 2e-27 and the lattice
// truncation exp(-(Mh)^2); both sit below double precision.
constexpr double kFadH = 0.4;
constexpr int kFadM = 19;  // covers |t| <= 7.6, exp(-7.6^2) ~ 8e-26

cplx faddeeva_upper(cplx z) {
    const double x = z.real(), y = z.imag();

    // Choose the lattice (integer t = nh or midpoint t = (n+1/2)h) that keeps
    // Re z at least h/4 away from every node; the near-node blowup of the sum
    // and of the pole correction cancel analytically but not numerically.
    const double ratio = x / kFadH;
    const bool use_mid = std::abs(ratio - std::round(ratio)) < 0.25;

    cplx sum = 0.0;
    if (use_mid) {
        for (int n = -kFadM; n < kFadM; ++n) {
            const double t = (n + 0.5) * kFadH;
            sum += std::exp(-t * t) / (z - t);
        }
    } else {
        for (int n = -kFadM; n <= kFadM; ++n) {
            const double t = n * kFadH;
            sum += std::exp(-t * t) / (z - t);
        }
    }
    cplx w = cplx(0.0, kFadH / kPi) * sum;

    // Pole correction for the strip 0 <= Im z < pi/h; above it the bare
    // trapezoid is already exponentially exact. On the real axis the
    // correction reduces to exactly exp(-x^2), the known real part of w.
    if (y < kPi / kFadH) {
        const cplx q = std::exp(cplx(0.0, -2.0 * kPi / kFadH) * z);
        w += 2.0 * std::exp(-z * z) / (use_mid ? 1.0 + q : 1.0 - q);
    }
    return w;
}

}  // namespace

cplx faddeeva_w(cplx z) {
    if (z.imag() >= 0.0) return faddeeva_upper(z);
    return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

cplx cerf(cplx z) {
    const double az2 = std::norm(z);
    if (az2 <= 0.25) {
        // Maclaurin series; the Faddeeva route would cancel to ~2z/sqrt(pi)
        // and lose relative accuracy for small arguments.
        const cplx z2 = z * z;
        cplx term = z, sum = z;
        for (int n = 1; n < 24; ++n) {
            term *= -z2 / static_cast<double>(n);
            const cplx add = term / static_cast<double>(2 * n + 1);
            sum += add;
            if (std::norm(add) < 1e-36 * std::norm(sum)) break;
        }
        return sum * (2.0 / kSqrtPi);
    }

    const bool flip = z.real() < 0.0;
    const cplx zz = flip ? -z : z;
    const double im2 = zz.imag() * zz.imag();
    if (im2 - zz.real() * zz.real() > 700.0)
        throw std::overflow_error("cerf: exp(Im(z)^2) overflow; use the scaled form");
    const cplx out = 1.0 - std::exp(-zz * zz) * faddeeva_w(cplx(-zz.imag(), zz.real()));
    return flip ? -out : out;
}

cplx scaled_erf_term(cplx sigma, cplx g) {
    const cplx e1 = -g * g;
    const cplx e2 = -sigma * sigma - 2.0 * cplx(0.0, 1.0) * sigma * g;
    if (e1.real() > 700.0 || e2.real() > 700.0)
        throw std::overflow_error("scaled_erf_term: exponent overflow Re=" +
                                  std::to_string(std::max(e1.real(), e2.real())));
    // erf(sigma + i g) flips sign with the real part of its full argument.
    if (sigma.real() - g.imag() >= 0.0) {
        const cplx arg(-sigma.imag() - g.real(), sigma.real() - g.imag());
        return std::exp(e1) - std::exp(e2) * faddeeva_w(arg);
    }
    const cplx arg(sigma.imag() + g.real(), g.imag() - sigma.real());
    return -std::exp(e1) + std::exp(e2) * faddeeva_w(arg);
}

cplx gauss_bracket(cplx b, cplx sb, double s1, double s2, cplx kX) {
    (void)b;
    const cplx g = kX / (2.0 * sb);
    return scaled_erf_term(sb * s1, g) - scaled_erf_term(sb * s2, g);
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double bessel_k(double nu, double x) {
    if (x <= 0.0) throw std::domain_error("bessel_k: requires x > 0");
    if (x > 700.0) throw std::range_error("bessel_k: x beyond accuracy envelope (underflow)");
    return std::cyl_bessel_k(std::abs(nu), x);
}

double gamma_gamma_pdf(double h, double alpha, double beta) {
    if (h <= 0.0) throw std::domain_error("gamma_gamma_pdf: requires h > 0");
    const double ab = alpha * beta;
    const double x = 2.0 * std::sqrt(ab * h);
    if (x > 690.0) return 0.0;  // density below double underflow
    const double lg = 0.5 * (alpha + beta) * std::log(ab) +
                      (0.5 * (alpha + beta) - 1.0) * std::log(h) - std::lgamma(alpha) -
                      std::lgamma(beta) + std::log(2.0);
    return std::exp(lg) * std::cyl_bessel_k(std::abs(alpha - beta), x);
}

double gamma_gamma_cdf(double h, double alpha, double beta) {
    if (h < 0.0) throw std::domain_error("gamma_gamma_cdf: requires h >= 0");
    if (h == 0.0) return 0.0;
    const double cut = gamma_gamma_tail_cut(alpha, beta, 1e-13);
    if (h >= cut) return 1.0;
    const double u_hi = std::sqrt(h);
    const auto f = [&](double u) { return 2.0 * u * gamma_gamma_pdf(u * u, alpha, beta); };
    return integrate_adaptive(f, 0.0, u_hi, 1e-10, 1e-10);
}

double gamma_gamma_tail_cut(double alpha, double beta, double tail) {
    // The tail decays like exp(-2 sqrt(alpha beta h)); seed from that rate,
    // then verify by integrating tail increments until they drop below budget.
    const double ab = alpha * beta;
    double u = (std::log(1.0 / tail) + 25.0) / (2.0 * std::sqrt(ab));
    const auto f = [&](double t) { return 2.0 * t * gamma_gamma_pdf(t * t, alpha, beta); };
    for (int i = 0; i < 60; ++i) {
        const double inc = integrate_adaptive(f, u, 1.5 * u, tail * 1e-3, 1e-6);
        if (inc < tail * 0.1) return u * u;
        u *= 1.5;
    }
    throw std::runtime_error("gamma_gamma_tail_cut: tail did not close");
}

}  // namespace irsfso
