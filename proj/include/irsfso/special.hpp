#pragma once

#include <complex>

namespace irsfso {

using cplx = std::complex<double>;

// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
// Full double-precision accuracy on the closed upper half-plane; the lower
// half-plane goes through the reflection w(z) = 2 exp(-z^2) - w(-z), whose
// exp(-z^2) factor is inherently explosive there (callers in this project
// only ever need Im z >= 0).
cplx faddeeva_w(cplx z);

// Complex error function. Relative accuracy <= 1e-10 for |z| <= 50 (1e-12 on
// the real axis for |x| <= 6), documented envelope |z| <= 1e4.
// Throws std::overflow_error when exp(Im(z)^2) would overflow; callers that
// hit that regime must use the scaled form below.
cplx cerf(cplx z);

// exp(-g^2) * erf(sigma + i g), assembled through the Faddeeva function so the
// two exponentially huge halves cancel analytically instead of numerically.
// The branch is selected on Re(sigma + i g) (the sign erf flips on); throws
// std::overflow_error when the *combined* exponent exceeds double range,
// which is how the closed-form field signals a genuine divergence.
cplx scaled_erf_term(cplx sigma, cplx g);

// exp(-kX^2/(4b)) * [erf(sb*s1 + i kX/(2 sb)) - erf(sb*s2 + i kX/(2 sb))]
// with sb = sqrt(b), Re sb >= 0 — the stable evaluation of one axis of the
// closed-form tile integral.
cplx gauss_bracket(cplx b, cplx sb, double s1, double s2, cplx kX);

// Gaussian tail Q(x) = 0.5 erfc(x / sqrt 2).
double qfunc(double x);

// Modified Bessel function of the second kind K_nu(x).
// Domain error for x <= 0; flags the accuracy envelope (x > 700, where the
// result underflows double anyway) with std::range_error.
double bessel_k(double nu, double x);

// Gamma-Gamma fading density: unit-mean product of Gamma(alpha, rate alpha)
// and Gamma(beta, rate beta). Domain error for h <= 0.
double gamma_gamma_pdf(double h, double alpha, double beta);

// CDF of the same distribution by adaptive quadrature of the density under
// the u = sqrt(h) substitution (absolute accuracy <= 1e-8); the substitution
// removes the power-law singularity at 0 when alpha + beta < 2.
double gamma_gamma_cdf(double h, double alpha, double beta);

// Upper quantile helper: smallest H with 1 - cdf(H) < tail. Used to truncate
// fading integrals at tail mass < 1e-8.
double gamma_gamma_tail_cut(double alpha, double beta, double tail);

}  // namespace irsfso
