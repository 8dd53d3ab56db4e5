#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace irsfso {

struct GlRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights, cached per order (thread-safe).
const GlRule& gauss_legendre(int n);

// Fixed-order Gauss-Legendre on [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

// Adaptive bisection with a G20/G40 error estimate per panel. Panels are
// processed left to right so the accumulation order is deterministic.
// abs_tol applies to the whole integral, rel_tol to the running magnitude.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_depth = 24);

// Same machinery for complex-valued integrands (error measured in |.|).
std::complex<double> integrate_adaptive_c(const std::function<std::complex<double>(double)>& f,
                                          double a, double b, double abs_tol, double rel_tol,
                                          int max_depth = 24);

// Product Gauss-Legendre rule over the disc of radius a (polar map), n nodes
// per direction, fixed accumulation order: sum_i sum_j f(x_ij, y_ij) w_ij.
double integrate_disc(const std::function<double(double, double)>& f, double a, int n);

}  // namespace irsfso
