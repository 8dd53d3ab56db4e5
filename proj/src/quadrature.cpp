#include "irsfso/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace irsfso {

namespace {

GlRule compute_gl(int n) {
    GlRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev initial guess, then Newton on P_n via the recurrence.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

std::map<int, GlRule> g_rules;
std::mutex g_rules_mutex;

template <typename T>
T gl_apply(const std::function<T(double)>& f, double a, double b, int n) {
    const GlRule& r = gauss_legendre(n);
    const double c = 0.5 * (b - a), m = 0.5 * (a + b);
    T acc{};
    for (int i = 0; i < n; ++i) acc += f(m + c * r.nodes[i]) * (c * r.weights[i]);
    return acc;
}

template <typename T>
T adaptive_impl(const std::function<T(double)>& f, double a, double b, double abs_tol,
                double rel_tol, int max_depth) {
    const double span = b - a;
    T total{};
    // Explicitly ordered recursion: always descend into the left half first so
    // the floating-point accumulation order is a pure function of the inputs.
    const std::function<void(double, double, int)> panel = [&](double lo, double hi, int depth) {
        const T coarse = gl_apply(f, lo, hi, 20);
        const T fine = gl_apply(f, lo, hi, 40);
        const double err = std::abs(fine - coarse);
        const double tol = std::max(abs_tol * (hi - lo) / span, rel_tol * std::abs(fine));
        if (err <= tol || depth >= max_depth) {
            if (depth >= max_depth && err > 100.0 * std::max(tol, abs_tol))
                throw std::runtime_error("integrate_adaptive: panel refinement exhausted");
            total += fine;
            return;
        }
        const double mid = 0.5 * (lo + hi);
        panel(lo, mid, depth + 1);
        panel(mid, hi, depth + 1);
    };
    panel(a, b, 0);
    return total;
}

}  // namespace

const GlRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    std::lock_guard<std::mutex> lock(g_rules_mutex);
    auto it = g_rules.find(n);
    if (it == g_rules.end()) it = g_rules.emplace(n, compute_gl(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
    return gl_apply(f, a, b, n);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_depth) {
    return adaptive_impl(f, a, b, abs_tol, rel_tol, max_depth);
}

std::complex<double> integrate_adaptive_c(const std::function<std::complex<double>(double)>& f,
                                          double a, double b, double abs_tol, double rel_tol,
                                          int max_depth) {
    return adaptive_impl(f, a, b, abs_tol, rel_tol, max_depth);
}

double integrate_disc(const std::function<double(double, double)>& f, double a, int n) {
    const GlRule& rule = gauss_legendre(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = a * (rule.nodes[i] + 1.0) / 2.0;
        const double wr = rule.weights[i] * (a / 2.0);
        double ring = 0.0;
        for (int j = 0; j < n; ++j) {
            const double th = M_PI * (rule.nodes[j] + 1.0);
            ring += f(r * std::cos(th), r * std::sin(th)) * (rule.weights[j] * M_PI);
        }
        acc += ring * wr * r;
    }
    return acc;
}

}  // namespace irsfso
