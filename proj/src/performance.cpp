#include "irsfso/performance.hpp"

#include "irsfso/quadrature.hpp"
#include "irsfso/special.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace irsfso {

namespace {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

uint64_t splitmix64(uint64_t& s) {
    uint64_t z = (s += kGolden);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

TrialRng::TrialRng(uint64_t seed, uint64_t stream, uint64_t trial) {
    uint64_t s = seed;
    uint64_t a = splitmix64(s);
    s = a ^ (stream * kGolden + 0x5851f42d4c957f2dULL);
    a = splitmix64(s);
    s = a ^ (trial * kGolden + 0x14057b7ef767814fULL);
    splitmix64(s);
    state_ = s;
}

uint64_t TrialRng::next_u64() { return splitmix64(state_); }

double TrialRng::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double TrialRng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double TrialRng::gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1.0) {
        // Boost to shape + 1 and scale back by a uniform power.
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

double sample_fading(const FadingParams& fp, TrialRng& rng) {
    return (rng.gamma(fp.alpha) / fp.alpha) * (rng.gamma(fp.beta) / fp.beta);
}

double instantaneous_ber(const std::vector<double>& h, const PerfSpec& spec) {
    const size_t n = spec.gamma.size();
    if (n == 0 || h.size() != n)
        throw std::invalid_argument("instantaneous_ber: need one amplitude per link");
    const double a = 0.5 * h[0] * std::sqrt(spec.gamma[0]);
    const size_t patterns = size_t{1} << (n - 1);
    double acc = 0.0;
    for (size_t s = 0; s < patterns; ++s) {
        double c = 0.0;
        for (size_t m = 1; m < n; ++m)
            if (s & (size_t{1} << (m - 1))) c += h[m] * std::sqrt(spec.gamma[m]);
        acc += qfunc(a - c) + qfunc(a + c);
    }
    return acc / static_cast<double>(2 * patterns);
}

double instantaneous_sinr(const std::vector<double>& h, const PerfSpec& spec) {
    const size_t n = spec.gamma.size();
    if (n == 0 || h.size() != n)
        throw std::invalid_argument("instantaneous_sinr: need one amplitude per link");
    double denom = 1.0;
    for (size_t m = 1; m < n; ++m) denom += spec.gamma[m] * h[m] * h[m];
    return spec.gamma[0] * h[0] * h[0] / denom;
}

namespace {

// Deterministic Monte Carlo mean: fixed-size trial blocks whose partial sums
// are combined by a pairwise tree in block order, so the float accumulation
// order never depends on the worker count.
constexpr uint64_t kBlock = 8192;

struct Partial {
    double sum = 0.0;
    double sumsq = 0.0;
};

Partial tree_reduce(const std::vector<Partial>& parts, size_t lo, size_t hi) {
    if (hi - lo == 1) return parts[lo];
    const size_t mid = lo + (hi - lo) / 2;
    const Partial a = tree_reduce(parts, lo, mid);
    const Partial b = tree_reduce(parts, mid, hi);
    return Partial{a.sum + b.sum, a.sumsq + b.sumsq};
}

Estimate mc_mean(uint64_t trials, int workers,
                 const std::function<double(uint64_t)>& trial_fn) {
    if (trials == 0) throw std::invalid_argument("mc: zero trials");
    const size_t nblocks = static_cast<size_t>((trials + kBlock - 1) / kBlock);
    std::vector<Partial> parts(nblocks);

    int nw = workers > 0 ? workers
                         : static_cast<int>(std::thread::hardware_concurrency());
    if (nw < 1) nw = 1;
    if (static_cast<size_t>(nw) > nblocks) nw = static_cast<int>(nblocks);

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    const auto run = [&]() {
        try {
            for (;;) {
                const size_t b = next.fetch_add(1);
                if (b >= nblocks) return;
                const uint64_t lo = static_cast<uint64_t>(b) * kBlock;
                const uint64_t hi = std::min<uint64_t>(lo + kBlock, trials);
                Partial p;
                for (uint64_t t = lo; t < hi; ++t) {
                    const double v = trial_fn(t);
                    p.sum += v;
                    p.sumsq += v * v;
                }
                parts[b] = p;
            }
        } catch (...) {
            std::lock_guard<std::mutex> g(err_mu);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (nw == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (int i = 0; i < nw; ++i) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    const Partial tot = tree_reduce(parts, 0, nblocks);
    const double n = static_cast<double>(trials);
    const double mean = tot.sum / n;
    double var = tot.sumsq / n - mean * mean;
    if (var < 0.0) var = 0.0;
    return Estimate{mean, std::sqrt(var / n)};
}

void check_links(const PerfSpec& spec, const std::vector<FadingParams>& fading) {
    if (spec.gamma.empty())
        throw std::invalid_argument("performance: empty SINR budget");
    if (fading.size() != spec.gamma.size())
        throw std::invalid_argument(
            "performance: need fading parameters for every link");
    for (double g : spec.gamma)
        if (!(g >= 0.0)) throw std::invalid_argument("performance: negative gamma");
}

// Nested adaptive fading expectation under u = sqrt(h): integrates
// prod_m 2 u_m f(u_m^2) * inner(h) over the truncated positive orthant.
double fading_expectation(const PerfSpec& spec,
                          const std::vector<FadingParams>& fading,
                          const std::function<double(const std::vector<double>&)>& fn) {
    const size_t n = spec.gamma.size();
    if (n > 3)
        throw std::invalid_argument(
            "quadrature averaging supports at most three links; use Monte Carlo");
    std::vector<double> cuts(n);
    for (size_t m = 0; m < n; ++m)
        cuts[m] = std::sqrt(gamma_gamma_tail_cut(fading[m].alpha, fading[m].beta, 1e-8));

    std::vector<double> h(n, 0.0);
    std::function<double(size_t)> level = [&](size_t m) -> double {
        return integrate_adaptive(
            [&](double u) {
                h[m] = u * u;
                const double w = 2.0 * u * gamma_gamma_pdf(u * u, fading[m].alpha,
                                                           fading[m].beta);
                const double inner = (m + 1 == n) ? fn(h) : level(m + 1);
                return w * inner;
            },
            1e-8, cuts[m], 1e-12, 1e-7);
    };
    return level(0);
}

}  // namespace

Estimate average_ber(const PerfSpec& spec, const std::vector<FadingParams>& fading,
                     AverageMethod method, const McOptions& mc) {
    check_links(spec, fading);
    const size_t n = spec.gamma.size();
    if (method == AverageMethod::kMc) {
        return mc_mean(mc.trials, mc.workers, [&](uint64_t t) {
            std::vector<double> h(n);
            for (size_t m = 0; m < n; ++m) {
                TrialRng rng(mc.seed, m, t);
                h[m] = sample_fading(fading[m], rng);
            }
            return instantaneous_ber(h, spec);
        });
    }
    const double v = fading_expectation(
        spec, fading, [&](const std::vector<double>& h) {
            return instantaneous_ber(h, spec);
        });
    return Estimate{v, 0.0};
}

Estimate outage_upper_bound(const PerfSpec& spec,
                            const std::vector<FadingParams>& fading,
                            AverageMethod method, const McOptions& mc) {
    check_links(spec, fading);
    const size_t n = spec.gamma.size();
    if (!(spec.gamma_thr > 0.0))
        throw std::invalid_argument("outage: gamma_thr must be positive");
    if (!(spec.gamma[0] > 0.0))
        throw std::invalid_argument("outage: desired-link gamma must be positive");

    if (method == AverageMethod::kMc) {
        return mc_mean(mc.trials, mc.workers, [&](uint64_t t) {
            std::vector<double> h(n);
            for (size_t m = 0; m < n; ++m) {
                TrialRng rng(mc.seed, m, t);
                h[m] = sample_fading(fading[m], rng);
            }
            return instantaneous_sinr(h, spec) < spec.gamma_thr ? 1.0 : 0.0;
        });
    }

    // SINR < thr  <=>  h0 < sqrt(thr (1 + sum gamma_m h_m^2) / gamma0), so the
    // innermost integral is the desired link's fading CDF.
    const FadingParams f0 = fading[0];
    if (n == 1) {
        const double v =
            gamma_gamma_cdf(std::sqrt(spec.gamma_thr / spec.gamma[0]), f0.alpha,
                            f0.beta);
        return Estimate{v, 0.0};
    }
    PerfSpec outer;
    outer.gamma.assign(spec.gamma.begin() + 1, spec.gamma.end());
    outer.gamma_thr = spec.gamma_thr;
    std::vector<FadingParams> fouter(fading.begin() + 1, fading.end());
    const double v = fading_expectation(
        outer, fouter, [&](const std::vector<double>& h) {
            double denom = 1.0;
            for (size_t m = 0; m < h.size(); ++m)
                denom += outer.gamma[m] * h[m] * h[m];
            return gamma_gamma_cdf(
                std::sqrt(spec.gamma_thr * denom / spec.gamma[0]), f0.alpha,
                f0.beta);
        });
    return Estimate{v, 0.0};
}

SeriesResult ber_noise_limited_series(double gamma_n, double alpha, double beta,
                                      int terms) {
    if (!(gamma_n > 0.0))
        throw std::invalid_argument("ber series: gamma_n must be positive");
    if (terms < 1) throw std::invalid_argument("ber series: need at least one term");
    const double nu = alpha - beta;
    const double spn = std::sin(M_PI * nu);
    if (std::abs(spn) < 1e-9)
        throw std::domain_error(
            "ber series: alpha - beta is (nearly) an integer, the expansion has "
            "a pole; use quadrature averaging");

    const double c = std::sqrt(gamma_n) / 2.0;
    const double ab = alpha * beta;
    const auto tail = [&](double s) {
        // E[Q(c u)] moment of the u^((s)-1) density slice.
        return std::tgamma((s + 1.0) / 2.0) * std::pow(2.0, s / 2.0 - 1.0) /
               (std::sqrt(M_PI) * s * std::pow(c, s));
    };
    const double front = M_PI / (spn * std::tgamma(alpha) * std::tgamma(beta));

    double value = 0.0;
    double last = 0.0;
    double fact = 1.0;  // j!
    for (int j = 0; j < terms; ++j) {
        if (j > 0) fact *= j;
        const double aj =
            front * std::pow(ab, beta + j) / (fact * std::tgamma(j - nu + 1.0));
        const double bj =
            -front * std::pow(ab, alpha + j) / (fact * std::tgamma(j + nu + 1.0));
        const double term = aj * tail(beta + j) + bj * tail(alpha + j);
        value += term;
        last = std::abs(aj * tail(beta + j)) + std::abs(bj * tail(alpha + j));
    }
    return SeriesResult{value, last};
}

double capacity_lower_bound(double upsilon, double bandwidth_hz) {
    if (!(upsilon >= 0.0) || !(bandwidth_hz > 0.0))
        throw std::invalid_argument("capacity_lower_bound: bad arguments");
    return 0.5 * bandwidth_hz * std::log(1.0 + upsilon * M_E / (2.0 * M_PI));
}

double capacity_threshold_snr(double rate, double bandwidth_hz) {
    if (!(rate > 0.0) || !(bandwidth_hz > 0.0))
        throw std::invalid_argument("capacity_threshold_snr: bad arguments");
    return 2.0 * M_PI / M_E * (std::exp(2.0 * rate / bandwidth_hz) - 1.0);
}

}  // namespace irsfso
