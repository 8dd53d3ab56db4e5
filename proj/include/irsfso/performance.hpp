#pragma once

#include <cstdint>
#include <vector>

namespace irsfso {

struct FadingParams {
    double alpha = 2.0;
    double beta = 2.0;
};

// Counter-based RNG: every (seed, stream, trial) triple opens an independent
// deterministic sequence, so Monte Carlo trials can be computed in any order
// by any number of workers with bitwise-identical results.
class TrialRng {
  public:
    TrialRng(uint64_t seed, uint64_t stream, uint64_t trial);
    double uniform();              // strictly inside (0, 1)
    double normal();               // standard normal
    double gamma(double shape);    // Gamma(shape, 1), shape > 0

  private:
    uint64_t next_u64();
    uint64_t state_;
};

// Unit-mean Gamma-Gamma fading draw: product of Gamma(alpha, rate alpha) and
// Gamma(beta, rate beta).
double sample_fading(const FadingParams& fp, TrialRng& rng);

// Deterministic SINR budget: gamma[0] is the desired link's SNR scale, the
// remaining entries the interferers'. gamma_thr is the outage threshold on
// the instantaneous SINR.
struct PerfSpec {
    std::vector<double> gamma;
    double gamma_thr = 0.0;
};

// Conditional OOK bit error probability for fading amplitudes h (one per
// link, desired first), averaging over the interferers' equiprobable bits
// with the detection threshold placed for the desired amplitude.
double instantaneous_ber(const std::vector<double>& h, const PerfSpec& spec);

// Instantaneous SINR for the same draw: gamma0 h0^2 / (1 + sum gamma_m h_m^2).
double instantaneous_sinr(const std::vector<double>& h, const PerfSpec& spec);

enum class AverageMethod { kMc, kQuad };

struct McOptions {
    uint64_t trials = 1000000;
    uint64_t seed = 1;
    int workers = 0;  // 0: hardware concurrency
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 for quadrature results
};

// Average BER over independent Gamma-Gamma fading on every link.
// kMc averages the conditional BER over fading draws (the noise integral is
// exact per draw, which removes most of the variance); kQuad nests adaptive
// fading integrals under the u = sqrt(h) substitution and supports up to
// three links.
Estimate average_ber(const PerfSpec& spec, const std::vector<FadingParams>& fading,
                     AverageMethod method, const McOptions& mc = {});

// Outage probability P[SINR < gamma_thr], same two methods. The quadrature
// path reduces the innermost integral to the fading CDF, so with one link it
// is fully closed.
Estimate outage_upper_bound(const PerfSpec& spec,
                            const std::vector<FadingParams>& fading,
                            AverageMethod method, const McOptions& mc = {});

// Noise-limited average BER by the small-argument series of the fading
// density. Throws when alpha - beta is an integer (the expansion has a pole
// there); truncation_bound is the magnitude of the first dropped terms.
struct SeriesResult {
    double value = 0.0;
    double truncation_bound = 0.0;
};

SeriesResult ber_noise_limited_series(double gamma_n, double alpha, double beta,
                                      int terms = 30);

// Ergodic capacity lower bound in nats/s for an average electrical SNR
// upsilon, and its inverse: the SINR threshold whose bound equals the target
// rate.
double capacity_lower_bound(double upsilon, double bandwidth_hz);
double capacity_threshold_snr(double rate, double bandwidth_hz);

}  // namespace irsfso
