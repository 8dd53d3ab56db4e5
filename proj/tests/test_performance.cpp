#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "irsfso/performance.hpp"
#include "irsfso/special.hpp"
#include "support.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace irsfso;
using testsupport::load_fixture;
using testsupport::rel_err;

namespace {
double db(double x) { return std::pow(10.0, x / 10.0); }
}

TEST_CASE("counter RNG: identical triples replay, different triples diverge") {
    TrialRng a(5, 2, 77);
    TrialRng b(5, 2, 77);
    for (int i = 0; i < 8; ++i) CHECK(a.uniform() == b.uniform());

    TrialRng c(5, 2, 78), d(5, 3, 77), e(6, 2, 77);
    TrialRng base(5, 2, 77);
    const double first = base.uniform();
    // each coordinate of the (seed, stream, trial) triple moves the sequence
    CHECK(c.uniform() != first);
    CHECK(d.uniform() != first);
    CHECK(e.uniform() != first);
}

TEST_CASE("uniform stays strictly inside the unit interval") {
    TrialRng rng(1, 0, 0);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("normal and gamma draws land on their moments") {
    TrialRng rng(11, 0, 0);
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sumsq += x * x;
    }
    CHECK(std::abs(sum / n) < 0.03);
    CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.03));

    for (double shape : {0.7, 2.0, 4.5}) {
        TrialRng g(12, 1, static_cast<uint64_t>(shape * 10));
        double acc = 0.0;
        for (int i = 0; i < 20000; ++i) acc += g.gamma(shape);
        CHECK(acc / 20000 == doctest::Approx(shape).epsilon(0.05));
    }
    CHECK_THROWS_AS((void)rng.gamma(0.0), std::invalid_argument);
}

TEST_CASE("fading draws have unit mean") {
    const FadingParams fp;  // alpha = beta = 2
    TrialRng rng(3, 0, 0);
    double acc = 0.0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) acc += sample_fading(fp, rng);
    CHECK(acc / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("conditional BER: closed Q-sums for one, two, three links") {
    PerfSpec one;
    one.gamma = {4.0};
    CHECK(instantaneous_ber({1.0}, one) ==
          doctest::Approx(qfunc(1.0)).epsilon(1e-14));

    PerfSpec two;
    two.gamma = {4.0, 1.0};
    const double expected2 =
        (2.0 * qfunc(1.0) + qfunc(0.5) + qfunc(1.5)) / 4.0;
    CHECK(instantaneous_ber({1.0, 0.5}, two) ==
          doctest::Approx(expected2).epsilon(1e-14));

    PerfSpec three;
    three.gamma = {4.0, 1.0, 0.25};
    const double expected3 =
        (2.0 * qfunc(1.0) + (qfunc(0.5) + qfunc(1.5)) + (qfunc(0.0) + qfunc(2.0)) +
         (qfunc(-0.5) + qfunc(2.5))) /
        8.0;
    CHECK(instantaneous_ber({1.0, 0.5, 2.0}, three) ==
          doctest::Approx(expected3).epsilon(1e-14));

    CHECK_THROWS_AS((void)instantaneous_ber({1.0}, two), std::invalid_argument);
}

TEST_CASE("instantaneous SINR budget") {
    PerfSpec spec;
    spec.gamma = {100.0, 10.0, 1.0};
    const double sinr = instantaneous_sinr({1.0, 0.5, 2.0}, spec);
    CHECK(sinr == doctest::Approx(100.0 / (1.0 + 2.5 + 4.0)).epsilon(1e-14));
    spec.gamma = {100.0};
    CHECK(instantaneous_sinr({2.0}, spec) == doctest::Approx(400.0).epsilon(1e-14));
}

TEST_CASE("noise-limited average BER reproduces the frozen sweep") {
    const auto ref = load_fixture("performance_ref");
    for (const auto& row : ref["ber1"]) {
        PerfSpec spec;
        spec.gamma = {db(row["g_db"].get<double>())};
        const Estimate e = average_ber(spec, {FadingParams{}}, AverageMethod::kQuad);
        CAPTURE(row["g_db"].get<double>());
        CHECK(rel_err(e.value, row["pe"].get<double>()) < 1e-8);
        CHECK(e.std_error == 0.0);
    }
}

TEST_CASE("two-link average BER reproduces the frozen anchor") {
    const auto ref = load_fixture("performance_ref")["ber2"];
    PerfSpec spec;
    spec.gamma = {db(ref["gn_db"].get<double>()), db(ref["gi_db"].get<double>())};
    const Estimate e =
        average_ber(spec, {FadingParams{}, FadingParams{}}, AverageMethod::kQuad);
    CHECK(rel_err(e.value, ref["pe"].get<double>()) < 1e-6);
}

TEST_CASE("noise-limited outage is the fading CDF at the threshold ratio") {
    const auto ref = load_fixture("performance_ref");
    const double gthr = ref["outage_n2"]["gthr"].get<double>();
    for (const auto& row : ref["outage_nl"]) {
        const double g = db(row["g_db"].get<double>());
        PerfSpec spec;
        spec.gamma = {g};
        spec.gamma_thr = gthr;
        const Estimate e =
            outage_upper_bound(spec, {FadingParams{}}, AverageMethod::kQuad);
        CAPTURE(row["g_db"].get<double>());
        CHECK(rel_err(e.value, row["po"].get<double>()) < 1e-8);
        CHECK(rel_err(e.value, gamma_gamma_cdf(std::sqrt(gthr / g), 2.0, 2.0)) <
              1e-9);
    }
}

TEST_CASE("two-link outage reproduces the frozen anchor") {
    const auto ref = load_fixture("performance_ref")["outage_n2"];
    PerfSpec spec;
    spec.gamma = {db(ref["gn_db"].get<double>()), db(ref["gi_db"].get<double>())};
    spec.gamma_thr = ref["gthr"].get<double>();
    const Estimate e = outage_upper_bound(spec, {FadingParams{}, FadingParams{}},
                                          AverageMethod::kQuad);
    CHECK(rel_err(e.value, ref["po"].get<double>()) < 1e-6);
}

TEST_CASE("Monte Carlo averaging agrees with quadrature within three sigma") {
    McOptions mc;
    mc.trials = 200000;
    mc.seed = 7;
    mc.workers = 2;

    PerfSpec one;
    one.gamma = {db(50.0)};
    const double q1 = average_ber(one, {FadingParams{}}, AverageMethod::kQuad).value;
    const Estimate m1 = average_ber(one, {FadingParams{}}, AverageMethod::kMc, mc);
    CHECK(m1.std_error > 0.0);
    CHECK(std::abs(m1.value - q1) <= 3.0 * m1.std_error);

    PerfSpec two;
    two.gamma = {db(60.0), db(45.0)};
    const std::vector<FadingParams> fad2{FadingParams{}, FadingParams{}};
    const double q2 = average_ber(two, fad2, AverageMethod::kQuad).value;
    const Estimate m2 = average_ber(two, fad2, AverageMethod::kMc, mc);
    CHECK(std::abs(m2.value - q2) <= 3.0 * m2.std_error);

    two.gamma_thr = 66.94920517371452;
    const double qo = outage_upper_bound(two, fad2, AverageMethod::kQuad).value;
    const Estimate mo = outage_upper_bound(two, fad2, AverageMethod::kMc, mc);
    CHECK(std::abs(mo.value - qo) <= 3.0 * mo.std_error);
}

TEST_CASE("Monte Carlo estimates are bitwise independent of the worker count") {
    PerfSpec spec;
    spec.gamma = {db(55.0), db(40.0)};
    spec.gamma_thr = 10.0;
    const std::vector<FadingParams> fad{FadingParams{}, FadingParams{}};
    McOptions mc;
    mc.trials = 20000;
    mc.seed = 42;

    mc.workers = 1;
    const Estimate b1 = average_ber(spec, fad, AverageMethod::kMc, mc);
    const Estimate o1 = outage_upper_bound(spec, fad, AverageMethod::kMc, mc);
    mc.workers = 3;
    const Estimate b3 = average_ber(spec, fad, AverageMethod::kMc, mc);
    const Estimate o3 = outage_upper_bound(spec, fad, AverageMethod::kMc, mc);
    const Estimate b3r = average_ber(spec, fad, AverageMethod::kMc, mc);

    CHECK(b1.value == b3.value);
    CHECK(b1.std_error == b3.std_error);
    CHECK(b3.value == b3r.value);
    CHECK(o1.value == o3.value);
    CHECK(o1.std_error == o3.std_error);
}

TEST_CASE("series expansion matches quadrature away from its pole") {
    const double gn = 1e6;
    const FadingParams fp{2.1, 1.3};
    const SeriesResult s = ber_noise_limited_series(gn, fp.alpha, fp.beta);
    PerfSpec spec;
    spec.gamma = {gn};
    const double q = average_ber(spec, {fp}, AverageMethod::kQuad).value;
    CHECK(rel_err(s.value, q) < 1e-2);
    CHECK(s.truncation_bound < 1e-3 * s.value);

    // integer alpha - beta is the documented pole
    CHECK_THROWS_AS((void)ber_noise_limited_series(gn, 2.0, 2.0), std::domain_error);
    CHECK_THROWS_AS((void)ber_noise_limited_series(gn, 2.3, 1.3), std::domain_error);
    CHECK_THROWS_AS((void)ber_noise_limited_series(-1.0, 2.1, 1.3),
                    std::invalid_argument);
}

TEST_CASE("capacity bound and threshold SNR are inverses") {
    const double rate = 1.7e9, bw = 1e9;
    const double thr = capacity_threshold_snr(rate, bw);
    CHECK(rel_err(thr, 66.94920517371452) < 1e-12);
    CHECK(rel_err(capacity_lower_bound(thr, bw), rate) < 1e-12);
    // doubling the rate (time-division slots) raises the threshold steeply
    const double thr2 = capacity_threshold_snr(2.0 * rate, bw);
    CHECK(rel_err(thr2, 2.0 * M_PI / M_E * (std::exp(6.8) - 1.0)) < 1e-12);
    CHECK_THROWS_AS((void)capacity_lower_bound(-1.0, bw), std::invalid_argument);
    CHECK_THROWS_AS((void)capacity_threshold_snr(rate, 0.0), std::invalid_argument);
}

TEST_CASE("input validation on the averaging front door") {
    PerfSpec spec;  // empty budget
    CHECK_THROWS_AS((void)average_ber(spec, {}, AverageMethod::kQuad),
                    std::invalid_argument);
    spec.gamma = {1.0, 1.0};
    CHECK_THROWS_AS((void)average_ber(spec, {FadingParams{}}, AverageMethod::kQuad),
                    std::invalid_argument);
    spec.gamma = {1.0};
    spec.gamma_thr = -1.0;
    CHECK_THROWS_AS(
        (void)outage_upper_bound(spec, {FadingParams{}}, AverageMethod::kQuad),
        std::invalid_argument);
    McOptions mc;
    mc.trials = 0;
    spec.gamma_thr = 1.0;
    CHECK_THROWS_AS(
        (void)average_ber(spec, {FadingParams{}}, AverageMethod::kMc, mc),
        std::invalid_argument);
}
