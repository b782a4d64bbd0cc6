#include "qedkit/overdispersion.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace qedkit;
using od::CountSample;
using od::OverdispersedSpec;

namespace {

CountSample nb_sample(double a, double b, std::size_t n, std::uint64_t seed) {
    rng::Philox gen(seed, 1);
    CountSample s;
    s.counts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.counts.push_back(gen.poisson(gen.gamma(a) * b));
    return s;
}

} // namespace

TEST_CASE("robust hedge stays below beta and approaches it for large b") {
    // b -> infinity at fixed mean 10^3
    const OverdispersedSpec big{1e3 / 1e6, 1e6, 1.0};
    const auto h = od::robust_hedge(big);
    CHECK(h.beta_n < 1.0);
    CHECK(h.beta_n / 1.0 > 0.999);
    // monotone approach along b
    double prev = 0.0;
    for (double b : {0.5, 1.0, 4.0, 20.0, 100.0}) {
        const OverdispersedSpec spec{50.0 / b, b, 1.0};
        const double bn = od::robust_hedge(spec).beta_n;
        CHECK(bn < 1.0);
        CHECK(bn > prev);
        prev = bn;
    }
}

TEST_CASE("fitted X-ray parameters give a corrected hedge below beta") {
    const double a = 95.68, b = 0.7297;
    const double mu = a * b, sigma = std::sqrt(a * b * (b + 1.0));
    const double beta = (75.0 - mu) / sigma;  // s = 75 slots
    const OverdispersedSpec spec{a, b, beta};
    const auto h = od::robust_hedge(spec);
    CHECK(h.beta_n < beta);
    CHECK(h.beta_n > 0.0);
}

TEST_CASE("sigma~ = sigma + b beta_n + O(1) across a wide grid") {
    for (double a : {10.0, 100.0, 1000.0, 10000.0}) {
        for (double b : {0.5, 2.0, 8.0}) {
            const OverdispersedSpec spec{a, b, 0.8};
            const auto h = od::robust_hedge(spec);
            const double sigma = std::sqrt(spec.sigma2());
            CHECK(std::fabs(h.sigma_tilde - (sigma + b * h.beta_n)) < 2.0);
        }
    }
}

TEST_CASE("robust and classic measures coincide near the Poisson limit") {
    // both b -> 0 and sigma_n -> infinity are needed for the gap to close
    const OverdispersedSpec spec{1e8, 0.005, 1.0};
    const auto r = od::robust_measures(spec);
    const auto c = od::classic_measures(spec);
    CHECK(std::fabs(r.mean_queue - c.mean_queue) / r.mean_queue < 0.005);
}

TEST_CASE("table scaling round trip") {
    const OverdispersedSpec spec = OverdispersedSpec::from_capacity(50, 1.0, 0.6);
    CHECK(spec.capacity() == doctest::Approx(50.0).epsilon(1e-10));
    // mu_n = n, sigma_n^2 = n^{2 delta}
    const double n = spec.mu();
    CHECK(spec.sigma2() == doctest::Approx(std::pow(n, 1.2)).epsilon(1e-9));
}

TEST_CASE("dispersion test behavior at the Poisson boundary") {
    // variance equal to mean: statistic N-1, comfortably inside the body
    CountSample s;
    s.counts = {18, 20, 22, 20, 18, 22, 20, 20, 19, 21};  // mean 20, var 20/..
    const double abar = s.sample_mean();
    const auto t = od::dispersion_test(s, 0.05);
    CHECK(t.statistic == doctest::Approx((s.counts.size() - 1) * s.sample_variance() / abar));
    // constant sample: statistic 0, p ~ 1
    CountSample c;
    c.counts.assign(50, 7);
    const auto tc = od::dispersion_test(c, 0.05);
    CHECK(tc.statistic == doctest::Approx(0.0));
    CHECK(tc.p_value > 0.99);
    CHECK(!tc.reject);
    const auto ns = od::neyman_scott_test(c, 0.05);
    CHECK(ns.statistic < 0.0);
}

TEST_CASE("Neyman-Scott statistic is zero when variance equals mean") {
    CountSample s;
    s.counts = {1, 1, 2, 2, 2, 2, 3, 3};  // mean 2, var = 4/7
    const double ratio = s.sample_variance() / s.sample_mean();
    const double want = std::sqrt(s.counts.size() / 2.0) * (ratio - 1.0);
    CHECK(od::neyman_scott_test(s, 0.05).statistic == doctest::Approx(want));
}

TEST_CASE("Monte-Carlo calibration: Poisson null rejection rate near alpha") {
    int rejects = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        rng::Philox gen(555666, r + 1);
        CountSample s;
        for (int i = 0; i < 500; ++i) s.counts.push_back(gen.poisson(20.0));
        if (od::dispersion_test(s, 0.05).reject) ++rejects;
    }
    const double rate = static_cast<double>(rejects) / reps;
    CHECK(rate >= 0.02);
    CHECK(rate <= 0.09);
}

TEST_CASE("Monte-Carlo power: NB alternative rejected almost surely") {
    int rejects = 0;
    const int reps = 100;
    for (int r = 0; r < reps; ++r) {
        const CountSample s = nb_sample(5.0, 2.0, 1000, 777000 + r);
        if (od::neyman_scott_test(s, 0.05).reject) ++rejects;
    }
    CHECK(rejects >= 96);
}

TEST_CASE("the two tests mostly agree") {
    int agree = 0;
    const int cases = 200;
    for (int r = 0; r < cases; ++r) {
        rng::Philox gen(31337, r + 1);
        CountSample s;
        const bool alt = (r % 2) == 0;
        for (int i = 0; i < 300; ++i)
            s.counts.push_back(alt ? gen.poisson(gen.gamma(30.0) * 0.5) : gen.poisson(15.0));
        const bool d = od::dispersion_test(s, 0.05).reject;
        const bool n = od::neyman_scott_test(s, 0.05).reject;
        if (d == n) ++agree;
    }
    CHECK(agree >= 180);
}

TEST_CASE("profile fit recovers known parameters and matches the mean exactly") {
    const CountSample s = nb_sample(95.68, 0.7297, 10000, 20170301);
    const auto f = od::fit_gamma_poisson(s);
    REQUIRE(f.applicable);
    CHECK(std::fabs(f.a_hat - 95.68) / 95.68 < 0.15);
    CHECK(f.a_hat * f.b_hat == doctest::Approx(s.sample_mean()).epsilon(1e-10));
    // degenerate sample: not overdispersed
    CountSample c;
    c.counts.assign(40, 11);
    CHECK(!od::fit_gamma_poisson(c).applicable);
}

TEST_CASE("bootstrap goodness-of-fit accepts its own model") {
    const CountSample s = nb_sample(40.0, 0.8, 300, 909090);
    const auto g = od::bootstrap_gof(s, 200, 42);
    CHECK(g.p_value > 0.01);
    CHECK(g.statistic > 0.0);
    CHECK(g.replications == 200);
}
