#include "qedkit/mms.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace qedkit;
namespace sf = qedkit::specfun;

namespace {

// Truncated birth-death oracle: forward balance recursion with arbitrary
// death rates, normalized on 0..K.
std::vector<double> birth_death_oracle(double lambda, const std::vector<double>& death, int K) {
    std::vector<double> pi(K + 1);
    pi[0] = 1.0;
    for (int k = 1; k <= K; ++k) pi[k] = pi[k - 1] * lambda / death[k];
    double z = 0.0;
    for (double v : pi) z += v;
    for (double& v : pi) v /= z;
    return pi;
}

} // namespace

TEST_CASE("M/M/1 stationary law is geometric") {
    const auto d = mms::mms_stationary({0.5, 1.0, 1});
    for (int k = 0; k < 20; ++k)
        CHECK(d.pmf(k) == doctest::Approx(0.5 * std::pow(0.5, k)).epsilon(1e-12));
}

TEST_CASE("normalization: head plus closed-form tail equals one") {
    for (auto spec : {mms::MmsSpec{3.0, 1.0, 4}, mms::MmsSpec{80.0, 1.0, 90},
                      mms::MmsSpec{0.9, 1.0, 1}}) {
        const auto d = mms::mms_stationary(spec);
        for (int K : {0, 3, 50, 200})
            CHECK(d.head_sum(K) + d.tail_sum(K) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("stationary law matches the truncated birth-death oracle") {
    const mms::MmsSpec spec{3.0, 1.0, 4};
    std::vector<double> death(201);
    for (int k = 1; k <= 200; ++k) death[k] = std::min(k, spec.s) * spec.mu;
    const auto oracle = birth_death_oracle(spec.lambda, death, 200);
    const auto d = mms::mms_stationary(spec);
    for (int k = 0; k <= 60; ++k) CHECK(std::fabs(d.pmf(k) - oracle[k]) < 1e-10);
}

TEST_CASE("Erlang-C values") {
    CHECK(mms::mms_metrics({10.0, 1.0, 12}).delay_prob == doctest::Approx(0.449).epsilon(2e-3));
    CHECK(mms::mms_metrics({0.37, 1.0, 1}).delay_prob == doctest::Approx(0.37).epsilon(1e-12));
    // long-double direct summation oracle at lambda=100, s=111
    const double R = 100.0;
    const int s = 111;
    long double head = 0.0L, term = 1.0L;
    for (int k = 1; k < s; ++k) {
        term *= R / k;
        head += term * (1.0L - R / s);
    }
    head += 1.0L * (1.0L - R / s);  // k = 0 term
    term *= R / s;                  // R^s/s!
    const long double erlc = term / (head + term);
    CHECK(mms::mms_metrics({R, 1.0, s}).delay_prob ==
          doctest::Approx((double)erlc).epsilon(1e-11));
    CHECK_THROWS_AS(mms::mms_metrics({2.0, 1.0, 2}), instability_error);
}

TEST_CASE("Erlang-C decreases in s at fixed load") {
    double prev = 1.0;
    for (int s = 11; s <= 30; ++s) {
        const double c = mms::mms_metrics({10.0, 1.0, s}).delay_prob;
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("Erlang-B against a log-space summation oracle") {
    CHECK(mms::erlang_b(5.0, 0) == doctest::Approx(1.0));
    CHECK(mms::erlang_b(1.0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    for (auto [R, s] : std::vector<std::pair<double, int>>{{100.0, 110}, {1000.0, 1200},
                                                           {17.3, 20}}) {
        // B = exp(s ln R - lgamma(s+1)) / sum_k exp(k ln R - lgamma(k+1))
        const double top = s * std::log(R) - sf::log_gamma(s + 1.0);
        double denom = 0.0;
        for (int k = 0; k <= s; ++k)
            denom += std::exp(k * std::log(R) - sf::log_gamma(k + 1.0) - top);
        CHECK(std::fabs(mms::erlang_b(R, s) - 1.0 / denom) < 1e-12);
    }
}

TEST_CASE("M/M/s/n against a dense chain solve, plus edge cases") {
    // zero waiting room: every delayed arrival is blocked
    const auto edge = mms::mmsn_metrics({{5.0, 1.0, 6}, 6});
    CHECK(edge.delay_prob == doctest::Approx(edge.block_prob).epsilon(1e-12));
    // dense oracle at lambda=5, s=6, n=8
    const mms::FiniteMmsSpec spec{{5.0, 1.0, 6}, 8};
    std::vector<double> death(9);
    for (int k = 1; k <= 8; ++k) death[k] = std::min(k, 6) * 1.0;
    const auto pi = birth_death_oracle(5.0, death, 8);
    const auto m = mms::mmsn_metrics(spec);
    double delay = 0.0;
    for (int k = 6; k <= 8; ++k) delay += pi[k];
    CHECK(m.delay_prob == doctest::Approx(delay).epsilon(1e-12));
    CHECK(m.block_prob == doctest::Approx(pi[8]).epsilon(1e-12));
    // delay prob below the open-system Erlang-C reference
    const auto finite = mms::mmsn_metrics({{10.0, 1.0, 12}, 20});
    CHECK(finite.delay_prob < 0.449);
}

TEST_CASE("M/M/s/n monotonicity in n") {
    double prev_block = 1.0, prev_delay = 0.0;
    for (int n = 12; n <= 30; ++n) {
        const auto m = mms::mmsn_metrics({{10.0, 1.0, 12}, n});
        CHECK(m.block_prob <= prev_block + 1e-15);
        CHECK(m.delay_prob >= prev_delay - 1e-15);
        prev_block = m.block_prob;
        prev_delay = m.delay_prob;
    }
}

TEST_CASE("Erlang-A: theta = mu collapses to the infinite-server law") {
    const mms::AbandonSpec spec{{8.0, 1.0, 10}, 1.0};
    const auto m = mms::erlang_a_metrics(spec);
    // death rate is k mu, so Q ~ Pois(R): delay = P(Pois(8) >= 10)
    const double want = 1.0 - sf::gamma_q(10.0, 8.0);
    CHECK(m.delay_prob == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("Erlang-A abandonment scaling near the QED value") {
    // sqrt(R) P(abandon) approaches f_a(beta); at beta = 0.5, theta = 1 that
    // is 0.1978 (the 0.3120 in the reference table is the retrial-corrected
    // fixed point, not the plain Erlang-A limit)
    const auto m = mms::erlang_a_metrics({{100.0, 1.0, 105}, 1.0});
    CHECK(std::fabs(m.abandon_prob * 10.0 - 0.1978) < 0.02);
}

TEST_CASE("Erlang-A against a dense truncated-chain oracle") {
    const mms::AbandonSpec spec{{5.0, 1.0, 7}, 0.2};
    const int K = 400;
    std::vector<double> death(K + 1);
    for (int k = 1; k <= K; ++k)
        death[k] = std::min(k, 7) * 1.0 + std::max(k - 7, 0) * 0.2;
    const auto pi = birth_death_oracle(5.0, death, K);
    double delay = 0.0, lq = 0.0;
    for (int k = 0; k <= K; ++k) {
        if (k >= 7) delay += pi[k];
        if (k > 7) lq += (k - 7) * pi[k];
    }
    const auto m = mms::erlang_a_metrics(spec);
    CHECK(m.delay_prob == doctest::Approx(delay).epsilon(1e-10));
    CHECK(m.abandon_prob == doctest::Approx(0.2 * lq / 5.0).epsilon(1e-9));
    CHECK(m.expected_wait == doctest::Approx(lq / 5.0).epsilon(1e-9));
}

TEST_CASE("probabilities stay inside [0,1]") {
    for (auto m : {mms::mmsn_metrics({{10.0, 1.0, 12}, 14}),
                   mms::mmsn_metrics({{100.0, 2.0, 55}, 70})}) {
        CHECK(m.delay_prob >= 0.0);
        CHECK(m.delay_prob <= 1.0);
        CHECK(m.block_prob >= 0.0);
        CHECK(m.block_prob <= 1.0);
    }
}
