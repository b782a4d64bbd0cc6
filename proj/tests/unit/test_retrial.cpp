#include "qedkit/retrial.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/rng.hpp"
#include "qedkit/specfun.hpp"

#include <doctest.h>

#include <cmath>

using namespace qedkit;
namespace sf = qedkit::specfun;

TEST_CASE("finite-queue limits against a direct evaluation") {
    const auto lim = retrial::finite_queue_limits({1.0, 1.0});
    const double w = 1.0 - std::exp(-1.0);
    const double want_g = w / (w + sf::std_normal_cdf(1.0) / sf::std_normal_pdf(1.0));
    CHECK(lim.g == doctest::Approx(want_g).epsilon(1e-12));
    CHECK(lim.g == doctest::Approx(0.1538).epsilon(1e-3));
    CHECK(lim.f == doctest::Approx(0.0895).epsilon(1e-2));
}

TEST_CASE("gamma -> infinity collapses to the Halfin-Whitt delay") {
    const auto lim = retrial::finite_queue_limits({0.7, 50.0});
    const double hw = 1.0 / (1.0 + 0.7 * sf::mills_ratio(0.7));
    CHECK(std::fabs(lim.g - hw) < 1e-10);
}

TEST_CASE("limits stay inside (0,1) on the hedge grid") {
    for (double b : {0.25, 0.5, 1.0, 2.0}) {
        for (double g : {0.25, 0.5, 1.0, 2.0}) {
            const auto lim = retrial::finite_queue_limits({b, g});
            CHECK(lim.g > 0.0);
            CHECK(lim.g < 1.0);
            CHECK(lim.f > 0.0);
        }
    }
}

TEST_CASE("Erlang-A limits: symmetry at zero hedge and monotone f") {
    const auto lim0 = retrial::erlang_a_limits(0.0, 1.0);
    CHECK(lim0.g == doctest::Approx(0.5).epsilon(1e-12));
    for (double theta : {0.2, 1.0, 10.0}) {
        double prev = 1e9;
        for (double b = 0.25; b <= 3.0; b += 0.25) {
            const auto lim = retrial::erlang_a_limits(b, theta);
            CHECK(lim.f > 0.0);
            CHECK(lim.f < prev);
            prev = lim.f;
        }
    }
}

TEST_CASE("cloud limits match the finite-queue limits when kappa explodes") {
    // Second stage vanishes as kappa -> infinity; the cloud space hedge is
    // expressed in units sqrt(R/kappa), so gamma_cloud = gamma sqrt(kappa)
    // keeps an absolute buffer of gamma sqrt(R).
    const double kappa = 1e4;
    const auto cl = retrial::cloud_limits({0.8, 1.2 * std::sqrt(kappa), kappa});
    const auto fq = retrial::finite_queue_limits({0.8, 1.2});
    CHECK(std::fabs(cl.g - fq.g) < 1e-3);
    // and with a fixed gamma the buffer shrinks to nothing: delay -> 0
    CHECK(retrial::cloud_limits({0.8, 1.2, kappa}).g < 0.01);
}

TEST_CASE("cloud limits are proper probabilities across kappa") {
    for (double k : {0.02, 0.2, 1.0}) {
        for (double b : {0.5, 1.0}) {
            const auto cl = retrial::cloud_limits({b, 1.0, k});
            CHECK(cl.g > 0.0);
            CHECK(cl.g < 1.0);
            CHECK(cl.f > 0.0);
        }
    }
}

TEST_CASE("fixed points reproduce the reference cells") {
    const auto basic = retrial::approx_with_retrials(retrial::RetrialModel::Basic,
                                                     {0.5, 0.5, 1.0, 1.0}, 100.0);
    CHECK(basic.fixed_point.alpha == doctest::Approx(0.6734).epsilon(1e-4));
    CHECK(basic.delay_prob == doctest::Approx(0.3225).epsilon(1e-4));
    CHECK(basic.loss_prob == doctest::Approx(0.06734).epsilon(1e-3));
    CHECK(basic.fixed_point.residual < 1e-10);

    retrial::RetrialParams ea;
    ea.beta = 1.0;
    ea.theta = 1.0;
    const auto ab = retrial::approx_with_retrials(retrial::RetrialModel::Abandon, ea, 100.0);
    CHECK(ab.fixed_point.alpha == doctest::Approx(0.1005).epsilon(1e-3));
    CHECK(ab.delay_prob == doctest::Approx(0.1842).epsilon(1e-3));
}

TEST_CASE("bisection bracket contains exactly one sign change") {
    rng::Philox gen(998877, 3);
    for (int draw = 0; draw < 200; ++draw) {
        const double beta = 0.1 + 2.9 * gen.uniform();
        const double gamma = 0.1 + 2.9 * gen.uniform();
        const int which = draw % 3;
        const double extra = which == 1 ? 0.05 + 2.0 * gen.uniform()   // kappa
                             : which == 2 ? 0.1 + 9.9 * gen.uniform()  // theta
                                          : 1.0;
        auto f = [&](double b, double g) -> double {
            if (which == 0) return retrial::finite_queue_limits({b, g}).f;
            if (which == 1) return retrial::cloud_limits({b, g, extra}).f;
            return retrial::erlang_a_limits(b, extra).f;
        };
        retrial::ShiftRule rule;
        rule.gamma_shift = which == 1 ? retrial::ShiftRule::GammaShift::InvSqrtKappa
                                      : retrial::ShiftRule::GammaShift::None;
        rule.kappa_or_r = extra;
        // excess(Delta) = Delta + f - beta must cross zero exactly once on a grid
        int sign_changes = 0;
        double prev = 0.0;
        bool first = true;
        for (double d = beta; d > beta - 6.0; d -= 0.05) {
            const double alpha = beta - d;
            const double val = d + f(d, rule.shifted_gamma(gamma, alpha)) - beta;
            if (!first && (val > 0.0) != (prev > 0.0)) ++sign_changes;
            prev = val;
            first = false;
        }
        CHECK(sign_changes <= 1);
        const auto sol = retrial::solve_retrial_fixed_point(
            [&](double b, double g) { return f(b, g); }, rule, {beta, gamma});
        CHECK(sol.residual < 1e-10);
        CHECK(sol.alpha >= 0.0);
        // retrials never improve the delay probability
        if (which == 0) {
            CHECK(retrial::finite_queue_limits({sol.beta_shifted, gamma}).g >=
                  retrial::finite_queue_limits({beta, gamma}).g - 1e-12);
        }
    }
}

TEST_CASE("zero blocking function gives the no-retrial identity") {
    retrial::ShiftRule rule;
    const auto sol = retrial::solve_retrial_fixed_point(
        [](double, double) { return 0.0; }, rule, {0.8, 1.0});
    CHECK(sol.alpha == doctest::Approx(0.0).epsilon(1e-12));
    const auto basic = retrial::finite_queue_limits({0.8, 1.0});
    CHECK(retrial::finite_queue_limits({sol.beta_shifted, sol.gamma_shifted}).g ==
          doctest::Approx(basic.g).epsilon(1e-12));
}
