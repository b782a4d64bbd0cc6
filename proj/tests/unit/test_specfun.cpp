#include "qedkit/specfun.hpp"
#include "qedkit/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace qedkit;
namespace sf = qedkit::specfun;

namespace {

// Independent Euler-Maclaurin zeta oracle: evaluated directly at the point
// (no functional equation), N = 60 and 20 Bernoulli corrections. Long double
// throughout so the 1e-12 lattice comparison has headroom.
long double zeta_oracle(long double s) {
    static const long double B[] = {
        1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730, 7.0L / 6,
        -3617.0L / 510, 43867.0L / 798, -174611.0L / 330, 854513.0L / 138,
        -236364091.0L / 2730, 8553103.0L / 6, -23749461029.0L / 870,
        8615841276005.0L / 14322, -7709321041217.0L / 510, 2577687858367.0L / 6,
        -26315271553053477373.0L / 1919190, 2929993913841559.0L / 6,
        -261082718496449122051.0L / 13530};
    const int N = 60;
    long double sum = 0.0L;
    for (int k = 1; k < N; ++k) sum += powl((long double)k, -s);
    sum += powl((long double)N, 1.0L - s) / (s - 1.0L);
    sum += 0.5L * powl((long double)N, -s);
    long double fact = 1.0L, poch = 1.0L, npw = powl((long double)N, 1.0L - s);
    for (int j = 1; j <= 20; ++j) {
        fact *= (2.0L * j - 1.0L) * (2.0L * j);
        poch *= (j == 1) ? s : (s + 2.0L * j - 3.0L) * (s + 2.0L * j - 2.0L);
        npw /= (long double)N * (long double)N;
        sum += B[j - 1] / fact * poch * npw;
    }
    return sum;
}

} // namespace

TEST_CASE("normal pdf/cdf reference values") {
    CHECK(sf::std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
    CHECK(sf::std_normal_pdf(1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-12));
    for (double x : {0.3, 1.7, 4.0})
        CHECK(sf::std_normal_pdf(-x) == doctest::Approx(sf::std_normal_pdf(x)).epsilon(1e-15));
    CHECK(sf::std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sf::std_normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-13));
    for (double x : {0.5, 2.0, 6.0})
        CHECK(sf::std_normal_cdf(x) + sf::std_normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(sf::std_normal_pdf(std::nan("")), domain_error);
}

TEST_CASE("cdf is nondecreasing and pdf matches its finite-difference slope") {
    double prev = 0.0;
    for (double x = -5.0; x <= 5.0; x += 0.05) {
        const double c = sf::std_normal_cdf(x);
        CHECK(c >= prev);
        prev = c;
        const double h = 1e-5;
        const double fd = (sf::std_normal_cdf(x + h) - sf::std_normal_cdf(x - h)) / (2 * h);
        CHECK(std::fabs(fd - sf::std_normal_pdf(x)) < 1e-8);
    }
}

TEST_CASE("erfc and erfcx") {
    CHECK(sf::erfc(0.0) == doctest::Approx(1.0));
    CHECK(sf::erfc(1.0) == doctest::Approx(0.15729920705028513).epsilon(1e-13));
    for (double x : {0.7, 3.0})
        CHECK(sf::erfc(x) + sf::erfc(-x) == doctest::Approx(2.0).epsilon(1e-14));
    // erfcx continuity across the branch switch at 4 and large-x accuracy
    for (double x : {0.1, 1.0, 3.999, 4.001, 8.0, 20.0, 50.0}) {
        const double asym = 1.0 / (x * std::sqrt(M_PI));
        CHECK(sf::erfcx(x) > 0.0);
        if (x >= 8.0) CHECK(sf::erfcx(x) == doctest::Approx(asym).epsilon(0.01));
    }
    CHECK(sf::erfcx(1.0) == doctest::Approx(std::exp(1.0) * sf::erfc(1.0)).epsilon(1e-13));
    CHECK(sf::erfcx(4.5) ==
          doctest::Approx(std::exp(4.5 * 4.5) * std::erfc(4.5)).epsilon(1e-12));
    // Mills ratio against the naive quotient in the safe range
    for (double x : {-3.0, -1.0, 0.0, 1.0, 3.0})
        CHECK(sf::mills_ratio(x) ==
              doctest::Approx(sf::std_normal_cdf(x) / sf::std_normal_pdf(x)).epsilon(1e-12));
    // hazard stays finite deep in the tail
    CHECK(std::isfinite(sf::normal_hazard(40.0)));
    CHECK(sf::normal_hazard(40.0) == doctest::Approx(40.0).epsilon(0.01));
}

TEST_CASE("zeta on the half-integer lattice matches the Euler-Maclaurin oracle") {
    CHECK(sf::zeta(0.0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(sf::zeta(0.5) == doctest::Approx(-1.4603545088095868).epsilon(1e-12));
    CHECK(sf::zeta(-0.5) == doctest::Approx(-0.20788622497735456).epsilon(1e-12));
    for (int l = 0; l <= 7; ++l) {
        for (double base : {0.5, -0.5, -1.5}) {
            const double s = base - l;
            // Direct summation cancels catastrophically for deeply negative s,
            // so the oracle reflects through the functional equation there
            // (independent long-double arithmetic).
            long double want;
            if (s >= -2.0) {
                want = zeta_oracle(s);
            } else {
                const long double t = 1.0L - s;
                want = powl(2.0L, s) * powl((long double)M_PI, s - 1.0L) *
                       sinl((long double)M_PI * s / 2.0L) * tgammal(t) * zeta_oracle(t);
            }
            CHECK(std::fabs(sf::zeta(s) - (double)want) < 1e-12);
        }
    }
    // frozen high-precision references for the deepest lattice points
    CHECK(std::fabs(sf::zeta(-13.5) - (-0.0871752559062172515)) < 1e-12);
    CHECK(std::fabs(sf::zeta(-15.5) - 0.496271219912057608) < 1e-12);
    CHECK_THROWS_AS(sf::zeta(1.0), domain_error);
    CHECK_THROWS_AS(sf::zeta(1.5), domain_error);
}

TEST_CASE("log_gamma recovers factorials and the half-integer recursion") {
    double fact = 1.0;
    for (int n = 0; n <= 15; ++n) {
        if (n > 0) fact *= n;
        CHECK(std::exp(sf::log_gamma(n + 1.0)) == doctest::Approx(fact).epsilon(1e-13));
    }
    // Gamma(10.5) by the product recursion from Gamma(0.5) = sqrt(pi)
    long double g = sqrtl(M_PI);
    for (double x = 0.5; x < 10.0; x += 1.0) g *= x;
    CHECK(sf::log_gamma(10.5) == doctest::Approx((double)logl(g)).epsilon(1e-13));
    CHECK_THROWS_AS(sf::log_gamma(0.0), domain_error);
    CHECK_THROWS_AS(sf::log_gamma(-2.0), domain_error);
}

TEST_CASE("incomplete gamma against the Poisson cdf interpretation") {
    // P(Pois(3) <= 2) = e^{-3}(1 + 3 + 4.5)
    const double want = std::exp(-3.0) * 8.5;
    CHECK(sf::gamma_q(3.0, 3.0) == doctest::Approx(want).epsilon(1e-12));
    CHECK(sf::gamma_p(3.0, 3.0) + sf::gamma_q(3.0, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    // large-argument regime used by the Erlang-R product form
    CHECK(sf::gamma_q(2551.0, 2295.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sf::gamma_q(2000.0, 2295.0) < 1.0);
}
