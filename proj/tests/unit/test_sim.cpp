#include "qedkit/sim.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/mms.hpp"
#include "qedkit/retrial.hpp"

#include <doctest.h>

#include <cmath>

using namespace qedkit;
using sim::Model;
using sim::SimScenario;

TEST_CASE("seed reproducibility is bitwise") {
    SimScenario sc;
    sc.model = Model::Mms;
    sc.lambda = 0.7;
    sc.mu = 1.0;
    sc.s = 1;
    sc.horizon = 5000.0;
    sc.warmup = 500.0;
    sc.reps = 4;
    sc.seed = 123456;
    const auto a = sim::simulate(sc);
    const auto b = sim::simulate(sc);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].point == b[i].point);
        CHECK(a[i].half_width_95 == b[i].half_width_95);
    }
    sc.seed = 654321;
    const auto c = sim::simulate(sc);
    CHECK(c[0].point != a[0].point);
}

TEST_CASE("M/M/1 wait matches the exact value") {
    SimScenario sc;
    sc.model = Model::Mms;
    sc.lambda = 0.5;
    sc.mu = 1.0;
    sc.s = 1;
    sc.horizon = 1e5;
    sc.warmup = 1e4;
    sc.reps = 20;
    sc.seed = 2024;
    const auto est = sim::simulate(sc);
    // measures: delay, mean_wait, mean_queue, busy
    const double exact_wait = 0.5 / (1.0 * 0.5);  // rho/(mu(1-rho)) = 1
    CHECK(std::fabs(est[1].point - exact_wait) <= est[1].half_width_95 * 1.5 + 0.01);
    CHECK(std::fabs(est[0].point - 0.5) < 0.02);  // delay prob = rho for M/M/1
}

TEST_CASE("M/M/s/n simulation brackets the exact chain") {
    SimScenario sc;
    sc.model = Model::MmsN;
    sc.lambda = 10.0;
    sc.mu = 1.0;
    sc.s = 12;
    sc.n = 16;
    sc.horizon = 2e4;
    sc.warmup = 2e3;
    sc.reps = 12;
    sc.seed = 7;
    const auto est = sim::simulate(sc);
    const auto exact = mms::mmsn_metrics({{10.0, 1.0, 12}, 16});
    CHECK(std::fabs(est[0].point - exact.delay_prob) < 0.02);
    CHECK(std::fabs(est[1].point - exact.block_prob) < 0.01);
}

TEST_CASE("retrial rate limits: fast retrials approach M/M/s, slow stay below") {
    const auto open_delay = mms::mms_metrics({10.0, 1.0, 12}).delay_prob;  // 0.449
    SimScenario sc;
    sc.model = Model::MmsNRetrial;
    sc.lambda = 10.0;
    sc.mu = 1.0;
    sc.s = 12;
    sc.n = 14;
    sc.horizon = 3e4;
    sc.warmup = 3e3;
    sc.reps = 10;
    sc.seed = 31;
    sc.delta_retry = 1e3;
    const auto fast = sim::simulate(sc);
    CHECK(std::fabs(fast[0].point - open_delay) < 0.03);
    sc.delta_retry = 1e-3;
    const auto slow = sim::simulate(sc);
    CHECK(slow[0].point < open_delay - 0.03);
}

TEST_CASE("Erlang-A retrial simulation near the fixed-point approximation") {
    SimScenario sc;
    sc.model = Model::ErlangARetrial;
    sc.lambda = 100.0;
    sc.mu = 1.0;
    sc.s = 110;
    sc.theta = 1.0;
    sc.delta_retry = 0.01;
    sc.horizon = 1e4;
    sc.warmup = 1e3;
    sc.reps = 10;
    sc.seed = 5150;
    const auto est = sim::simulate(sc);
    retrial::RetrialParams params;
    params.beta = 1.0;
    params.theta = 1.0;
    const auto approx =
        retrial::approx_with_retrials(retrial::RetrialModel::Abandon, params, 100.0);
    CHECK(std::fabs(est[0].point - approx.delay_prob) < 0.03);
    CHECK(std::fabs(est[1].point * std::sqrt(100.0) - approx.fixed_point.alpha) < 0.05);
}

TEST_CASE("scenario json round trip") {
    const std::string text = R"({
        "model": "erlang-a",
        "lambda": 5.0, "mu": 1.0, "s": 7, "theta": 0.2,
        "horizon": 2000.0, "reps": 4, "seed": 11
    })";
    const SimScenario sc = SimScenario::from_json(text);
    CHECK(sc.model == Model::ErlangA);
    CHECK(sc.lambda == 5.0);
    CHECK(sc.warmup == doctest::Approx(200.0));
    const auto est = sim::simulate(sc);
    CHECK(est.size() == 4);
    const std::string csv = sim::estimates_to_csv(est);
    CHECK(csv.find("delay_prob") != std::string::npos);
}

TEST_CASE("unstable scenario trips the runaway guard") {
    SimScenario sc;
    sc.model = Model::Mms;
    sc.lambda = 5.0;
    sc.mu = 1.0;
    sc.s = 2;  // rho = 2.5
    sc.horizon = 1e6;
    sc.warmup = 0.0;
    sc.reps = 1;
    sc.seed = 3;
    CHECK_THROWS_AS(sim::simulate(sc), instability_error);
}
