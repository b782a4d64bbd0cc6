#include "qedkit/sim.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <sstream>
#include <thread>

namespace qedkit::sim {

void SimScenario::validate() const {
    if (!(horizon > warmup) || warmup < 0.0)
        throw domain_error("SimScenario: need horizon > warmup >= 0");
    if (reps < 1) throw domain_error("SimScenario: reps >= 1");
    if (model == Model::MtMst && (!staffing || !lambda_curve))
        throw domain_error("SimScenario: MtMst needs staffing and lambda curves");
    if (s < 1) throw domain_error("SimScenario: s >= 1");
}

double t_quantile_975(int df) {
    static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365,
                                   2.306,  2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
                                   2.131,  2.120, 2.110, 2.101, 2.093, 2.086, 2.080,
                                   2.074,  2.069, 2.064, 2.060, 2.056, 2.052, 2.048,
                                   2.045,  2.042};
    if (df < 1) throw domain_error("t_quantile_975: df >= 1");
    if (df <= 30) return table[df - 1];
    // Cornish-Fisher in 1/df around the normal quantile
    const double z = 1.959963984540054;
    const double z3 = z * z * z, z5 = z3 * z * z, z7 = z5 * z * z;
    const double nu = df;
    return z + (z3 + z) / (4.0 * nu) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu) +
           (3.0 * z7 + 19.0 * z5 + 17.0 * z3 - 15.0 * z) / (384.0 * nu * nu * nu);
}

namespace {

constexpr std::int64_t kRunawayGuard = 1'000'000;

struct RepResult {
    std::vector<double> values;
};

// Time-weighted state statistics plus event counters for one replication.
// The *_all counters run from time zero and back the conservation check.
struct Averages {
    double t_delay = 0.0;  // time with all servers busy (q1 >= s)
    double t_full = 0.0;   // time at capacity
    double busy = 0.0;     // integrated busy servers
    double queue = 0.0;    // integrated waiting count
    double span = 0.0;
    std::int64_t arrivals = 0;        // external, post-warmup
    std::int64_t admitted = 0;        // post-warmup admissions
    std::int64_t delayed_admits = 0;  // admissions finding all servers busy
    std::int64_t lost = 0;            // post-warmup blocked/abandoned
    double wait_sum = 0.0;
    std::int64_t wait_count = 0;

    std::int64_t arr_all = 0, dep_all = 0, lost_all = 0;

    void conservation_check(std::int64_t in_system) const {
        if (arr_all != dep_all + lost_all + in_system)
            throw numerical_error("simulate: conservation check failed");
    }
};

// ---- stationary birth-death family: M/M/s[/n][+M][+retrial] ----
struct MmsFamilyConfig {
    double lambda, mu, theta = 0.0, delta_retry = 0.0;
    int s, n = -1;         // n < 0: unbounded
    bool abandonment = false;
    bool retrial = false;  // blocked (MmsN) or abandoning (ErlangA) customers orbit
    bool track_waits = false;
};

Averages run_mms_family(const MmsFamilyConfig& c, double horizon, double warmup,
                        rng::Philox& gen) {
    Averages acc{};
    double t = 0.0;
    std::int64_t q = 0, orbit = 0;
    std::deque<double> fifo;  // arrival times of waiting customers
    while (t < horizon) {
        const double r_arr = c.lambda;
        const double r_orbit = orbit * c.delta_retry;
        const double r_dep = std::min<std::int64_t>(q, c.s) * c.mu;
        const double r_ab = c.abandonment ? std::max<std::int64_t>(q - c.s, 0) * c.theta : 0.0;
        const double total = r_arr + r_orbit + r_dep + r_ab;
        const double dt = gen.exponential(total);
        const double tn = std::min(t + dt, horizon);
        if (tn > warmup) {
            const double w = tn - std::max(t, warmup);
            acc.span += w;
            if (q >= c.s) acc.t_delay += w;
            if (c.n >= 0 && q >= c.n) acc.t_full += w;
            acc.busy += w * std::min<std::int64_t>(q, c.s);
            acc.queue += w * std::max<std::int64_t>(q - c.s, 0);
        }
        t += dt;
        if (t >= horizon) break;
        const double u = gen.uniform() * total;
        if (u < r_arr + r_orbit) {
            const bool external = u < r_arr;
            if (external) {
                ++acc.arr_all;
                if (t > warmup) ++acc.arrivals;
            }
            if (c.n >= 0 && q >= c.n) {
                if (c.retrial) {
                    if (external) ++orbit;  // orbit attempts that fail keep orbiting
                } else if (external) {
                    ++acc.lost_all;
                    if (t > warmup) ++acc.lost;
                }
            } else {
                if (!external) --orbit;
                if (t > warmup) {
                    ++acc.admitted;
                    if (q >= c.s) ++acc.delayed_admits;
                }
                if (c.track_waits) {
                    if (q >= c.s) fifo.push_back(t);
                    else if (t > warmup) ++acc.wait_count;  // zero wait
                }
                ++q;
                if (q > kRunawayGuard)
                    throw instability_error("simulate: queue exceeded runaway guard");
            }
        } else if (u < r_arr + r_orbit + r_dep) {
            --q;
            ++acc.dep_all;
            if (c.track_waits && !fifo.empty()) {
                const double arr = fifo.front();  // longest waiter enters service
                fifo.pop_front();
                if (arr > warmup) {
                    acc.wait_sum += t - arr;
                    ++acc.wait_count;
                }
            }
        } else {
            // abandonment from the waiting room
            --q;
            if (c.track_waits && !fifo.empty()) fifo.pop_back();
            if (c.retrial) {
                ++orbit;
            } else {
                ++acc.lost_all;
            }
            if (t > warmup) ++acc.lost;
        }
    }
    acc.conservation_check(q + (c.retrial ? orbit : 0));
    return acc;
}

// ---- cloud tandem: s setup servers, cap n on concurrent requests ----
Averages run_cloud(double lambda, double mu, double kappa, double delta_retry, int s, int n,
                   double horizon, double warmup, rng::Philox& gen) {
    Averages acc{};
    double t = 0.0;
    std::int64_t q1 = 0, q2 = 0, orbit = 0;
    while (t < horizon) {
        const double r_arr = lambda;
        const double r_orbit = orbit * delta_retry;
        const double r_setup = std::min<std::int64_t>(q1, s) * mu;
        const double r_release = q2 * kappa;
        const double total = r_arr + r_orbit + r_setup + r_release;
        const double dt = gen.exponential(total);
        const double tn = std::min(t + dt, horizon);
        if (tn > warmup) {
            const double w = tn - std::max(t, warmup);
            acc.span += w;
            if (q1 >= s) acc.t_delay += w;
            if (q1 + q2 >= n) acc.t_full += w;
            acc.busy += w * std::min<std::int64_t>(q1, s);
            acc.queue += w * std::max<std::int64_t>(q1 - s, 0);
        }
        t += dt;
        if (t >= horizon) break;
        const double u = gen.uniform() * total;
        if (u < r_arr + r_orbit) {
            const bool external = u < r_arr;
            if (external) {
                ++acc.arr_all;
                if (t > warmup) ++acc.arrivals;
            }
            if (q1 + q2 >= n) {
                if (external) {
                    ++orbit;
                    if (t > warmup) ++acc.lost;  // blocked on first attempt
                }
            } else {
                if (!external) --orbit;
                if (t > warmup) {
                    ++acc.admitted;
                    if (q1 >= s) ++acc.delayed_admits;
                }
                ++q1;
                if (q1 + q2 > kRunawayGuard) throw instability_error("simulate: cloud runaway");
            }
        } else if (u < r_arr + r_orbit + r_setup) {
            --q1;
            ++q2;
        } else {
            --q2;
            ++acc.dep_all;
        }
    }
    acc.conservation_check(q1 + q2 + orbit);
    return acc;
}

// ---- restricted Erlang-R (blocking or holding) ----
Averages run_erlang_r(double lambda, double mu, double delta, double p, int s, int n,
                      bool holding, double horizon, double warmup, rng::Philox& gen) {
    Averages acc{};
    double t = 0.0;
    std::int64_t q1 = 0, q2 = 0, hold = 0;
    while (t < horizon) {
        const double r_arr = lambda;
        const double r_srv = std::min<std::int64_t>(q1, s) * mu;
        const double r_content = q2 * delta;
        const double total = r_arr + r_srv + r_content;
        const double dt = gen.exponential(total);
        const double tn = std::min(t + dt, horizon);
        if (tn > warmup) {
            const double w = tn - std::max(t, warmup);
            acc.span += w;
            if (q1 >= s) acc.t_delay += w;
            if (q1 + q2 + hold >= n) acc.t_full += w;
            acc.busy += w * std::min<std::int64_t>(q1, s);
            acc.queue += w * std::max<std::int64_t>(q1 - s, 0);
        }
        t += dt;
        if (t >= horizon) break;
        const double u = gen.uniform() * total;
        if (u < r_arr) {
            ++acc.arr_all;
            if (t > warmup) ++acc.arrivals;
            if (q1 + q2 >= n) {
                if (holding) {
                    ++hold;
                    if (t > warmup) ++acc.lost;  // held at the door
                    if (hold > kRunawayGuard)
                        throw instability_error("simulate: holding queue runaway");
                } else {
                    ++acc.lost_all;
                    if (t > warmup) ++acc.lost;
                }
            } else {
                if (t > warmup) {
                    ++acc.admitted;
                    if (q1 >= s) ++acc.delayed_admits;
                }
                ++q1;
            }
        } else if (u < r_arr + r_srv) {
            --q1;
            if (gen.uniform() < p) {
                ++q2;  // back to content
            } else {
                ++acc.dep_all;
                if (hold > 0) {  // freed bed goes to a holding patient, needy
                    --hold;
                    ++q1;
                }
            }
        } else {
            --q2;
            ++q1;  // content -> needy
        }
    }
    acc.conservation_check(q1 + q2 + hold);
    return acc;
}

// ---- time-varying M_t/M/s_t, staffing reviewed per slice, no preemption ----
struct SliceAcc {
    std::vector<double> arrivals;
    std::vector<double> delayed;
};

SliceAcc run_mt_mst(const dim::OfferedLoadCurve& lam, const dim::StaffingCurve& staff,
                    double mu, double cycles, double warmup_cycles, rng::Philox& gen) {
    const double T = lam.cycle_length();
    const double t0 = lam.time_grid.front();
    const int slices = static_cast<int>(staff.s_levels.size());
    SliceAcc acc;
    acc.arrivals.assign(slices, 0.0);
    acc.delayed.assign(slices, 0.0);
    const double lam_max = lam.max_value() * 1.0000001;
    const double horizon = (warmup_cycles + cycles) * T;
    const double warmup = warmup_cycles * T;
    double t = 0.0;
    std::int64_t in_service = 0, waiting = 0;
    while (t < horizon) {
        const double total = lam_max + in_service * mu;
        t += gen.exponential(total);
        if (t >= horizon) break;
        const double day = t0 + std::fmod(t, T);
        const int s_cur = staff.s_at(day);
        // staffing may have been raised at a review boundary: promote waiters
        while (waiting > 0 && in_service < s_cur) {
            --waiting;
            ++in_service;
        }
        if (gen.uniform() * total < lam_max) {
            if (gen.uniform() * lam_max > lam.at(day)) continue;  // thinned
            const bool delayed = in_service >= s_cur;
            if (t > warmup) {
                const int slice = std::min<int>(
                    static_cast<int>((day - t0) / staff.review_period), slices - 1);
                acc.arrivals[slice] += 1.0;
                if (delayed) acc.delayed[slice] += 1.0;
            }
            if (delayed) ++waiting;
            else ++in_service;
            if (waiting > kRunawayGuard) throw instability_error("simulate: Mt runaway");
        } else {
            --in_service;
            while (waiting > 0 && in_service < s_cur) {
                --waiting;
                ++in_service;
            }
        }
    }
    return acc;
}

std::vector<double> measures_from(const Averages& a, Model model) {
    const double span = std::max(a.span, 1e-12);
    const double ext = std::max<double>(a.arrivals, 1.0);
    switch (model) {
        case Model::Mms:
            return {static_cast<double>(a.delayed_admits) / std::max<double>(a.admitted, 1.0),
                    a.wait_count > 0 ? a.wait_sum / a.wait_count : 0.0, a.queue / span,
                    a.busy / span};
        case Model::MmsN:
        case Model::MmsNRetrial:
            return {a.t_delay / span, a.t_full / span, a.busy / span, a.queue / span};
        case Model::ErlangA:
        case Model::ErlangARetrial:
            return {a.t_delay / span, static_cast<double>(a.lost) / ext, a.queue / span,
                    a.busy / span};
        case Model::Cloud:
            return {static_cast<double>(a.delayed_admits) / std::max<double>(a.admitted, 1.0),
                    static_cast<double>(a.lost) / ext, a.busy / span};
        case Model::ErlangRBlocking:
        case Model::ErlangRHolding:
            return {a.t_delay / span, static_cast<double>(a.lost) / ext, a.t_full / span,
                    a.busy / span, a.queue / span};
        case Model::MtMst: break;
    }
    return {};
}

std::vector<std::string> measure_names(Model model) {
    switch (model) {
        case Model::Mms: return {"delay_prob", "mean_wait", "mean_queue", "busy_servers"};
        case Model::MmsN:
        case Model::MmsNRetrial:
            return {"delay_prob", "block_prob", "busy_servers", "mean_queue"};
        case Model::ErlangA:
        case Model::ErlangARetrial:
            return {"delay_prob", "abandon_prob", "mean_queue", "busy_servers"};
        case Model::Cloud: return {"delay_prob", "block_prob", "busy_servers"};
        case Model::ErlangRBlocking:
            return {"delay_prob", "block_prob", "full_prob", "busy_servers", "mean_queue"};
        case Model::ErlangRHolding:
            return {"delay_prob", "hold_frac", "hold_prob", "busy_servers", "mean_queue"};
        case Model::MtMst: return {};
    }
    return {};
}

RepResult run_one(const SimScenario& sc, int rep) {
    rng::Philox gen(sc.seed, static_cast<std::uint64_t>(rep));
    Averages a;
    switch (sc.model) {
        case Model::Mms:
            a = run_mms_family({sc.lambda, sc.mu, 0.0, 0.0, sc.s, -1, false, false, true},
                               sc.horizon, sc.warmup, gen);
            break;
        case Model::MmsN:
            a = run_mms_family({sc.lambda, sc.mu, 0.0, 0.0, sc.s, sc.n, false, false, false},
                               sc.horizon, sc.warmup, gen);
            break;
        case Model::MmsNRetrial:
            a = run_mms_family(
                {sc.lambda, sc.mu, 0.0, sc.delta_retry, sc.s, sc.n, false, true, false},
                sc.horizon, sc.warmup, gen);
            break;
        case Model::ErlangA:
            a = run_mms_family({sc.lambda, sc.mu, sc.theta, 0.0, sc.s, -1, true, false, false},
                               sc.horizon, sc.warmup, gen);
            break;
        case Model::ErlangARetrial:
            a = run_mms_family(
                {sc.lambda, sc.mu, sc.theta, sc.delta_retry, sc.s, -1, true, true, false},
                sc.horizon, sc.warmup, gen);
            break;
        case Model::Cloud:
            a = run_cloud(sc.lambda, sc.mu, sc.kappa, sc.delta_retry, sc.s, sc.n, sc.horizon,
                          sc.warmup, gen);
            break;
        case Model::ErlangRBlocking:
            a = run_erlang_r(sc.lambda, sc.mu, sc.delta, sc.p, sc.s, sc.n, false, sc.horizon,
                             sc.warmup, gen);
            break;
        case Model::ErlangRHolding:
            a = run_erlang_r(sc.lambda, sc.mu, sc.delta, sc.p, sc.s, sc.n, true, sc.horizon,
                             sc.warmup, gen);
            break;
        case Model::MtMst:
            throw domain_error("run_one: MtMst uses simulate_time_sliced");
    }
    return {measures_from(a, sc.model)};
}

template <typename Fn>
std::vector<RepResult> run_reps(int reps, Fn&& fn) {
    std::vector<RepResult> results(reps);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(reps));
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int r = static_cast<int>(w); r < reps; r += workers) results[r] = fn(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return results;
}

std::vector<SimEstimate> aggregate(const std::vector<RepResult>& results,
                                   const std::vector<std::string>& names, int reps) {
    std::vector<SimEstimate> out;
    const double tq = reps > 1 ? t_quantile_975(reps - 1) : 0.0;
    for (std::size_t m = 0; m < names.size(); ++m) {
        double mean = 0.0;
        for (const auto& r : results) mean += r.values[m];
        mean /= reps;
        double var = 0.0;
        for (const auto& r : results) {
            const double d = r.values[m] - mean;
            var += d * d;
        }
        var = reps > 1 ? var / (reps - 1.0) : 0.0;
        out.push_back({names[m], mean, tq * std::sqrt(var / reps), reps});
    }
    return out;
}

} // namespace

std::vector<SimEstimate> simulate(const SimScenario& scenario) {
    scenario.validate();
    if (scenario.model == Model::MtMst)
        throw domain_error("simulate: use simulate_time_sliced for MtMst");
    const auto results = run_reps(scenario.reps, [&](int r) { return run_one(scenario, r); });
    return aggregate(results, measure_names(scenario.model), scenario.reps);
}

TimeSlicedDelay simulate_time_sliced(const SimScenario& scenario) {
    scenario.validate();
    if (scenario.model != Model::MtMst)
        throw domain_error("simulate_time_sliced: model must be MtMst");
    const auto& lam = *scenario.lambda_curve;
    const auto& staff = *scenario.staffing;
    const double T = lam.cycle_length();
    const double cycles = std::max(1.0, scenario.horizon / T);
    const double warm_cycles = scenario.warmup / T;
    const int slices = static_cast<int>(staff.s_levels.size());

    const auto results = run_reps(scenario.reps, [&](int r) {
        rng::Philox gen(scenario.seed, static_cast<std::uint64_t>(r));
        const auto acc = run_mt_mst(lam, staff, scenario.mu, cycles, warm_cycles, gen);
        RepResult rep;
        rep.values.resize(slices);
        for (int i = 0; i < slices; ++i)
            rep.values[i] = acc.arrivals[i] > 0.0 ? acc.delayed[i] / acc.arrivals[i] : 0.0;
        return rep;
    });

    TimeSlicedDelay out;
    const double tq = scenario.reps > 1 ? t_quantile_975(scenario.reps - 1) : 0.0;
    for (int i = 0; i < slices; ++i) {
        double mean = 0.0;
        for (const auto& r : results) mean += r.values[i];
        mean /= scenario.reps;
        double var = 0.0;
        for (const auto& r : results) {
            const double d = r.values[i] - mean;
            var += d * d;
        }
        var = scenario.reps > 1 ? var / (scenario.reps - 1.0) : 0.0;
        out.slice_start.push_back(staff.time_grid[i]);
        out.delay_prob.push_back(mean);
        out.half_width_95.push_back(tq * std::sqrt(var / scenario.reps));
    }
    return out;
}

SimScenario SimScenario::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SimScenario sc;
    const std::string model = j.at("model").get<std::string>();
    if (model == "mms") sc.model = Model::Mms;
    else if (model == "mmsn") sc.model = Model::MmsN;
    else if (model == "erlang-a") sc.model = Model::ErlangA;
    else if (model == "mmsn-retrial") sc.model = Model::MmsNRetrial;
    else if (model == "erlang-a-retrial") sc.model = Model::ErlangARetrial;
    else if (model == "cloud") sc.model = Model::Cloud;
    else if (model == "erlang-r-blocking") sc.model = Model::ErlangRBlocking;
    else if (model == "erlang-r-holding") sc.model = Model::ErlangRHolding;
    else if (model == "mt-mst") sc.model = Model::MtMst;
    else throw domain_error("SimScenario: unknown model " + model);
    auto opt = [&](const char* key, double dflt) { return j.value(key, dflt); };
    sc.lambda = opt("lambda", sc.lambda);
    sc.mu = opt("mu", sc.mu);
    sc.s = j.value("s", sc.s);
    sc.n = j.value("n", sc.n);
    sc.theta = opt("theta", sc.theta);
    sc.delta_retry = opt("delta_retry", sc.delta_retry);
    sc.kappa = opt("kappa", sc.kappa);
    sc.delta = opt("delta", sc.delta);
    sc.p = opt("p", sc.p);
    sc.horizon = opt("horizon", sc.horizon);
    sc.warmup = opt("warmup", 0.1 * sc.horizon);
    sc.reps = j.value("reps", sc.reps);
    sc.seed = j.value("seed", sc.seed);
    if (j.contains("lambda_curve")) {
        dim::OfferedLoadCurve c;
        for (const auto& pt : j.at("lambda_curve")) {
            c.time_grid.push_back(pt.at(0).get<double>());
            c.values.push_back(pt.at(1).get<double>());
        }
        c.validate();
        sc.lambda_curve = std::move(c);
    }
    return sc;
}

std::string estimates_to_csv(const std::vector<SimEstimate>& estimates) {
    std::ostringstream os;
    os << "measure,point,half_width_95,reps\n";
    for (const auto& e : estimates)
        os << e.measure << ',' << e.point << ',' << e.half_width_95 << ',' << e.reps << '\n';
    return os.str();
}

} // namespace qedkit::sim
