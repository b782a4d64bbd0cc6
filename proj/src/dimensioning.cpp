#include "qedkit/dimensioning.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/mms.hpp"
#include "qedkit/retrial.hpp"
#include "qedkit/specfun.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qedkit::dim {

using specfun::mills_ratio;

void OfferedLoadCurve::validate() const {
    if (time_grid.size() < 2 || time_grid.size() != values.size())
        throw domain_error("OfferedLoadCurve: need matching grids with >= 2 points");
    for (std::size_t i = 1; i < time_grid.size(); ++i)
        if (!(time_grid[i] > time_grid[i - 1]))
            throw domain_error("OfferedLoadCurve: time grid must be strictly increasing");
    for (double v : values)
        if (v < 0.0) throw domain_error("OfferedLoadCurve: values must be >= 0");
}

double OfferedLoadCurve::at(double t) const {
    const double t0 = time_grid.front();
    const double T = cycle_length();
    double u = std::fmod(t - t0, T);
    if (u < 0.0) u += T;
    u += t0;
    auto it = std::upper_bound(time_grid.begin(), time_grid.end(), u);
    if (it == time_grid.begin()) return values.front();
    const std::size_t hi = std::min<std::size_t>(it - time_grid.begin(), time_grid.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = (u - time_grid[lo]) / (time_grid[hi] - time_grid[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

double OfferedLoadCurve::max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

OfferedLoadCurve OfferedLoadCurve::from_csv(const std::string& path, bool header) {
    std::ifstream in(path);
    if (!in) throw domain_error("OfferedLoadCurve: cannot open " + path);
    OfferedLoadCurve c;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && header) {
            first = false;
            continue;
        }
        first = false;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b))
            throw domain_error("OfferedLoadCurve: malformed CSV line: " + line);
        c.time_grid.push_back(std::stod(a));
        c.values.push_back(std::stod(b));
    }
    c.validate();
    return c;
}

int StaffingCurve::s_at(double t) const {
    const double T = time_grid.back() + review_period - time_grid.front();
    double u = std::fmod(t - time_grid.front(), T);
    if (u < 0.0) u += T;
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(u / review_period), s_levels.size() - 1);
    return s_levels[idx];
}

int StaffingCurve::n_at(double t) const {
    if (n_levels.empty()) throw domain_error("StaffingCurve: no n levels");
    const double T = time_grid.back() + review_period - time_grid.front();
    double u = std::fmod(t - time_grid.front(), T);
    if (u < 0.0) u += T;
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(u / review_period), n_levels.size() - 1);
    return n_levels[idx];
}

namespace {

double hw_delay(double beta) {  // g(beta) = (1 + beta Phi(beta)/phi(beta))^{-1}
    return 1.0 / (1.0 + beta * mills_ratio(beta));
}

} // namespace

double solve_beta_for_delay(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw domain_error("solve_beta_for_delay: epsilon must lie in (0,1)");
    double lo = 1e-12, hi = 1.0;
    while (hw_delay(hi) > epsilon) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (hw_delay(mid) > epsilon ? lo : hi) = mid;
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

int staff_constraint(double lambda, double epsilon) {
    if (!(lambda > 0.0)) throw domain_error("staff_constraint: lambda must be > 0");
    const double beta = solve_beta_for_delay(epsilon);
    return static_cast<int>(std::ceil(lambda + beta * std::sqrt(lambda)));
}

int staff_exact(double lambda, double epsilon) {
    if (!(lambda > 0.0)) throw domain_error("staff_exact: lambda must be > 0");
    int s = static_cast<int>(std::floor(lambda)) + 1;
    for (;; ++s) {
        const mms::MmsMetrics m = mms::mms_metrics({lambda, 1.0, s});
        if (m.delay_prob <= epsilon) return s;
        if (s > lambda + 50.0 * std::sqrt(lambda) + 100.0)
            throw convergence_error("staff_exact: scan ran away");
    }
}

double optimize_cost_beta(double cost_ratio) {
    if (!(cost_ratio > 0.0)) throw domain_error("optimize_cost_beta: r must be > 0");
    auto cost = [&](double b) { return cost_ratio * b + hw_delay(b) / b; };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 1e-8, hi = 16.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = cost(x1), f2 = cost(x2);
    for (int i = 0; i < 300 && hi - lo > 1e-12; ++i) {
        if (f1 > f2) {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo); f2 = cost(x2);
        } else {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo); f1 = cost(x1);
        }
    }
    return 0.5 * (lo + hi);
}

int optimize_cost_exact(double lambda, double cost_ratio) {
    if (!(lambda > 0.0)) throw domain_error("optimize_cost_exact: lambda must be > 0");
    auto cost = [&](int s) {
        const mms::MmsMetrics m = mms::mms_metrics({lambda, 1.0, s});
        return cost_ratio * (s - lambda) + lambda * m.expected_wait;
    };
    int best = static_cast<int>(std::floor(lambda)) + 1;
    double best_cost = cost(best);
    // the cost is convex in s; stop once it has risen for a few steps
    int rises = 0;
    for (int s = best + 1; rises < 5; ++s) {
        const double c = cost(s);
        if (c < best_cost) {
            best_cost = c;
            best = s;
            rises = 0;
        } else {
            ++rises;
        }
        if (s > lambda + 100.0 * std::sqrt(lambda) + 200.0) break;
    }
    return best;
}

namespace {

// RK4 on dy/dt = f(t, y) for small fixed-size systems.
template <int N, typename F>
void rk4_step(F&& f, double t, double h, std::array<double, N>& y) {
    std::array<double, N> k1, k2, k3, k4, tmp;
    f(t, y, k1);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
    f(t + h, tmp, k4);
    for (int i = 0; i < N; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

template <int N, typename F>
std::vector<std::array<double, N>> integrate_cyclic(const OfferedLoadCurve& lam, F&& f,
                                                    int samples_per_hour,
                                                    std::array<double, N> y0) {
    lam.validate();
    const double T = lam.cycle_length();
    const double t0 = lam.time_grid.front();
    const int steps = std::max(8, static_cast<int>(std::ceil(T * samples_per_hour)));
    const double h = T / steps;
    std::array<double, N> y = y0;
    // two warm-up cycles
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < steps; ++i) rk4_step<N>(f, t0 + i * h, h, y);
    std::vector<std::array<double, N>> out(steps + 1);
    out[0] = y;
    for (int i = 0; i < steps; ++i) {
        rk4_step<N>(f, t0 + i * h, h, y);
        out[i + 1] = y;
    }
    return out;
}

OfferedLoadCurve sample_to_curve(const OfferedLoadCurve& lam,
                                 const std::vector<std::array<double, 2>>& path, int comp) {
    OfferedLoadCurve c;
    const double T = lam.cycle_length();
    const double t0 = lam.time_grid.front();
    const int steps = static_cast<int>(path.size()) - 1;
    c.time_grid.resize(path.size());
    c.values.resize(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        c.time_grid[i] = t0 + T * static_cast<double>(i) / steps;
        c.values[i] = std::max(0.0, path[i][comp]);
    }
    return c;
}

} // namespace

OfferedLoadCurve mol_offered_load(const OfferedLoadCurve& lambda_curve, double mu,
                                  int samples_per_hour) {
    if (!(mu > 0.0)) throw domain_error("mol_offered_load: mu must be > 0");
    auto f = [&](double t, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = lambda_curve.at(t) - mu * y[0];
        dy[1] = 0.0;
    };
    const auto path = integrate_cyclic<2>(lambda_curve, f, samples_per_hour,
                                          {lambda_curve.values.front() / mu, 0.0});
    return sample_to_curve(lambda_curve, path, 0);
}

ErlangROfferedLoad erlang_r_offered_load(const OfferedLoadCurve& lambda_curve,
                                         const erlang_r::ErlangRSpec& spec,
                                         int samples_per_hour) {
    auto f = [&](double t, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = lambda_curve.at(t) + spec.delta * y[1] - spec.mu * y[0];
        dy[1] = spec.p * spec.mu * y[0] - spec.delta * y[1];
    };
    const double lam0 = lambda_curve.values.front();
    const auto path = integrate_cyclic<2>(
        lambda_curve, f, samples_per_hour,
        {lam0 / ((1.0 - spec.p) * spec.mu), spec.p * lam0 / ((1.0 - spec.p) * spec.delta)});
    return {sample_to_curve(lambda_curve, path, 0), sample_to_curve(lambda_curve, path, 1)};
}

CloudOfferedLoad cloud_offered_load(const OfferedLoadCurve& lambda_curve, double kappa,
                                    int samples_per_hour) {
    if (!(kappa > 0.0)) throw domain_error("cloud_offered_load: kappa must be > 0");
    auto f = [&](double t, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = lambda_curve.at(t) - y[0];          // unit setup rate
        dy[1] = y[0] - kappa * y[1];
    };
    const double lam0 = lambda_curve.values.front();
    const auto path =
        integrate_cyclic<2>(lambda_curve, f, samples_per_hour, {lam0, lam0 / kappa});
    return {sample_to_curve(lambda_curve, path, 0), sample_to_curve(lambda_curve, path, 1)};
}

CloudDimensioning dimension_cloud(double R, double kappa, double epsilon, double gamma_preset) {
    if (!(R > 0.0)) throw domain_error("dimension_cloud: R must be > 0");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw domain_error("dimension_cloud: epsilon must lie in (0,1)");
    // solve g_c(beta, gamma_preset) = epsilon (g_c decreasing in beta)
    auto g = [&](double b) { return retrial::cloud_limits({b, gamma_preset, kappa}).g; };
    double lo = -5.0, hi = 5.0;
    if (g(lo) < epsilon || g(hi) > epsilon)
        throw convergence_error("dimension_cloud: target not bracketed at gamma preset");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > epsilon ? lo : hi) = mid;
    }
    const double beta_eps = 0.5 * (lo + hi);
    const double fc = retrial::cloud_limits({beta_eps, gamma_preset, kappa}).f;
    CloudDimensioning out{};
    out.beta_star = beta_eps + fc;
    out.gamma_star = gamma_preset + fc / std::sqrt(kappa);
    out.s = static_cast<int>(std::ceil(R + out.beta_star * std::sqrt(R)));
    out.n = static_cast<int>(
        std::llround(out.s + R / kappa + out.gamma_star * std::sqrt(R / kappa)));
    return out;
}

ErlangRDimensioning dimension_erlang_r(double lambda, double mu, double delta, double p,
                                       double epsilon, double gamma_preset) {
    const double R1 = lambda / ((1.0 - p) * mu);
    const double r = delta / (delta + p * mu);
    auto g = [&](double b) {
        return qedkit::erlang_r::qed_limits_blocking(r, {b, gamma_preset}).g;
    };
    double lo = -5.0, hi = 5.0;
    if (g(lo) < epsilon || g(hi) > epsilon)
        throw convergence_error("dimension_erlang_r: target not bracketed at gamma preset");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > epsilon ? lo : hi) = mid;
    }
    const double beta_eps = 0.5 * (lo + hi);
    const double fb = qedkit::erlang_r::qed_limits_blocking(r, {beta_eps, gamma_preset}).f;
    ErlangRDimensioning out{};
    out.beta = beta_eps + fb;
    out.gamma = gamma_preset + fb / std::sqrt(r);
    out.s = static_cast<int>(std::ceil(R1 + out.beta * std::sqrt(R1)));
    out.n = static_cast<int>(std::floor(R1 / r + out.gamma * std::sqrt(R1 / r)));
    return out;
}

StaffingCurve staffing_curve(const OfferedLoadCurve& lambda_curve, StaffingMethod method,
                             const StaffingTargets& targets, double review_period) {
    lambda_curve.validate();
    if (!(review_period > 0.0)) throw domain_error("staffing_curve: review period must be > 0");

    StaffingCurve out;
    out.review_period = review_period;
    const double t0 = lambda_curve.time_grid.front();
    const double T = lambda_curve.cycle_length();
    const int slices = static_cast<int>(std::ceil(T / review_period - 1e-9));

    const double beta = solve_beta_for_delay(targets.epsilon);

    if (method == StaffingMethod::Psa || method == StaffingMethod::Mol) {
        OfferedLoadCurve load;
        if (method == StaffingMethod::Mol) load = mol_offered_load(lambda_curve, targets.mu);
        for (int i = 0; i < slices; ++i) {
            const double t = t0 + (i + 0.5) * review_period;  // rule at slice midpoint
            const double R = (method == StaffingMethod::Psa) ? lambda_curve.at(t) / targets.mu
                                                             : load.at(t);
            const int s = std::max(1, static_cast<int>(std::ceil(R + beta * std::sqrt(R))));
            out.time_grid.push_back(t0 + i * review_period);
            out.s_levels.push_back(s);
        }
        return out;
    }

    if (method == StaffingMethod::CloudMol) {
        const CloudDimensioning d =
            dimension_cloud(std::max(1.0, lambda_curve.max_value()), targets.kappa,
                            targets.epsilon, targets.gamma_star);
        const CloudOfferedLoad load = cloud_offered_load(lambda_curve, targets.kappa);
        for (int i = 0; i < slices; ++i) {
            const double t = t0 + (i + 0.5) * review_period;
            const double R1 = load.r1.at(t), R2 = load.r2.at(t);
            const int s = std::max(
                1, static_cast<int>(std::ceil(R1 + d.beta_star * std::sqrt(R1))));
            const int n = std::max(
                s, static_cast<int>(std::llround(s + R2 + d.gamma_star * std::sqrt(R2))));
            out.time_grid.push_back(t0 + i * review_period);
            out.s_levels.push_back(s);
            out.n_levels.push_back(n);
        }
        return out;
    }

    // Erlang-R MOL: per-slice s(t) = ceil(R1 + beta sqrt(R1)),
    // n(t) = floor(R1+R2 + gamma sqrt(R1+R2)) with the corrected hedges.
    const double r = targets.r;
    const double pmu = (1.0 / r - 1.0);  // p mu given delta = 1 scaling is caller's business
    (void)pmu;
    auto gb = [&](double b) {
        return erlang_r::qed_limits_blocking(r, {b, targets.gamma_star}).g;
    };
    double lo = -5.0, hi = 5.0;
    if (gb(lo) < targets.epsilon || gb(hi) > targets.epsilon)
        throw convergence_error("staffing_curve: Erlang-R target not bracketed");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (gb(mid) > targets.epsilon ? lo : hi) = mid;
    }
    const double beta_eps = 0.5 * (lo + hi);
    const double fb = erlang_r::qed_limits_blocking(r, {beta_eps, targets.gamma_star}).f;
    const double beta_c = beta_eps + fb;
    const double gamma_c = targets.gamma_star + fb / std::sqrt(r);
    // loads from the two-station ODEs; here mu is the needy rate and the
    // spec's p, delta are implied by (r, mu): r = delta/(delta + p mu).
    erlang_r::ErlangRSpec proto{1.0, targets.mu, 1.0, 0.5, 1, 1};
    // choose delta, p consistent with r at the given mu: fix p = 1 - r, then
    // delta = r p mu/(1-r).
    proto.p = 1.0 - r;
    proto.delta = r * proto.p * targets.mu / (1.0 - r);
    const ErlangROfferedLoad load = erlang_r_offered_load(lambda_curve, proto);
    for (int i = 0; i < slices; ++i) {
        const double t = t0 + (i + 0.5) * review_period;
        const double R1 = load.r1.at(t);
        const double Rn = load.r1.at(t) + load.r2.at(t);
        const int s = std::max(1, static_cast<int>(std::ceil(R1 + beta_c * std::sqrt(R1))));
        const int n =
            std::max(s, static_cast<int>(std::floor(Rn + gamma_c * std::sqrt(Rn))));
        out.time_grid.push_back(t0 + i * review_period);
        out.s_levels.push_back(s);
        out.n_levels.push_back(n);
    }
    return out;
}

} // namespace qedkit::dim
