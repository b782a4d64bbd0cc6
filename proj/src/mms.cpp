#include "qedkit/mms.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/specfun.hpp"

#include <cmath>
#include <algorithm>

namespace qedkit::mms {

using specfun::log_gamma;

void MmsSpec::validate() const {
    if (!(lambda > 0.0)) throw domain_error("MmsSpec: lambda must be > 0");
    if (!(mu > 0.0)) throw domain_error("MmsSpec: mu must be > 0");
    if (s < 1) throw domain_error("MmsSpec: s must be >= 1");
}

void MmsSpec::require_stable() const {
    validate();
    if (!(rho() < 1.0))
        throw instability_error("M/M/s: rho = " + std::to_string(rho()) + " >= 1");
}

void FiniteMmsSpec::validate() const {
    base.validate();
    if (n < base.s) throw domain_error("FiniteMmsSpec: n must be >= s");
}

void AbandonSpec::validate() const {
    base.validate();
    if (!(theta > 0.0)) throw domain_error("AbandonSpec: theta must be > 0");
}

namespace {

// log of Sum_{k=0}^{s} R^k / k!   (log-sum-exp via the Poisson cdf:
// Sum = e^R P(Pois(R) <= s) = e^R Q(s+1, R))
double log_poisson_partial_sum(double R, int s) {
    return R + std::log(specfun::gamma_q(s + 1.0, R));
}

} // namespace

MmsDistribution mms_stationary(const MmsSpec& spec) {
    spec.require_stable();
    const double R = spec.offered_load();
    const double rho = spec.rho();
    const int s = spec.s;
    // pi_0^{-1} = Sum_{k<s} R^k/k! + R^s/s! * 1/(1-rho)
    const double log_head = log_poisson_partial_sum(R, s - 1);
    const double log_srv = s * std::log(R) - log_gamma(s + 1.0) - std::log1p(-rho);
    const double m = std::max(log_head, log_srv);
    const double log_norm = m + std::log(std::exp(log_head - m) + std::exp(log_srv - m));
    return MmsDistribution{-log_norm, spec};
}

double MmsDistribution::pmf(std::int64_t k) const {
    if (k < 0) return 0.0;
    const double R = spec.offered_load();
    const double rho = spec.rho();
    if (k <= spec.s)
        return std::exp(log_pi0 + k * std::log(R) - log_gamma(k + 1.0));
    return std::exp(log_pi0 + spec.s * std::log(R) - log_gamma(spec.s + 1.0) +
                    (k - spec.s) * std::log(rho));
}

double MmsDistribution::head_sum(std::int64_t K) const {
    double s = 0.0;
    for (std::int64_t k = 0; k <= K; ++k) s += pmf(k);
    return s;
}

double MmsDistribution::tail_sum(std::int64_t K) const {
    const double rho = spec.rho();
    if (K < spec.s) {
        double s = 0.0;
        for (std::int64_t k = K + 1; k <= spec.s; ++k) s += pmf(k);
        return s + pmf(spec.s) * rho / (1.0 - rho);
    }
    return pmf(K) * rho / (1.0 - rho);
}

double erlang_b(double offered_load, int s) {
    if (offered_load < 0.0) throw domain_error("erlang_b: offered load must be >= 0");
    if (s < 0) throw domain_error("erlang_b: s must be >= 0");
    double B = 1.0;
    for (int k = 1; k <= s; ++k) B = offered_load * B / (k + offered_load * B);
    return B;
}

MmsMetrics mms_metrics(const MmsSpec& spec) {
    spec.require_stable();
    const double R = spec.offered_load();
    const double rho = spec.rho();
    const double B = erlang_b(R, spec.s);
    const double C = B / (1.0 - rho * (1.0 - B));  // Erlang-C
    MmsMetrics m{};
    m.delay_prob = C;
    m.expected_wait = C * (1.0 / spec.s) / (spec.mu * (1.0 - rho));
    m.expected_queue = spec.lambda * m.expected_wait;
    return m;
}

FiniteMmsMetrics mmsn_metrics(const FiniteMmsSpec& spec) {
    spec.validate();
    const double R = spec.base.offered_load();
    const int s = spec.base.s, n = spec.n;
    // log pi_k up to normalization
    std::vector<double> lw(n + 1);
    for (int k = 0; k <= n; ++k) {
        lw[k] = (k <= s) ? k * std::log(R) - log_gamma(k + 1.0)
                         : s * std::log(R) - log_gamma(s + 1.0) + (k - s) * std::log(R / s);
    }
    const double m = *std::max_element(lw.begin(), lw.end());
    double z = 0.0;
    for (double v : lw) z += std::exp(v - m);
    double delay = 0.0, block = 0.0, lq = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double p = std::exp(lw[k] - m) / z;
        if (k >= s) delay += p;
        if (k == n) block = p;
        if (k > s) lq += (k - s) * p;
    }
    FiniteMmsMetrics out{};
    out.delay_prob = delay;
    out.block_prob = block;
    const double lambda_admitted = spec.base.lambda * (1.0 - block);
    out.expected_wait = lq / lambda_admitted;
    return out;
}

ErlangAMetrics erlang_a_metrics(const AbandonSpec& spec) {
    spec.validate();
    const double lambda = spec.base.lambda, mu = spec.base.mu, theta = spec.theta;
    const int s = spec.base.s;
    // Birth-death with death rate min(k,s) mu + (k-s)^+ theta. Adaptive
    // truncation: extend until the geometric tail bound drops below 1e-12.
    std::vector<double> lw;
    lw.reserve(1024);
    lw.push_back(0.0);
    std::int64_t K = 0;
    double lmax = 0.0;
    for (;;) {
        const std::int64_t k = K + 1;
        const double death = std::min<double>(k, s) * mu + std::max<double>(k - s, 0) * theta;
        lw.push_back(lw.back() + std::log(lambda / death));
        ++K;
        lmax = std::max(lmax, lw.back());
        const double ratio = lambda / (std::min<double>(K + 1, s) * mu +
                                       std::max<double>(K + 1 - s, 0) * theta);
        if (ratio < 1.0 && K > s) {
            // tail mass bound: pi_K * ratio/(1-ratio), relative to head >= pi_max
            const double bound = std::exp(lw.back() - lmax) * ratio / (1.0 - ratio);
            if (bound < 1e-12) break;
        }
        if (K > 50'000'000) throw convergence_error("erlang_a: truncation did not close");
    }
    double z = 0.0;
    for (double v : lw) z += std::exp(v - lmax);
    double delay = 0.0, lq = 0.0;
    for (std::int64_t k = 0; k <= K; ++k) {
        const double p = std::exp(lw[k] - lmax) / z;
        if (k >= s) delay += p;
        if (k > s) lq += (k - s) * p;
    }
    ErlangAMetrics out{};
    out.delay_prob = delay;
    out.expected_wait = lq / lambda;                 // Little on the queue
    out.abandon_prob = theta * lq / lambda;          // abandonment rate / lambda
    out.truncation = K;
    return out;
}

} // namespace qedkit::mms
