#include "qedkit/overdispersion.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/grw.hpp"
#include "qedkit/rng.hpp"
#include "qedkit/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace qedkit::od {

using specfun::log_gamma;

double OverdispersedSpec::capacity() const { return mu() + beta * std::sqrt(sigma2()); }

void OverdispersedSpec::validate() const {
    if (!(a > 0.0) || !(b > 0.0)) throw domain_error("OverdispersedSpec: a, b must be > 0");
    if (!(beta > 0.0)) throw domain_error("OverdispersedSpec: beta must be > 0");
}

OverdispersedSpec OverdispersedSpec::from_capacity(int s, double beta, double delta) {
    if (!(delta > 0.5 && delta < 1.0))
        throw domain_error("from_capacity: delta must lie in (1/2, 1)");
    if (s < 2) throw domain_error("from_capacity: s too small");
    // solve n + beta n^delta = s by bisection
    double lo = 1e-9, hi = static_cast<double>(s);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid + beta * std::pow(mid, delta) < s ? lo : hi) = mid;
    }
    const double n = 0.5 * (lo + hi);
    const double bb = std::pow(n, 2.0 * delta - 1.0) - 1.0;
    if (!(bb > 0.0)) throw domain_error("from_capacity: implied b <= 0 (s too small for delta)");
    return OverdispersedSpec{n / bb, bb, beta};
}

RobustHedge robust_hedge(const OverdispersedSpec& spec) {
    spec.validate();
    const double s = spec.capacity();
    const double rho = spec.rho();
    const double b = spec.b;
    const double beta_n_sq = s * std::pow((1.0 - rho) / (b + 1.0), 2.0) * (1.0 + b / rho);
    RobustHedge h{};
    h.beta_n = std::sqrt(beta_n_sq);
    h.sigma_tilde = h.beta_n * (b + rho) / (1.0 - rho);
    return h;
}

QueueMoments robust_measures(const OverdispersedSpec& spec) {
    spec.validate();
    const RobustHedge h = robust_hedge(spec);
    const double rho = spec.rho();
    const double b = spec.b;
    const grw::GrwMoments m = grw::grw_moments_integral(grw::GrwDrift{h.beta_n});
    // z_sp = 1 + (1-rho)/(b+rho); the variance carries the extra
    // (z_sp + 1)/2 factor relative to sigma~^2 Var M.
    const double zsp_plus_1 = 2.0 + (1.0 - rho) / (b + rho);
    QueueMoments out{};
    out.mean_queue = h.sigma_tilde * m.mean;
    out.variance_queue = h.sigma_tilde * h.sigma_tilde * m.variance * zsp_plus_1 / 2.0;
    // P(Q=0) = exp(-((b+rho)/(b+1)) c0(beta_n)) = p0^{(b+rho)/(b+1)}
    out.p_empty = std::pow(m.p0, (b + rho) / (b + 1.0));
    return out;
}

QueueMoments classic_measures(const OverdispersedSpec& spec) {
    spec.validate();
    const double sigma_n = std::sqrt(spec.sigma2());
    const grw::GrwMoments m = grw::grw_moments_integral(grw::GrwDrift{spec.beta});
    QueueMoments out{};
    out.mean_queue = sigma_n * m.mean;
    out.variance_queue = sigma_n * sigma_n * m.variance;
    out.p_empty = m.p0;
    return out;
}

void CountSample::validate() const {
    if (counts.size() < 2) throw domain_error("CountSample: need at least 2 observations");
    for (auto c : counts)
        if (c < 0) throw domain_error("CountSample: counts must be nonnegative");
}

double CountSample::sample_mean() const {
    double s = 0.0;
    for (auto c : counts) s += static_cast<double>(c);
    return s / counts.size();
}

double CountSample::sample_variance() const {
    const double m = sample_mean();
    double s = 0.0;
    for (auto c : counts) {
        const double d = c - m;
        s += d * d;
    }
    return s / (counts.size() - 1.0);
}

TestResult dispersion_test(const CountSample& sample, double alpha) {
    sample.validate();
    const double abar = sample.sample_mean();
    if (!(abar > 0.0)) throw domain_error("dispersion_test: degenerate sample (mean 0)");
    const double N = static_cast<double>(sample.n_obs());
    const double D = (N - 1.0) * sample.sample_variance() / abar;
    const double p = specfun::gamma_q((N - 1.0) / 2.0, D / 2.0);  // chi2 upper tail
    return {D, p, p < alpha};
}

TestResult neyman_scott_test(const CountSample& sample, double alpha) {
    sample.validate();
    const double abar = sample.sample_mean();
    if (!(abar > 0.0)) throw domain_error("neyman_scott_test: degenerate sample (mean 0)");
    const double N = static_cast<double>(sample.n_obs());
    const double T = std::sqrt(N / 2.0) * (sample.sample_variance() / abar - 1.0);
    const double p = 1.0 - specfun::std_normal_cdf(T);
    return {T, p, p < alpha};
}

namespace {

// Profile log-likelihood of the negative binomial in r (per observation):
// (1/N) sum_i sum_{j=1}^{x_i} ln(r+j-1) + r ln r - (r + abar) ln(r + abar).
// The inner sum is ln Gamma(r + x_i) - ln Gamma(r).
double profile_loglik(const CountSample& sample, double r) {
    const double abar = sample.sample_mean();
    double s = 0.0;
    for (auto x : sample.counts) s += log_gamma(r + static_cast<double>(x)) - log_gamma(r);
    return s / sample.n_obs() + r * std::log(r) - (r + abar) * std::log(r + abar);
}

} // namespace

GammaPoissonFit fit_gamma_poisson(const CountSample& sample) {
    sample.validate();
    const double abar = sample.sample_mean();
    if (!(sample.sample_variance() > abar) || !(abar > 0.0)) return {false, 0.0, 0.0, 0.0};
    // golden-section on log r over (1e-3, 1e6)
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::log(1e-3), hi = std::log(1e6);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = profile_loglik(sample, std::exp(x1));
    double f2 = profile_loglik(sample, std::exp(x2));
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = profile_loglik(sample, std::exp(x2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = profile_loglik(sample, std::exp(x1));
        }
    }
    const double r = std::exp(0.5 * (lo + hi));
    return {true, r, abar / r, profile_loglik(sample, r)};
}

namespace {

// NB cdf table on 0..K for KS distance.
std::vector<double> nb_cdf(double a, double b, std::int64_t K) {
    std::vector<double> cdf(K + 1);
    const double logq = std::log(b / (1.0 + b));
    double acc = 0.0;
    for (std::int64_t k = 0; k <= K; ++k) {
        const double lp = log_gamma(a + k) - log_gamma(a) - log_gamma(k + 1.0) -
                          a * std::log1p(b) + k * logq;
        acc += std::exp(lp);
        cdf[k] = std::min(acc, 1.0);
    }
    return cdf;
}

double ks_distance(const std::vector<std::int64_t>& counts, double a, double b) {
    std::vector<std::int64_t> sorted(counts);
    std::sort(sorted.begin(), sorted.end());
    const std::int64_t K = sorted.back() + 1;
    const std::vector<double> cdf = nb_cdf(a, b, K);
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double f_lo = static_cast<double>(i) / n;
        const double f_hi = static_cast<double>(j) / n;
        const double F = cdf[sorted[i]];
        const double F_prev = sorted[i] > 0 ? cdf[sorted[i] - 1] : 0.0;
        d = std::max({d, std::fabs(f_hi - F), std::fabs(f_lo - F_prev)});
        i = j;
    }
    return d;
}

} // namespace

BootstrapGof bootstrap_gof(const CountSample& sample, int replications, std::uint64_t seed) {
    sample.validate();
    const GammaPoissonFit fit = fit_gamma_poisson(sample);
    if (!fit.applicable) throw method_inapplicable("bootstrap_gof: sample not overdispersed");
    const double observed = ks_distance(sample.counts, fit.a_hat, fit.b_hat);
    int exceed = 0;
    const std::size_t N = sample.n_obs();
    for (int r = 0; r < replications; ++r) {
        rng::Philox gen(seed, static_cast<std::uint64_t>(r) + 1);
        CountSample boot;
        boot.counts.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            const double lam = gen.gamma(fit.a_hat) * fit.b_hat;
            boot.counts[i] = lam > 0.0 ? gen.poisson(lam) : 0;
        }
        const GammaPoissonFit bf = fit_gamma_poisson(boot);
        if (!bf.applicable) continue;  // counts as a better (smaller) statistic
        if (ks_distance(boot.counts, bf.a_hat, bf.b_hat) >= observed) ++exceed;
    }
    return {observed, static_cast<double>(exceed) / replications, replications};
}

} // namespace qedkit::od
