#ifndef QEDKIT_OVERDISPERSION_HPP
#define QEDKIT_OVERDISPERSION_HPP

// Robust heavy-traffic approximations for Gamma-Poisson arrivals (corrected
// hedge beta_n and scale sigma~_n), their classical CLT counterparts, and the
// statistical toolkit for detecting overdispersion and fitting the mixture.

#include <cstdint>
#include <vector>

namespace qedkit::od {

struct OverdispersedSpec {
    double a;     // Gamma shape > 0
    double b;     // Gamma scale > 0
    double beta;  // hedge > 0

    double mu() const { return a * b; }
    double sigma2() const { return a * b * (b + 1.0); }
    double capacity() const;  // real-valued s = mu + beta sigma
    double rho() const { return mu() / capacity(); }
    void validate() const;

    // Back-solve (a, b) from an integer capacity under the table scaling
    // mu_n = n, sigma_n = n^delta: n + beta n^delta = s.
    static OverdispersedSpec from_capacity(int s, double beta, double delta);
};

struct RobustHedge {
    double beta_n;       // corrected hedge, always < beta
    double sigma_tilde;  // corrected scale beta_n (b + rho)/(1 - rho)
};

RobustHedge robust_hedge(const OverdispersedSpec& spec);

struct QueueMoments {
    double mean_queue;
    double variance_queue;
    double p_empty;
};

// Saddle-point corrected approximations (beta_n, sigma~_n).
QueueMoments robust_measures(const OverdispersedSpec& spec);

// Classical Gaussian-random-walk approximations (beta, sigma_n).
QueueMoments classic_measures(const OverdispersedSpec& spec);

struct CountSample {
    std::vector<std::int64_t> counts;

    std::size_t n_obs() const { return counts.size(); }
    double sample_mean() const;
    double sample_variance() const;  // unbiased
    void validate() const;           // n_obs >= 2, counts >= 0
};

struct TestResult {
    double statistic;
    double p_value;
    bool reject;
};

// Dispersion test: D_N = (N-1) S^2 / Abar ~ chi^2_{N-1} under Poisson.
TestResult dispersion_test(const CountSample& sample, double alpha);

// Neyman-Scott test: T_N = sqrt(N/2) (S^2/Abar - 1), asymptotically N(0,1).
TestResult neyman_scott_test(const CountSample& sample, double alpha);

struct GammaPoissonFit {
    bool applicable;  // false when the sample is not overdispersed
    double a_hat;
    double b_hat;
    double loglik;  // profile log-likelihood at the optimum (per observation)
};

// Profile-likelihood fit of the negative binomial: r maximizes L(r) by
// golden-section search on log r; a = r, b = Abar / r (mean matching).
GammaPoissonFit fit_gamma_poisson(const CountSample& sample);

struct BootstrapGof {
    double statistic;  // Kolmogorov-Smirnov distance of the fitted NB
    double p_value;    // parametric bootstrap tail probability
    int replications;
};

// Parametric bootstrap goodness-of-fit for the fitted Gamma-Poisson mixture.
BootstrapGof bootstrap_gof(const CountSample& sample, int replications = 10000,
                           std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

} // namespace qedkit::od

#endif
