#ifndef QEDKIT_BULK_HPP
#define QEDKIT_BULK_HPP

// Exact steady-state measures of the discrete bulk-service queue
// Q(j+1) = max{Q(j) + A_j - s, 0} by three independent routes: roots of
// z^s - A(z) inside the unit disk, numerical Pollaczek contour integrals, and
// truncated Spitzer sums. The routes cross-validate each other to ~1e-8.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace qedkit::bulk {

// Per-period arrival law: Poisson(lambda) or Gamma-Poisson (negative
// binomial with pgf (1 + b(1-z))^{-a}).
class ArrivalLaw {
  public:
    static ArrivalLaw poisson(double lambda);
    static ArrivalLaw gamma_poisson(double a, double b);

    bool is_poisson() const { return kind_ == Kind::Poisson; }
    double poisson_lambda() const { return p1_; }
    double gp_a() const { return p1_; }
    double gp_b() const { return p2_; }

    double mean() const;
    double variance() const;
    double factorial_moment2() const;  // E[A(A-1)]
    double factorial_moment3() const;  // E[A(A-1)(A-2)]

    std::complex<double> pgf(std::complex<double> z) const;
    std::complex<double> log_pgf(std::complex<double> z) const;
    std::complex<double> pgf_derivative(std::complex<double> z) const;
    // A(z)^{1/s} through the principal branch (analytic on |z| <= 1 for both
    // supported laws).
    std::complex<double> pgf_root(std::complex<double> z, int s) const;

    double log_pmf(std::int64_t k) const;
    // Analyticity radius of the pgf (inf for Poisson, 1 + 1/b for NB).
    double radius() const;

  private:
    enum class Kind { Poisson, GammaPoisson };
    Kind kind_;
    double p1_ = 0.0, p2_ = 0.0;
};

struct BulkSpec {
    ArrivalLaw arrivals;
    int s;  // service capacity per period
    double rho() const { return arrivals.mean() / s; }
    void validate() const;  // stability: mean < s
};

struct RootSet {
    std::vector<std::complex<double>> roots;  // s-1 roots in |z| < 1
    double residual = 0.0;                    // max |z^s - A(z)| over roots
};

// Fixed-point iteration z <- w_k A(z)^{1/s} with Newton polishing once the
// iterate stalls. Verifies the contraction bound on a 256-point circle grid
// first and fails loudly when it does not hold.
RootSet find_roots_iter(const BulkSpec& spec);

// Buermann-Lagrange series route (Gamma-Poisson arrivals only). Requires the
// series convergence radius r_BL to exceed 1 with margin >= 1.05.
RootSet find_roots_bl(const BulkSpec& spec);

struct ExactMeasures {
    double mean_queue;
    double p_empty;
    std::optional<double> variance_queue;  // not produced by the root route
};

// Mean and empty probability from the root factorization.
ExactMeasures exact_measures_roots(const BulkSpec& spec, const RootSet& roots);

struct PollaczekMeasures {
    double mean_queue;
    double variance_queue;
    double p_empty;
};

// Trapezoidal contour quadrature of the Pollaczek integrals on |z| = 1+eps,
// eps = (r0-1)/2 with r0 the real super-unit zero of z^s - A(z).
PollaczekMeasures pollaczek_measures(const BulkSpec& spec);

struct SpitzerBounds {
    double mean_queue_lower;  // nondecreasing in K, <= true mean
    double p_empty_upper;     // nonincreasing in K, >= true value
};

// Truncated Spitzer sums Sum_{k<=K} (1/k) E[S_k^+] etc., with S_k evaluated
// through the closed-form k-fold law (Poisson/NB sums stay in the family).
SpitzerBounds spitzer_truncated(const BulkSpec& spec, int terms);

} // namespace qedkit::bulk

#endif
