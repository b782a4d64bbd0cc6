#ifndef QEDKIT_SPECFUN_HPP
#define QEDKIT_SPECFUN_HPP

// Scalar special functions shared by all approximation formulas.
// Everything here is a pure, reentrant map; no caching, no global state.

namespace qedkit::specfun {

// Standard normal density phi(x) = exp(-x^2/2)/sqrt(2 pi).
double std_normal_pdf(double x);

// Standard normal cdf Phi(x), computed through erfc so that the tails keep
// full relative accuracy (the asymptotic formulas divide by tail values).
double std_normal_cdf(double x);

// Complementary error function. Thin wrapper with a finiteness check.
double erfc(double x);

// Scaled complement exp(x^2) erfc(x). Stable for large positive x where the
// plain product would be 0 * inf.
double erfcx(double x);

// Phi(x)/phi(x), stable for all real x (Mills-type ratio).
double mills_ratio(double x);

// Normal hazard phi(x)/Phi(-x), stable for all real x.
double normal_hazard(double x);

// exp(x^2/2) * Phi(x) without overflow for x <= 0; throws for arguments where
// the value itself overflows a double.
double exp_half_sq_cdf(double x);

// Riemann zeta for real s < 1 (the lattice of half-integers used by the
// series expansions, plus general s < 1). s >= 1 is rejected.
double zeta(double s);

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a), a > 0,
// x >= 0. Also P(Pois(x) <= k) = Q(k+1, x), and the chi-square upper tail
// P(chi2_k > x) = Q(k/2, x/2).
double gamma_q(double a, double x);

// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double gamma_p(double a, double x);

} // namespace qedkit::specfun

#endif
