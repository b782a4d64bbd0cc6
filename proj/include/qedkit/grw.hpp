#ifndef QEDKIT_GRW_HPP
#define QEDKIT_GRW_HPP

// Functionals of the all-time maximum M_beta of the Gaussian random walk with
// Normal(-beta, 1) increments, plus the G-integral family G0..G6 that the
// heavy-traffic formulas are built from. Every quantity is available through
// two independent routes (zeta series inside its validity strip, real
// integrals everywhere); the pair acts as a built-in cross-check.

namespace qedkit::grw {

struct GrwDrift {
    double beta;  // > 0
};

struct GrwMoments {
    double p0;        // P(M_beta = 0)
    double mean;      // E[M_beta]
    double variance;  // Var M_beta
};

// Zeta-series route; valid for 0 < beta < 2 sqrt(pi). Terms are truncated at
// l = 25 or once a term drops below 1e-13.
GrwMoments grw_moments_series(const GrwDrift& d);

// Real-integral route (Pollaczek-derived semi-infinite integrals), valid for
// any beta bounded away from 0.
GrwMoments grw_moments_integral(const GrwDrift& d);

// G_k(b) for k = 0..6 by quadrature. Inside the series strip b < sqrt(2 pi)
// the zeta-series value is computed as well and the two must agree to 1e-6
// (1e-9 typical); the quadrature value is returned.
double g_family(double b, int which);

// Series-only / quadrature-only evaluations (exposed for the cross-route
// property tests).
double g_family_series(double b, int which);
double g_family_quadrature(double b, int which);

// F(beta) of the empty-system theorem: -ln P(M_beta = 0).
double spitzer_f_series(double beta);
double spitzer_f_integral(double beta);

} // namespace qedkit::grw

#endif
