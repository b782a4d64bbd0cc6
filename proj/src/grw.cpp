#include "qedkit/grw.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/quadrature.hpp"
#include "qedkit/specfun.hpp"

#include <cmath>
#include <string>

namespace qedkit::grw {

namespace {

constexpr double kTwoSqrtPi = 3.5449077018110320546;  // 2 sqrt(pi)
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr int kMaxTerms = 25;
constexpr double kTermTol = 1e-13;

using specfun::zeta;

// Sum_{l>=0} zeta(s0 - l) * (-b^2/2)^l / (l! * prod of denominators), where
// den(l) supplies the (2l+1)(2l+2)... factors. Used by all series below.
template <typename Den>
double zeta_series(double s0, double beta, Den den) {
    double sum = 0.0;
    double pow_term = 1.0;  // (-beta^2/2)^l / l!
    for (int l = 0; l <= kMaxTerms; ++l) {
        const double term = zeta(s0 - l) * pow_term / den(l);
        sum += term;
        if (std::fabs(term) < kTermTol) break;
        pow_term *= -0.5 * beta * beta / (l + 1.0);
    }
    return sum;
}

// Integrands share the kernel E(b,t) = exp(-b^2-t^2)/(1-exp(-b^2-t^2)).
inline double kernel(double b, double t) {
    const double e = std::exp(-b * b - t * t);
    return e / (1.0 - e);
}
inline double kernel2(double b, double t) {  // E/(1-E) second power form
    const double e = std::exp(-b * b - t * t);
    const double u = 1.0 - e;
    return e / (u * u);
}

double quad_g(double b, int which) {
    const double tmax = std::sqrt(36.0 + b * b);
    auto f = [b, which](double t) -> double {
        const double t2 = t * t, b2 = b * b;
        switch (which) {
            case 0: return t2 / (b2 + t2) * kernel(b, t);
            case 1: return kernel(b, t);
            case 2: return b2 / (b2 + t2) * kernel(b, t);
            case 3: return t2 / ((b2 + t2) * (b2 + t2)) * kernel(b, t);
            case 4: return t2 / (b2 + t2) * kernel2(b, t);
            case 5: return kernel2(b, t);
            case 6: return b2 / (b2 + t2) * kernel2(b, t);
        }
        return 0.0;
    };
    // The integrands vary on scale b near the origin (they behave like
    // powers of 1/(b^2+t^2)); resolve that region with b-sized panels.
    const double knee = std::min(1.0, 16.0 * b);
    const double w0 = std::min(0.5, b / 2.0);
    return quad::panels(f, 0.0, knee, w0) + quad::panels(f, knee, tmax, 0.5);
}

double series_g(double b, int which) {
    const double b2 = b * b;
    switch (which) {
        case 0:
            return M_PI / (4.0 * b) + M_PI * b / 4.0 + 0.5 * kSqrtPi * zeta(0.5) +
                   kSqrtPi * b2 * zeta_series(-0.5, b * std::sqrt(2.0), [](int l) {
                       return (2.0 * l + 1.0) * (2.0 * l + 2.0);
                   });
        case 1:
            return M_PI / (2.0 * b) +
                   0.5 * kSqrtPi * zeta_series(0.5, b * std::sqrt(2.0), [](int) { return 1.0; });
        case 2:
            return M_PI / (4.0 * b) - M_PI * b / 4.0 -
                   kSqrtPi * b2 * zeta_series(-0.5, b * std::sqrt(2.0), [](int l) {
                       return 2.0 * l + 1.0;
                   });
        case 3:
            return M_PI / (16.0 * b2 * b) - M_PI / (8.0 * b) - M_PI * b / 24.0 -
                   zeta(-0.5) * kSqrtPi -
                   2.0 * kSqrtPi * b2 * zeta_series(-1.5, b * std::sqrt(2.0), [](int l) {
                       return (2.0 * l + 1.0) * (2.0 * l + 2.0) * (2.0 * l + 3.0);
                   });
        case 4:
            return M_PI / (16.0 * b2 * b) + M_PI * b / 24.0 + 0.5 * zeta(-0.5) * kSqrtPi +
                   kSqrtPi * b2 * zeta_series(-1.5, b * std::sqrt(2.0), [](int l) {
                       return (2.0 * l + 1.0) * (2.0 * l + 2.0);
                   });
        case 5:
            return M_PI / (4.0 * b2 * b) +
                   0.5 * kSqrtPi * zeta_series(-0.5, b * std::sqrt(2.0), [](int) { return 1.0; });
        case 6:
            // leading term 3 pi/(16 b^3): forced by G6 = G5 - G4 and the
            // b^{-3} leading terms of those two series
            return 3.0 * M_PI / (16.0 * b2 * b) - M_PI * b / 24.0 -
                   kSqrtPi * b2 * zeta_series(-1.5, b * std::sqrt(2.0), [](int l) {
                       return 2.0 * l + 1.0;
                   });
    }
    throw domain_error("g_family: index must be 0..6");
}

} // namespace

double g_family_quadrature(double b, int which) {
    if (!(b > 0.0)) throw domain_error("g_family: b must be > 0");
    if (which < 0 || which > 6) throw domain_error("g_family: index must be 0..6");
    return quad_g(b, which);
}

double g_family_series(double b, int which) {
    if (!(b > 0.0)) throw domain_error("g_family: b must be > 0");
    if (b >= kSqrt2Pi) throw method_inapplicable("g_family: series requires b < sqrt(2 pi)");
    return series_g(b, which);
}

double g_family(double b, int which) {
    const double q = g_family_quadrature(b, which);
    if (b < kSqrt2Pi - 1e-9) {
        const double s = series_g(b, which);
        const double scale = std::max(1.0, std::fabs(q));
        if (std::fabs(q - s) > 1e-6 * scale)
            throw numerical_error("g_family: series/quadrature disagree beyond 1e-6 at b=" +
                                  std::to_string(b) + ", k=" + std::to_string(which));
    }
    return q;
}

GrwMoments grw_moments_series(const GrwDrift& d) {
    const double beta = d.beta;
    if (!(beta > 0.0)) throw domain_error("grw: beta must be > 0");
    if (beta >= kTwoSqrtPi - 1e-6)
        throw method_inapplicable("grw series: beta outside (0, 2 sqrt(pi)); use the integral route");
    GrwMoments m{};
    m.p0 = std::sqrt(2.0) * beta *
           std::exp(beta / kSqrt2Pi *
                    zeta_series(0.5, beta, [](int l) { return 2.0 * l + 1.0; }));
    m.mean = 1.0 / (2.0 * beta) + zeta(0.5) / kSqrt2Pi + beta / 4.0 +
             beta * beta / kSqrt2Pi *
                 zeta_series(-0.5, beta, [](int l) { return (2.0 * l + 1.0) * (2.0 * l + 2.0); });
    m.variance = 1.0 / (4.0 * beta * beta) - 0.25 - 2.0 * zeta(-0.5) / kSqrt2Pi * beta -
                 beta * beta / 24.0 -
                 2.0 * beta * beta * beta / kSqrt2Pi *
                     zeta_series(-1.5, beta, [](int l) {
                         return (2.0 * l + 1.0) * (2.0 * l + 2.0) * (2.0 * l + 3.0);
                     });
    return m;
}

GrwMoments grw_moments_integral(const GrwDrift& d) {
    const double beta = d.beta;
    if (!(beta > 0.0)) throw domain_error("grw: beta must be > 0");
    const double b = beta / std::sqrt(2.0);
    if (b < 1e-3)
        throw domain_error("grw integral: beta too close to 0 (log singularity in c0)");
    GrwMoments m{};
    m.p0 = std::exp(-spitzer_f_integral(beta));
    m.mean = std::sqrt(2.0) / M_PI * g_family_quadrature(b, 0);
    m.variance = std::sqrt(2.0) * beta / M_PI * g_family_quadrature(b, 3);
    if (!std::isfinite(m.p0) || !std::isfinite(m.mean) || !std::isfinite(m.variance))
        throw numerical_error("grw integral: quadrature produced non-finite value");
    return m;
}

double spitzer_f_series(double beta) {
    if (!(beta > 0.0 && beta < kTwoSqrtPi))
        throw method_inapplicable("F series: beta outside (0, 2 sqrt(pi))");
    // F(beta) = -ln beta - ln(2)/2 - (1/sqrt(2 pi)) sum zeta(1/2-r)(-1/2)^r beta^{2r+1}/(r!(2r+1))
    return -std::log(beta) - 0.5 * std::log(2.0) -
           beta / kSqrt2Pi * zeta_series(0.5, beta, [](int l) { return 2.0 * l + 1.0; });
}

double spitzer_f_integral(double beta) {
    if (!(beta > 0.0)) throw domain_error("F integral: beta must be > 0");
    const double b = beta / std::sqrt(2.0);
    if (b < 1e-3) throw domain_error("F integral: argument too close to the log singularity");
    const double tmax = std::sqrt(36.0 + b * b);
    auto f = [b](double t) {
        return b / (b * b + t * t) * std::log(-std::expm1(-b * b - t * t));
    };
    const double knee = std::min(1.0, 16.0 * b);
    const double w0 = std::min(0.25, b / 2.0);
    return -(quad::panels(f, 0.0, knee, w0) + quad::panels(f, knee, tmax, 0.25)) / M_PI;
}

} // namespace qedkit::grw
