#include "qedkit/specfun.hpp"
#include "qedkit/errors.hpp"

#include <cmath>
#include <limits>

namespace qedkit::specfun {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrtPiOver2 = 1.2533141373155002512;

void require_finite(double x, const char* who) {
    if (!std::isfinite(x)) throw domain_error(std::string(who) + ": non-finite argument");
}

// B_2, B_4, ..., B_32
constexpr double kBernoulli[] = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
};

// Euler-Maclaurin for zeta(s), usable for any real s != 1 as long as enough
// correction terms are taken. We only call it with s in (0,1) or s > 1.
double zeta_euler_maclaurin(double s) {
    const int N = 24;
    const int J = 14;
    double sum = 0.0;
    for (int k = 1; k < N; ++k) sum += std::pow(static_cast<double>(k), -s);
    const double Ns = std::pow(static_cast<double>(N), -s);
    sum += Ns * N / (s - 1.0);  // N^{1-s}/(s-1)
    sum += 0.5 * Ns;
    // Sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    double fact = 1.0;           // (2j)!
    double poch = 1.0;           // s(s+1)...(s+2j-2), starts empty
    double npow = Ns * N;        // N^{1-s-2j}, starts at N^{1-s}
    for (int j = 1; j <= J; ++j) {
        fact *= (2.0 * j - 1.0) * (2.0 * j);
        poch *= (j == 1) ? s : (s + 2.0 * j - 3.0) * (s + 2.0 * j - 2.0);
        npow /= static_cast<double>(N) * static_cast<double>(N);
        sum += kBernoulli[j - 1] / fact * poch * npow;
    }
    return sum;
}

} // namespace

double std_normal_pdf(double x) {
    require_finite(x, "std_normal_pdf");
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    require_finite(x, "std_normal_cdf");
    return 0.5 * std::erfc(-x / kSqrt2);
}

double erfc(double x) {
    require_finite(x, "erfc");
    return std::erfc(x);
}

double erfcx(double x) {
    require_finite(x, "erfcx");
    if (x < 0.0) {
        // erfcx(x) = 2 exp(x^2) - erfcx(-x); grows like 2 exp(x^2)
        if (x < -26.0) return std::numeric_limits<double>::infinity();
        return 2.0 * std::exp(x * x) - erfcx(-x);
    }
    if (x < 4.0) return std::exp(x * x) * std::erfc(x);
    // Laplace continued fraction, good to ~1e-16 for x >= 4
    double cf = 0.0;
    for (int n = 60; n >= 1; --n) cf = 0.5 * n / (x + cf);
    return 1.0 / ((x + cf) * std::sqrt(M_PI));
}

double mills_ratio(double x) {
    return kSqrtPiOver2 * erfcx(-x / kSqrt2);
}

double normal_hazard(double x) {
    return 1.0 / mills_ratio(-x);
}

double exp_half_sq_cdf(double x) {
    require_finite(x, "exp_half_sq_cdf");
    if (x <= 0.0) return 0.5 * erfcx(-x / kSqrt2);
    const double e = 0.5 * x * x;
    if (e > 700.0) throw numerical_error("exp_half_sq_cdf: overflow");
    return std::exp(e) * std_normal_cdf(x);
}

double zeta(double s) {
    require_finite(s, "zeta");
    if (s >= 1.0) throw domain_error("zeta: argument must be < 1 (pole at 1, right half handled elsewhere)");
    if (s == 0.0) return -0.5;
    if (s > 0.0) return zeta_euler_maclaurin(s);
    // Functional equation: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    const double t = 1.0 - s;  // > 1
    const double zt = (t > 20.0) ? zeta_euler_maclaurin(t) : zeta_euler_maclaurin(t);
    return std::pow(2.0, s) * std::pow(M_PI, s - 1.0) * std::sin(M_PI * s / 2.0) *
           std::tgamma(t) * zt;
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw domain_error("log_gamma: argument must be > 0");
    return std::lgamma(x);
}

namespace {

// Lower regularized incomplete gamma by series, for x < a + 1.
double gamma_p_series(double a, double x) {
    if (x <= 0.0) return 0.0;
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw convergence_error("gamma_p: series did not converge");
}

// Upper regularized incomplete gamma by Lentz continued fraction, x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw convergence_error("gamma_q: continued fraction did not converge");
}

} // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw domain_error("gamma_q: need a > 0, x >= 0");
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw domain_error("gamma_p: need a > 0, x >= 0");
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

} // namespace qedkit::specfun
