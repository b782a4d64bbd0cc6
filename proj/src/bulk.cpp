#include "qedkit/bulk.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/specfun.hpp"

#include <cmath>
#include <string>

namespace qedkit::bulk {

using cplx = std::complex<double>;
using specfun::log_gamma;

ArrivalLaw ArrivalLaw::poisson(double lambda) {
    if (!(lambda > 0.0)) throw domain_error("ArrivalLaw: lambda must be > 0");
    ArrivalLaw a;
    a.kind_ = Kind::Poisson;
    a.p1_ = lambda;
    return a;
}

ArrivalLaw ArrivalLaw::gamma_poisson(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw domain_error("ArrivalLaw: a, b must be > 0");
    ArrivalLaw l;
    l.kind_ = Kind::GammaPoisson;
    l.p1_ = a;
    l.p2_ = b;
    return l;
}

double ArrivalLaw::mean() const { return is_poisson() ? p1_ : p1_ * p2_; }
double ArrivalLaw::variance() const { return is_poisson() ? p1_ : p1_ * p2_ * (p2_ + 1.0); }

double ArrivalLaw::factorial_moment2() const {
    return is_poisson() ? p1_ * p1_ : p1_ * (p1_ + 1.0) * p2_ * p2_;
}

double ArrivalLaw::factorial_moment3() const {
    return is_poisson() ? p1_ * p1_ * p1_
                        : p1_ * (p1_ + 1.0) * (p1_ + 2.0) * p2_ * p2_ * p2_;
}

std::complex<double> ArrivalLaw::log_pgf(cplx z) const {
    if (is_poisson()) return p1_ * (z - 1.0);
    return -p1_ * std::log(1.0 + p2_ * (1.0 - z));
}

std::complex<double> ArrivalLaw::pgf(cplx z) const { return std::exp(log_pgf(z)); }

std::complex<double> ArrivalLaw::pgf_derivative(cplx z) const {
    if (is_poisson()) return p1_ * pgf(z);
    return p1_ * p2_ * std::exp(-(p1_ + 1.0) * std::log(1.0 + p2_ * (1.0 - z)));
}

std::complex<double> ArrivalLaw::pgf_root(cplx z, int s) const {
    return std::exp(log_pgf(z) / static_cast<double>(s));
}

double ArrivalLaw::log_pmf(std::int64_t k) const {
    if (k < 0) return -std::numeric_limits<double>::infinity();
    if (is_poisson()) return k * std::log(p1_) - p1_ - log_gamma(k + 1.0);
    const double a = p1_, b = p2_;
    return log_gamma(a + k) - log_gamma(a) - log_gamma(k + 1.0) - a * std::log1p(b) +
           k * std::log(b / (1.0 + b));
}

double ArrivalLaw::radius() const {
    return is_poisson() ? std::numeric_limits<double>::infinity() : 1.0 + 1.0 / p2_;
}

void BulkSpec::validate() const {
    if (s < 1) throw domain_error("BulkSpec: s must be >= 1");
    if (!(arrivals.mean() < s))
        throw instability_error("BulkSpec: mean arrivals " + std::to_string(arrivals.mean()) +
                                " >= capacity " + std::to_string(s));
}

namespace {

double residual_at(const ArrivalLaw& law, int s, cplx z) {
    // |z| < 1, so z^s via exp(s log z) cannot overflow.
    return std::abs(std::exp(static_cast<double>(s) * std::log(z)) - law.pgf(z));
}

// One Newton step on u(z) = z A(z)^{-1/s} - w.
cplx newton_step(const ArrivalLaw& law, int s, cplx z, cplx w) {
    const cplx ainv = std::exp(-law.log_pgf(z) / static_cast<double>(s));
    const cplx u = z * ainv - w;
    // u'(z) = A^{-1/s} (1 - (z/s) A'/A)
    const cplx alog_d = law.pgf_derivative(z) / law.pgf(z);
    const cplx up = ainv * (1.0 - z / static_cast<double>(s) * alog_d);
    return z - u / up;
}

RootSet finish_roots(const ArrivalLaw& law, int s,
                     std::vector<cplx> roots) {
    RootSet out;
    out.roots = std::move(roots);
    double res = 0.0;
    for (const cplx& z : out.roots) {
        if (!(std::abs(z) < 1.0))
            throw numerical_error("roots: iterate escaped the unit disk");
        res = std::max(res, residual_at(law, s, z));
    }
    out.residual = res;
    if (res > 1e-10)
        throw convergence_error("roots: residual " + std::to_string(res) + " above 1e-10");
    return out;
}

} // namespace

RootSet find_roots_iter(const BulkSpec& spec) {
    spec.validate();
    const ArrivalLaw& law = spec.arrivals;
    const int s = spec.s;
    if (s == 1) return RootSet{};

    // Contraction check |d/dz A^{1/s}| < 1 on a 256-point circle grid.
    for (int i = 0; i < 256; ++i) {
        const cplx z = std::polar(1.0, 2.0 * M_PI * i / 256.0);
        const cplx d = law.pgf_root(z, s) * law.pgf_derivative(z) /
                       (static_cast<double>(s) * law.pgf(z));
        if (!(std::abs(d) < 1.0))
            throw method_inapplicable("find_roots_iter: contraction bound fails on |z|=1");
    }

    // Conjugate symmetry: iterate k = 1..floor(s/2), mirror the rest.
    std::vector<cplx> roots(s - 1);
    const int half = s / 2;
    int worst_k = 0;
    for (int k = 1; k <= half; ++k) {
        const cplx w = std::polar(1.0, 2.0 * M_PI * k / s);
        cplx z = 0.0;
        double step = 1.0;
        bool done = false;
        for (int it = 0; it < 100000; ++it) {
            const cplx zn = w * law.pgf_root(z, s);
            step = std::abs(zn - z);
            z = zn;
            if (step < 1e-13) { done = true; break; }
        }
        if (!done) worst_k = k;
        // Newton polish (also rescues slow fixed-point convergence near z=1).
        for (int it = 0; it < 4; ++it) z = newton_step(law, s, z, w);
        roots[k - 1] = z;
        if (k != s - k) roots[s - k - 1] = std::conj(z);
    }
    if (worst_k != 0)
        throw convergence_error("find_roots_iter: no convergence after 1e5 iterations, worst k=" +
                                std::to_string(worst_k));
    return finish_roots(law, s, std::move(roots));
}

RootSet find_roots_bl(const BulkSpec& spec) {
    spec.validate();
    const ArrivalLaw& law = spec.arrivals;
    if (law.is_poisson())
        throw method_inapplicable("find_roots_bl: defined for Gamma-Poisson arrivals");
    const int s = spec.s;
    if (s == 1) return RootSet{};
    const double a = law.gp_a(), b = law.gp_b();
    const double alpha = a / s;
    const double rho = spec.rho();

    // Radius of convergence of the series on |w| = 1: need r_BL > 1.05.
    const double inv_r_bl = std::pow((b + rho) / (b + 1.0), rho / b + 1.0) *
                            std::pow(1.0 / rho, rho / b);
    if (!(1.0 / inv_r_bl >= 1.05))
        throw method_inapplicable("find_roots_bl: series radius " +
                                  std::to_string(1.0 / inv_r_bl) + " below margin 1.05");

    // z(w) = sum_l (1/l!) Gamma(l alpha + l - 1)/Gamma(l alpha)
    //        * (b+1)/b * (b/(b+1)^{alpha+1})^l * w^l
    const double log_c = std::log(b) - (alpha + 1.0) * std::log1p(b);
    std::vector<double> coef;
    coef.push_back(std::exp(-alpha * std::log1p(b)));  // l = 1 term
    const double pref = std::log1p(b) - std::log(b);
    for (int l = 2; l <= 4000; ++l) {
        const double lc = pref + log_gamma(l * alpha + l - 1.0) - log_gamma(l * alpha) -
                          log_gamma(l + 1.0) + l * log_c;
        const double c = std::exp(lc);
        coef.push_back(c);
        if (c < 1e-16 && l > 8) break;
    }

    std::vector<cplx> roots(s - 1);
    const int half = s / 2;
    for (int k = 1; k <= half; ++k) {
        const cplx w = std::polar(1.0, 2.0 * M_PI * k / s);
        cplx z = 0.0, wp = w;
        for (double c : coef) {
            z += c * wp;
            wp *= w;
        }
        roots[k - 1] = z;
        if (k != s - k) roots[s - k - 1] = std::conj(z);
    }
    return finish_roots(law, s, std::move(roots));
}

ExactMeasures exact_measures_roots(const BulkSpec& spec, const RootSet& roots) {
    spec.validate();
    if (roots.residual > 1e-10)
        throw domain_error("exact_measures_roots: root residual above 1e-10");
    if (static_cast<int>(roots.roots.size()) != spec.s - 1)
        throw domain_error("exact_measures_roots: expected s-1 roots");
    const double mu_a = spec.arrivals.mean();
    const double var_a = spec.arrivals.variance();
    const double s = spec.s;

    cplx root_sum = 0.0, log_prod = 0.0;
    for (const cplx& z : roots.roots) {
        root_sum += 1.0 / (1.0 - z);
        log_prod += std::log(z) - std::log(z - 1.0);
    }
    if (std::abs(root_sum.imag()) > 1e-8)
        throw numerical_error("exact_measures_roots: imaginary residue in the root sum");

    ExactMeasures m{};
    m.mean_queue = var_a / (2.0 * (s - mu_a)) - (s - 1.0 + mu_a) / 2.0 + root_sum.real();
    // P(Q=0) = (s - mu_A)/A(0) * prod z_k/(z_k - 1), in log space
    const double log_a0 = spec.arrivals.log_pgf(cplx(0.0)).real();
    m.p_empty = std::exp(std::log(s - mu_a) - log_a0 + log_prod.real());
    return m;
}

PollaczekMeasures pollaczek_measures(const BulkSpec& spec) {
    spec.validate();
    const ArrivalLaw& law = spec.arrivals;
    const int s = spec.s;

    // Locate r0, the unique real zero of z^s - A(z) in (1, radius).
    auto h = [&](double x) {  // s ln x - ln A(x)
        return s * std::log(x) - law.log_pgf(cplx(x)).real();
    };
    double hi = std::isfinite(law.radius()) ? law.radius() - 1e-12 : 2.0;
    if (!std::isfinite(law.radius())) {
        while (h(hi) > 0.0) {
            hi *= 2.0;
            if (hi > 1e6) throw numerical_error("pollaczek: could not bracket r0");
        }
    } else if (h(hi) > 0.0) {
        throw numerical_error("pollaczek: no super-unit zero before the pgf radius");
    }
    double lo = 1.0 + 1e-12;
    // h(1)=0, h'(1) = s - mu_A > 0, so h > 0 just right of 1; find the sign change.
    double probe = lo;
    while (h(probe) <= 0.0) {
        probe = 1.0 + 2.0 * (probe - 1.0) + 1e-9;
        if (probe >= hi) throw numerical_error("pollaczek: r0 bracket collapsed");
    }
    lo = probe;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) > 0.0 ? lo : hi) = mid;
    }
    const double r0 = 0.5 * (lo + hi);
    const double radius = 1.0 + (r0 - 1.0) / 2.0;

    // ratio(z) = (z^s - A)'/(z^s - A) = s/z - s g'(z) w/(1-w), w = exp(s g(z))
    auto eval = [&](cplx z, cplx& ratio, cplx& log1mw) {
        const double sd = static_cast<double>(s);
        const cplx g = -std::log(z) + law.log_pgf(z) / sd;
        const cplx w = std::exp(sd * g);
        const cplx gprime = -1.0 / z + law.pgf_derivative(z) / (sd * law.pgf(z));
        ratio = sd / z - sd * gprime * w / (1.0 - w);
        log1mw = std::log(1.0 - w);
    };

    double mean_prev = 0.0, var_prev = 0.0, lnp0_prev = 0.0;
    bool have_prev = false;
    for (int N = 256; N <= (1 << 21); N *= 2) {
        double mean = 0.0, var = 0.0, lnp0 = 0.0;
        // midpoint rule; integrand conjugate-symmetric, sum the upper half
        const int half = N / 2;
        for (int j = 0; j < half; ++j) {
            const double th = 2.0 * M_PI * (j + 0.5) / N;
            const cplx z = std::polar(radius, th);
            cplx ratio, log1mw;
            eval(z, ratio, log1mw);
            // (1/2pi i) \oint f dz = (1/N) sum f(z_j) z_j over the full circle
            mean += 2.0 * (1.0 / (1.0 - z) * ratio * z).real();
            var += 2.0 * (-z / ((1.0 - z) * (1.0 - z)) * ratio * z).real();
            lnp0 += 2.0 * (log1mw / (z * (z - 1.0)) * z).real();
        }
        mean /= N;
        var /= N;
        lnp0 /= N;
        if (have_prev && std::fabs(mean - mean_prev) < 1e-10 &&
            std::fabs(var - var_prev) < 1e-10 * std::max(1.0, std::fabs(var)) &&
            std::fabs(lnp0 - lnp0_prev) < 1e-10) {
            PollaczekMeasures out{};
            out.mean_queue = mean;
            out.variance_queue = var;
            out.p_empty = std::exp(lnp0);
            return out;
        }
        mean_prev = mean;
        var_prev = var;
        lnp0_prev = lnp0;
        have_prev = true;
    }
    throw convergence_error("pollaczek: contour quadrature did not settle at 1e-10");
}

SpitzerBounds spitzer_truncated(const BulkSpec& spec, int terms) {
    spec.validate();
    if (terms < 1) throw domain_error("spitzer_truncated: need K >= 1");
    const ArrivalLaw& law = spec.arrivals;
    const int s = spec.s;

    double mean_lower = 0.0, tail_prob_sum = 0.0;
    for (int k = 1; k <= terms; ++k) {
        // S_k = sum of k iid arrivals - k s; the k-fold law stays in family.
        const ArrivalLaw law_k = law.is_poisson()
                                     ? ArrivalLaw::poisson(k * law.poisson_lambda())
                                     : ArrivalLaw::gamma_poisson(k * law.gp_a(), law.gp_b());
        const std::int64_t ks = static_cast<std::int64_t>(k) * s;
        const double sd = std::sqrt(law_k.variance());
        double e_plus = 0.0, p_plus = 0.0;
        // terms decay geometrically past mean + ~12 sd
        const std::int64_t hi =
            ks + static_cast<std::int64_t>(std::max(50.0, 12.0 * sd + (law_k.mean() - ks)));
        for (std::int64_t m = ks + 1; m <= hi + 1; ++m) {
            const double lp = law_k.log_pmf(m);
            if (lp < -745.0) {
                if (m > law_k.mean()) break;
                continue;
            }
            const double p = std::exp(lp);
            e_plus += (m - ks) * p;
            p_plus += p;
        }
        mean_lower += e_plus / k;
        tail_prob_sum += p_plus / k;
    }
    SpitzerBounds b{};
    b.mean_queue_lower = mean_lower;
    b.p_empty_upper = std::exp(-tail_prob_sum);
    return b;
}

} // namespace qedkit::bulk
