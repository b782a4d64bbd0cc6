#include "qedkit/ht_regimes.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/grw.hpp"

#include <cmath>

namespace qedkit::ht {

double RegimeSpec::rho() const { return 1.0 - gamma / std::pow(static_cast<double>(s), eta); }
double RegimeSpec::b0_sq() const { return gamma * gamma * mu / (2.0 * sigma2); }
double RegimeSpec::d_sq() const {
    return b0_sq() / std::pow(static_cast<double>(s), 2.0 * eta - 1.0);
}

void RegimeSpec::validate() const {
    if (!(eta >= 0.0)) throw domain_error("RegimeSpec: eta must be >= 0");
    if (!(gamma > 0.0)) throw domain_error("RegimeSpec: gamma must be > 0");
    if (!(mu > 0.0) || !(sigma2 > 0.0)) throw domain_error("RegimeSpec: mu, sigma2 must be > 0");
    if (s < 1) throw domain_error("RegimeSpec: s must be >= 1");
    const double r = rho();
    if (!(r > 0.0 && r < 1.0)) throw domain_error("RegimeSpec: rho outside (0,1)");
}

RegimeClass classify_regime(const RegimeSpec& spec) {
    spec.validate();
    if (spec.eta < 0.5)
        return {Regime::Moderate,
                "mean congestion exponentially small, O(exp(-b^2 s^{1-2 eta})) for b < b0"};
    if (spec.eta == 0.5) return {Regime::Classical, "mean congestion O(sqrt(s))"};
    return {Regime::Extreme, "mean congestion O(s^eta)"};
}

namespace {
const char* kModerateWarning =
    "eta < 1/2: only the exponential bound O(exp(-b^2 s^{1-2 eta})) is available; returning 0";
}

HtValue mean_leading(const RegimeSpec& spec) {
    spec.validate();
    if (spec.eta < 0.5) return {0.0, kModerateWarning};
    const double d = std::sqrt(spec.d_sq());
    const double v = 2.0 / M_PI * std::sqrt(spec.sigma2) *
                     std::sqrt(spec.s / (2.0 * spec.mu)) * grw::g_family_quadrature(d, 0);
    return {v, std::nullopt};
}

double mean_corrected_half(const RegimeSpec& spec) {
    spec.validate();
    if (spec.eta != 0.5)
        throw method_inapplicable("mean_corrected_half: requires eta = 1/2 exactly");
    if (std::fabs(spec.mu - 1.0) > 1e-12 || std::fabs(spec.sigma2 - 1.0) > 1e-12)
        throw method_inapplicable("mean_corrected_half: requires Poisson input (mu = sigma2 = 1)");
    const double b0 = std::sqrt(spec.b0_sq());
    return std::sqrt(2.0 * spec.s) / M_PI * grw::g_family_quadrature(b0, 0) -
           std::sqrt(2.0) * spec.gamma / (3.0 * M_PI) * grw::g_family_quadrature(b0, 1);
}

HtValue variance_leading(const RegimeSpec& spec) {
    spec.validate();
    if (spec.eta < 0.5) return {0.0, kModerateWarning};
    if (!(spec.eta < 1.0))
        throw method_inapplicable("variance_leading: requires eta in [1/2, 1)");
    const double d = std::sqrt(spec.d_sq());
    const double v = spec.gamma * std::sqrt(spec.sigma2) / M_PI * std::sqrt(2.0 / spec.mu) *
                     std::pow(static_cast<double>(spec.s), 1.5 - spec.eta) *
                     grw::g_family_quadrature(d, 3);
    return {v, std::nullopt};
}

HtValue empty_prob_leading(const RegimeSpec& spec) {
    spec.validate();
    if (spec.eta < 0.5) return {1.0, kModerateWarning};
    if (!(spec.eta < 1.0))
        throw method_inapplicable("empty_prob_leading: requires eta in [1/2, 1)");
    const double beta = std::sqrt(spec.d_sq()) * std::sqrt(2.0);
    const double F = (beta < 2.0 * std::sqrt(M_PI)) ? grw::spitzer_f_series(beta)
                                                    : grw::spitzer_f_integral(beta);
    return {std::exp(-F), std::nullopt};
}

} // namespace qedkit::ht
