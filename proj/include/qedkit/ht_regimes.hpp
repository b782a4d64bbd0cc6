#ifndef QEDKIT_HT_REGIMES_HPP
#define QEDKIT_HT_REGIMES_HPP

// Heavy-traffic approximations for the bulk queue under the scaling family
// rho_s = 1 - gamma/s^eta: regime classification, leading-order mean,
// variance and empty-probability, and the corrected mean for eta = 1/2 with
// Poisson input.

#include <optional>
#include <string>

namespace qedkit::ht {

struct RegimeSpec {
    double eta;     // regime exponent >= 0
    double gamma;   // hedge coefficient > 0
    double mu;      // per-source mean
    double sigma2;  // per-source variance
    int s;          // capacity

    double rho() const;    // 1 - gamma/s^eta
    double b0_sq() const;  // gamma^2 mu / (2 sigma^2)
    double d_sq() const;   // b0_sq / s^{2 eta - 1}
    void validate() const;
};

enum class Regime { Moderate, Classical, Extreme };

struct RegimeClass {
    Regime tag;
    std::string prediction;  // qualitative behavior of the mean
};

RegimeClass classify_regime(const RegimeSpec& spec);

// A value plus an optional structured regime warning (set when the theory
// only provides an exponential-smallness bound, i.e. eta < 1/2).
struct HtValue {
    double value;
    std::optional<std::string> warning;
};

// Leading-order mean (2/pi) sigma sqrt(s/(2 mu)) G0(d(s)), valid eta >= 1/2.
HtValue mean_leading(const RegimeSpec& spec);

// Corrected mean for eta = 1/2 and Poisson input (mu = sigma^2 = 1):
// sqrt(2 s)/pi G0(b0) - sqrt(2) gamma/(3 pi) G1(b0).
double mean_corrected_half(const RegimeSpec& spec);

// Leading-order variance (gamma sigma/pi) sqrt(2/mu) s^{3/2-eta} G3(d(s)),
// valid for eta in [1/2, 1).
HtValue variance_leading(const RegimeSpec& spec);

// Leading-order empty probability exp(-F(d(s) sqrt(2))), eta in [1/2, 1).
HtValue empty_prob_leading(const RegimeSpec& spec);

} // namespace qedkit::ht

#endif
