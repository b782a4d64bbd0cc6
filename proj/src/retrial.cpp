#include "qedkit/retrial.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/quadrature.hpp"
#include "qedkit/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qedkit::retrial {

using specfun::exp_half_sq_cdf;
using specfun::mills_ratio;
using specfun::normal_hazard;
using specfun::std_normal_cdf;
using specfun::std_normal_pdf;

namespace {

// (1 - e^{-beta gamma})/beta, continuous through beta = 0.
double w_term(double beta, double gamma) {
    if (std::fabs(beta) < 1e-8) return gamma * (1.0 - 0.5 * beta * gamma);
    return -std::expm1(-beta * gamma) / beta;
}

} // namespace

LimitPair finite_queue_limits(const QedHedge& h) {
    if (!(h.gamma > 0.0)) throw domain_error("finite_queue_limits: gamma must be > 0");
    const double w = w_term(h.beta, h.gamma);
    const double den = w + mills_ratio(h.beta);
    LimitPair out{};
    out.g = w / den;
    out.f = std::exp(-h.beta * h.gamma) / den;
    return out;
}

LimitPair erlang_a_limits(double beta, double theta) {
    if (!(theta > 0.0)) throw domain_error("erlang_a_limits: theta must be > 0");
    const double sq = std::sqrt(theta);
    const double hz = sq * normal_hazard(beta / sq);
    const double den = 1.0 + hz / normal_hazard(-beta);
    LimitPair out{};
    out.g = 1.0 / den;
    out.f = (hz - beta) / den;
    return out;
}

CloudLimits cloud_limits(const CloudHedge& h) {
    if (!(h.kappa > 0.0)) throw domain_error("cloud_limits: kappa must be > 0");
    const double beta = h.beta, gamma = h.gamma, kappa = h.kappa;
    const double sqk = std::sqrt(kappa);

    CloudLimits out{};
    // For large kappa the integrand's Phi factor switches on a 1/sqrt(kappa)
    // scale just below t = beta; resolve that layer separately.
    const double layer = std::min(2.0, 8.0 / sqk);
    auto eta_f = [&](double t) {
        return std_normal_cdf(gamma + (beta - t) * sqk) * std_normal_pdf(t);
    };
    out.eta = quad::panels(eta_f, beta - 10.0, beta - layer, 0.25) +
              quad::panels(eta_f, beta - layer, beta, std::min(0.25, layer / 8.0));

    // T = phi(sqrt(beta^2+gamma^2)) e^{omega^2/2} Phi(omega), omega = gamma - beta/sqrt(kappa),
    // computed through the overflow-free rearrangement
    // T = phi(0) exp(beta^2 (1/kappa - 1)/2 - beta gamma/sqrt(kappa)) Phi(omega) ... for omega>0
    // and via erfcx for omega <= 0.
    const double omega = gamma - beta / sqk;
    double T;
    if (omega <= 0.0) {
        T = std_normal_pdf(std::sqrt(beta * beta + gamma * gamma)) * exp_half_sq_cdf(omega);
    } else {
        const double expo = 0.5 * beta * beta * (1.0 / kappa - 1.0) - beta * gamma / sqk;
        if (expo > 600.0) {
            // Deep understaffing (beta very negative): T dominates everything,
            // so g -> 1 and f -> -beta. Only reachable from bracket probes.
            out.xi1 = 0.0;
            out.xi2 = -std::numeric_limits<double>::infinity();
            out.nu = std::numeric_limits<double>::infinity();
            out.g = 1.0;
            out.f = -beta;
            return out;
        }
        T = 0.39894228040143267794 * std::exp(expo) * std_normal_cdf(omega);
    }

    // xi1 - xi2 = (phi(beta) Phi(gamma) - T)/beta has a removable singularity
    // at beta = 0; switch to the derivative there.
    double D;
    if (std::fabs(beta) < 1e-5) {
        D = (gamma * std_normal_cdf(gamma) + std_normal_pdf(gamma)) /
            std::sqrt(2.0 * M_PI * kappa);
        out.xi1 = out.xi2 = 0.5 * D;  // only the difference is meaningful here
    } else {
        out.xi1 = std_normal_pdf(beta) * std_normal_cdf(gamma) / beta;
        out.xi2 = T / beta;
        D = out.xi1 - out.xi2;
    }

    // beta * xi2 = T, so nu stays finite through beta = 0.
    out.nu = std::sqrt(kappa / (1.0 + kappa)) *
                 std_normal_pdf((gamma + beta * sqk) / std::sqrt(1.0 + kappa)) *
                 std_normal_cdf((beta - gamma * sqk) / std::sqrt(1.0 + kappa)) +
             T;

    out.g = D / (out.eta + D);
    out.f = out.nu / (out.eta + D);
    if (!std::isfinite(out.g) || !std::isfinite(out.f)) {
        if (beta < -1.0) {
            // every term underflowed: deep overload, same asymptote as above
            out.g = 1.0;
            out.f = -beta;
        } else {
            throw numerical_error("cloud_limits: degenerate denominator");
        }
    }
    return out;
}

double ShiftRule::shifted_gamma(double gamma, double alpha) const {
    switch (gamma_shift) {
        case GammaShift::None: return gamma;
        case GammaShift::InvSqrtKappa:
        case GammaShift::InvSqrtR: return gamma - alpha / std::sqrt(kappa_or_r);
    }
    return gamma;
}

FixedPointSolution solve_retrial_fixed_point(
    const std::function<double(double, double)>& scaled_block, const ShiftRule& rule,
    const QedHedge& h) {
    if (!(h.beta > 0.0)) throw domain_error("fixed point: beta must be > 0");
    // Delta = beta - alpha; solve Delta + f(Delta, gamma(Delta)) = beta.
    auto excess = [&](double delta) {
        const double alpha = h.beta - delta;
        const double g2 = rule.shifted_gamma(h.gamma, alpha);
        return delta + scaled_block(delta, g2) - h.beta;
    };
    double hi = h.beta;
    const double at_hi = excess(hi);
    if (at_hi < 0.0)
        throw convergence_error("fixed point: f(beta, gamma) < 0 at the upper bracket");
    double lo = hi;
    double step = std::max(0.5, at_hi);
    bool bracketed = false;
    for (int i = 0; i < 80; ++i) {
        lo -= step;
        if (excess(lo) < 0.0) {
            bracketed = true;
            break;
        }
        step *= 1.6;
        if (lo < -40.0) break;
    }
    if (!bracketed) {
        std::ostringstream os;
        os << "fixed point: no bracket; samples excess(" << hi << ")=" << at_hi << ", excess("
           << lo << ")=" << excess(lo);
        throw convergence_error(os.str());
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
        if (hi - lo < 1e-14) break;
    }
    const double delta = 0.5 * (lo + hi);
    FixedPointSolution sol{};
    sol.alpha = h.beta - delta;
    sol.beta_shifted = delta;
    sol.gamma_shifted = rule.shifted_gamma(h.gamma, sol.alpha);
    sol.residual = std::fabs(sol.alpha - scaled_block(delta, sol.gamma_shifted));
    if (sol.residual > 1e-10)
        throw convergence_error("fixed point: residual above 1e-10");
    return sol;
}

RetrialApprox approx_with_retrials(RetrialModel model, const RetrialParams& params, double R) {
    if (!(R > 0.0)) throw domain_error("approx_with_retrials: R must be > 0");
    ShiftRule rule;
    std::function<double(double, double)> f;
    std::function<double(double, double)> g;
    switch (model) {
        case RetrialModel::Basic:
            rule.gamma_shift = ShiftRule::GammaShift::None;
            f = [&](double b, double gm) { return finite_queue_limits({b, gm}).f; };
            g = [&](double b, double gm) { return finite_queue_limits({b, gm}).g; };
            break;
        case RetrialModel::Cloud:
            rule.gamma_shift = ShiftRule::GammaShift::InvSqrtKappa;
            rule.kappa_or_r = params.kappa;
            f = [&](double b, double gm) { return cloud_limits({b, gm, params.kappa}).f; };
            g = [&](double b, double gm) { return cloud_limits({b, gm, params.kappa}).g; };
            break;
        case RetrialModel::Abandon:
            rule.gamma_shift = ShiftRule::GammaShift::None;
            f = [&](double b, double) { return erlang_a_limits(b, params.theta).f; };
            g = [&](double b, double) { return erlang_a_limits(b, params.theta).g; };
            break;
    }
    const FixedPointSolution sol =
        solve_retrial_fixed_point(f, rule, {params.beta, params.gamma});
    RetrialApprox out{};
    out.fixed_point = sol;
    out.delay_prob = g(sol.beta_shifted, sol.gamma_shifted);
    out.loss_prob = sol.alpha / std::sqrt(R);
    return out;
}

} // namespace qedkit::retrial
