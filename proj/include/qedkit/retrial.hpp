#ifndef QEDKIT_RETRIAL_HPP
#define QEDKIT_RETRIAL_HPP

// QED limit functions for the finite-capacity, abandonment and cloud-tandem
// systems, and the fixed-point machinery that corrects them for slow
// retrials: alpha = f(shifted hedges), block ~ alpha/sqrt(R).

#include <functional>

namespace qedkit::retrial {

struct QedHedge {
    double beta;
    double gamma;
};

struct CloudHedge {
    double beta;
    double gamma;
    double kappa;  // second-stage rate
};

struct LimitPair {
    double g;  // delay-probability limit
    double f;  // scaled blocking/abandonment limit
};

// M/M/s/n two-fold scaling limits (delay g(beta,gamma), scaled blocking
// f(beta,gamma)); valid for all real beta, gamma > 0.
LimitPair finite_queue_limits(const QedHedge& h);

// Erlang-A limits g_a(beta), f_a(beta) for patience rate theta > 0.
LimitPair erlang_a_limits(double beta, double theta);

struct CloudLimits {
    double g;  // delay limit
    double f;  // scaled blocking limit
    // named intermediates of the closed form
    double eta;
    double xi1;
    double xi2;
    double nu;
};

CloudLimits cloud_limits(const CloudHedge& h);

// How the retrial volume alpha shifts the hedges fed back into f.
struct ShiftRule {
    bool shift_beta = true;
    enum class GammaShift { None, InvSqrtKappa, InvSqrtR } gamma_shift = GammaShift::None;
    double kappa_or_r = 1.0;  // kappa (cloud) or r (Erlang-R)

    double shifted_gamma(double gamma, double alpha) const;
};

struct FixedPointSolution {
    double alpha;           // retrial volume coefficient
    double beta_shifted;    // beta - alpha
    double gamma_shifted;   // gamma - alpha/sqrt(kappa or r), if shifted
    double residual;        // |alpha - f(shifted)|
};

// Solve alpha = f(beta - alpha, gamma - alpha * shift) by bisection on
// Delta = beta - alpha, using the monotonicity of Delta + f(Delta, .).
FixedPointSolution solve_retrial_fixed_point(
    const std::function<double(double, double)>& scaled_block, const ShiftRule& rule,
    const QedHedge& h);

enum class RetrialModel { Basic, Cloud, Abandon };

struct RetrialApprox {
    double delay_prob;
    double loss_prob;  // blocking (Basic/Cloud) or abandonment (Abandon) probability
    FixedPointSolution fixed_point;
};

struct RetrialParams {
    double beta = 0.0;
    double gamma = 0.0;   // unused for Abandon
    double kappa = 1.0;   // Cloud only
    double theta = 1.0;   // Abandon only
};

// Descaled approximations for offered load R: delay ~ g(shifted),
// block ~ alpha/sqrt(R).
RetrialApprox approx_with_retrials(RetrialModel model, const RetrialParams& params, double R);

} // namespace qedkit::retrial

#endif
