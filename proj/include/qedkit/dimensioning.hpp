#ifndef QEDKIT_DIMENSIONING_HPP
#define QEDKIT_DIMENSIONING_HPP

// Staffing algorithms: square-root constraint satisfaction and cost
// optimization for M/M/s, modified-offered-load (MOL) and pointwise
// stationary (PSA) time-varying staffing, and the fixed-point-corrected
// dimensioning rules for the cloud and Erlang-R models.

#include "qedkit/erlang_r.hpp"

#include <string>
#include <vector>

namespace qedkit::dim {

// Piecewise-linear nonnegative load/rate curve on a strictly increasing time
// grid (hours); extended cyclically beyond the grid.
struct OfferedLoadCurve {
    std::vector<double> time_grid;
    std::vector<double> values;

    double cycle_length() const { return time_grid.back() - time_grid.front(); }
    double at(double t) const;  // cyclic piecewise-linear interpolation
    double max_value() const;
    void validate() const;

    static OfferedLoadCurve from_csv(const std::string& path, bool header);
};

struct StaffingCurve {
    std::vector<double> time_grid;  // slice starts, one review period apart
    std::vector<int> s_levels;
    std::vector<int> n_levels;  // empty when the method does not set n
    double review_period = 0.5;

    int s_at(double t) const;
    int n_at(double t) const;
};

// beta* solving g(beta*) = epsilon for the Halfin-Whitt delay function.
double solve_beta_for_delay(double epsilon);

// Square-root staffing s = ceil(lambda + beta* sqrt(lambda)).
int staff_constraint(double lambda, double epsilon);

// Exact constraint staffing: smallest s with Erlang-C delay <= epsilon.
int staff_exact(double lambda, double epsilon);

// beta* minimizing C(beta) = r beta + g(beta)/beta (strictly convex).
double optimize_cost_beta(double cost_ratio);

// Exact cost-optimal staffing: argmin over s of r (s-lambda) + lambda E[W^(s)].
int optimize_cost_exact(double lambda, double cost_ratio);

// Infinite-server offered load R(t): dR/dt = lambda(t) - mu R, integrated by
// RK4 over two warm-up cycles; sampled on the input grid.
OfferedLoadCurve mol_offered_load(const OfferedLoadCurve& lambda_curve, double mu,
                                  int samples_per_hour = 16);

struct ErlangROfferedLoad {
    OfferedLoadCurve r1;  // needy load
    OfferedLoadCurve r2;  // content load
};

// Solution of dR1/dt = lambda(t) + delta R2 - mu R1, dR2/dt = p mu R1 - delta R2.
ErlangROfferedLoad erlang_r_offered_load(const OfferedLoadCurve& lambda_curve,
                                         const erlang_r::ErlangRSpec& spec,
                                         int samples_per_hour = 16);

struct CloudOfferedLoad {
    OfferedLoadCurve r1;  // first-stage load, dR1/dt = lambda - R1 (mu = 1)
    OfferedLoadCurve r2;  // second-stage load, dR2/dt = R1 - kappa R2
};

CloudOfferedLoad cloud_offered_load(const OfferedLoadCurve& lambda_curve, double kappa,
                                    int samples_per_hour = 16);

enum class StaffingMethod { Psa, Mol, CloudMol, ErlangRMol };

struct StaffingTargets {
    double epsilon;     // target delay probability
    double mu = 1.0;    // service rate (PSA/MOL)
    double kappa = 1.0; // cloud second-stage rate
    double r = 0.5;     // Erlang-R needy fraction
    double gamma_star = 1.0;  // preset space hedge fed to the fixed-point step
};

// Integer staffing per review period. Rounding follows each source
// algorithm: ceil for s everywhere; nearest for the cloud n; floor for the
// Erlang-R n.
StaffingCurve staffing_curve(const OfferedLoadCurve& lambda_curve, StaffingMethod method,
                             const StaffingTargets& targets, double review_period = 0.5);

// The corrected pair (beta*, gamma*) of the stationary cloud rule: beta, gamma
// solve g_c = epsilon at preset gamma, then both are enlarged by the
// fixed-point volume f_c(beta, gamma).
struct CloudDimensioning {
    double beta_star;
    double gamma_star;
    int s;
    int n;
};

CloudDimensioning dimension_cloud(double R, double kappa, double epsilon, double gamma_preset);

// Erlang-R holding dimensioning (stationary): beta*, gamma* solving
// g_b = epsilon at preset gamma, corrected by f_b, rounded ceil/floor.
struct ErlangRDimensioning {
    double beta;
    double gamma;
    int s;
    int n;
};

ErlangRDimensioning dimension_erlang_r(double lambda, double mu, double delta, double p,
                                       double epsilon, double gamma_preset);

} // namespace qedkit::dim

#endif
