#ifndef QEDKIT_ERLANG_R_HPP
#define QEDKIT_ERLANG_R_HPP

// The restricted Erlang-R network (needy/content stations behind a cap of n
// concurrent patients): exact product-form solution for the blocking variant,
// exact QBD matrix-geometric solution for the holding variant, the stability
// region, the QED limit formulas, and the holding fixed-point heuristic.

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace qedkit::erlang_r {

struct ErlangRSpec {
    double lambda;  // external arrival rate
    double mu;      // needy service rate
    double delta;   // content completion rate
    double p;       // return probability in (0,1)
    int s;          // servers (nurses)
    int n;          // beds, n >= s

    double r1() const { return lambda / ((1.0 - p) * mu); }
    double r2() const { return p * lambda / ((1.0 - p) * delta); }
    double needy_fraction() const { return delta / (delta + p * mu); }  // r
    void validate() const;
};

// Product-form stationary law of the blocking model, log-space evaluator.
class BlockingDistribution {
  public:
    explicit BlockingDistribution(const ErlangRSpec& spec);
    // pi_b(j needy, k content), j + k <= n.
    double prob(int j, int k) const;
    double log_norm() const { return log_norm_; }
    const ErlangRSpec& spec() const { return spec_; }

  private:
    ErlangRSpec spec_;
    double log_norm_;
    std::vector<double> log_row_;  // per-j constant: j ln R1 - ln kappa(j)
    friend struct BlockingMeasuresAccess;
};

BlockingDistribution blocking_stationary(const ErlangRSpec& spec);

struct BlockingMeasures {
    double p_delay;        // P(Q1 >= s) seen by a moving patient (population n-1)
    double p_block;        // P(Q1 + Q2 = n)
    double expected_wait;  // E[(Q1-s+1)^+]/(s mu) under the arrival distribution
    double rho_s;
    double rho_n;
};

BlockingMeasures blocking_measures(const ErlangRSpec& spec);

// Maximum utilization rho_max(s, n) for the holding model to be stable.
double stability_rho_max(const ErlangRSpec& spec);

// Block-tridiagonal generator of the holding model: boundary levels 0..n and
// the repeating blocks A0, A1, A2 (level = total patients in the system,
// phase = number of needy patients).
struct QbdModel {
    ErlangRSpec spec;
    Eigen::MatrixXd A0, A1, A2;  // (n+1) x (n+1)
    // boundary blocks are assembled on demand from the spec (they are sparse
    // tridiagonal per level); this keeps the model cheap to build.
    double boundary_diag(int level, int j) const;
    double boundary_up(int level, int j) const;    // (level, j) -> (level, j+1)
    double boundary_down(int level, int j) const;  // (level, j) -> (level, j-1)
    // row-sum zero check over levels 0..n+3; throws on violation
    void check_generator() const;
};

QbdModel qbd_build(const ErlangRSpec& spec);

struct MatrixGeomSolution {
    Eigen::MatrixXd G;                          // minimal nonnegative solution
    std::vector<Eigen::VectorXd> pi_boundary;   // levels 0..n (level i has i+1 entries, capped at n+1)
    double spectral_radius_g;
    double residual;  // max-abs of A0 + G A1 + G^2 A2
    int iterations;
};

MatrixGeomSolution qbd_solve(const QbdModel& model);

struct HoldingMeasures {
    double p_delay;        // P(Q1 >= s)
    double p_hold;         // P(N >= n)
    double expected_wait;  // E[(Q1-s+1)^+]/(s mu)
    double rho_s;          // equals R1/s by work conservation
    double rho_n;
};

HoldingMeasures holding_measures(const MatrixGeomSolution& sol, const ErlangRSpec& spec);

struct ErlangRAsymptotics {
    double beta;
    double gamma;
    // eta_hat = (gamma - beta sqrt(r))/sqrt(1-r); omega = (gamma - beta/sqrt(r))/sqrt(1-r)
    double eta_hat(double r) const;
    double omega(double r) const;
};

struct QedBlockingLimits {
    double g;  // delay probability limit
    double f;  // sqrt(R1) * blocking probability limit
    double h;  // sqrt(R1) * E[W] limit (unit service rate)
};

// Two-fold QED limits of the blocking model; beta = 0 dispatches to the
// dedicated formulas.
QedBlockingLimits qed_limits_blocking(double r, const ErlangRAsymptotics& h);

struct HoldingHeuristic {
    double alpha;  // fixed point of alpha = f_b(beta - alpha, gamma - alpha/sqrt(r))
    double g;      // corrected delay probability
    double h;      // corrected sqrt(R1) E[W]
};

HoldingHeuristic holding_heuristic(double r, const ErlangRAsymptotics& hedges);

} // namespace qedkit::erlang_r

#endif
