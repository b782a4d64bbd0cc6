#include "qedkit/erlang_r.hpp"
#include "qedkit/errors.hpp"
#include "qedkit/quadrature.hpp"
#include "qedkit/retrial.hpp"
#include "qedkit/specfun.hpp"

#include <cmath>
#include <string>

namespace qedkit::erlang_r {

using specfun::exp_half_sq_cdf;
using specfun::gamma_q;
using specfun::log_gamma;
using specfun::std_normal_cdf;
using specfun::std_normal_pdf;

void ErlangRSpec::validate() const {
    if (!(lambda > 0.0) || !(mu > 0.0) || !(delta > 0.0))
        throw domain_error("ErlangRSpec: rates must be > 0");
    if (!(p > 0.0 && p < 1.0)) throw domain_error("ErlangRSpec: p must lie in (0,1)");
    if (s < 1 || n < s) throw domain_error("ErlangRSpec: need 1 <= s <= n");
}

namespace {

double log_kappa(int j, int s) {
    if (j <= s) return log_gamma(j + 1.0);
    return log_gamma(s + 1.0) + (j - s) * std::log(static_cast<double>(s));
}

// Internals of the product form, shared by the n and n-1 population sums.
// Row j contributes exp(c_j) * Sum_{k=0}^{cap-j} R2^k/k!; the inner sum is
// e^{R2} P(Pois(R2) <= cap-j) = e^{R2} Q(cap-j+1, R2).
struct ProductForm {
    double R1, R2;
    int s, cap;
    std::vector<double> log_rowsum;  // ln of unnormalized row mass
    double log_norm;

    ProductForm(double R1_, double R2_, int s_, int cap_) : R1(R1_), R2(R2_), s(s_), cap(cap_) {
        log_rowsum.resize(cap + 1);
        double m = -std::numeric_limits<double>::infinity();
        for (int j = 0; j <= cap; ++j) {
            const double cj = j * std::log(R1) - log_kappa(j, s);
            log_rowsum[j] = cj + R2 + std::log(gamma_q(cap - j + 1.0, R2));
            m = std::max(m, log_rowsum[j]);
        }
        double z = 0.0;
        for (double v : log_rowsum) z += std::exp(v - m);
        log_norm = m + std::log(z);
    }

    double row_prob(int j) const { return std::exp(log_rowsum[j] - log_norm); }

    double tail_prob_from(int j0) const {
        double t = 0.0;
        for (int j = j0; j <= cap; ++j) t += row_prob(j);
        return t;
    }

    // P(Q1 + Q2 = cap) = sum_j pi(j, cap - j)
    double full_prob() const {
        double m = -std::numeric_limits<double>::infinity();
        std::vector<double> lw(cap + 1);
        for (int j = 0; j <= cap; ++j) {
            lw[j] = j * std::log(R1) - log_kappa(j, s) + (cap - j) * std::log(R2) -
                    log_gamma(cap - j + 1.0);
            m = std::max(m, lw[j]);
        }
        double z = 0.0;
        for (double v : lw) z += std::exp(v - m);
        return std::exp(m + std::log(z) - log_norm);
    }

    double mean_excess() const {  // E[(Q1 - s + 1)^+]
        double e = 0.0;
        for (int j = s; j <= cap; ++j) e += (j - s + 1.0) * row_prob(j);
        return e;
    }

    double mean_min_s() const {  // E[min(Q1, s)]
        double e = 0.0;
        for (int j = 0; j <= cap; ++j) e += std::min(j, s) * row_prob(j);
        return e;
    }

    double mean_total() const {  // E[Q1 + Q2]
        // per row j: j * rowmass + R2 * exp(c_j) e^{R2} Q(cap-j, R2) (shift k -> k-1)
        double e = 0.0;
        for (int j = 0; j <= cap; ++j) {
            e += j * row_prob(j);
            if (cap - j >= 1) {
                const double cj = j * std::log(R1) - log_kappa(j, s);
                const double lk =
                    cj + std::log(R2) + R2 + std::log(gamma_q(cap - j + 0.0, R2));
                e += std::exp(lk - log_norm);
            }
        }
        return e;
    }
};

} // namespace

BlockingDistribution::BlockingDistribution(const ErlangRSpec& spec) : spec_(spec) {
    spec.validate();
    const double R1 = spec.r1(), R2 = spec.r2();
    log_row_.resize(spec.n + 1);
    for (int j = 0; j <= spec.n; ++j) log_row_[j] = j * std::log(R1) - log_kappa(j, spec.s);
    ProductForm pf(R1, R2, spec.s, spec.n);
    log_norm_ = pf.log_norm;
}

double BlockingDistribution::prob(int j, int k) const {
    if (j < 0 || k < 0 || j + k > spec_.n) return 0.0;
    return std::exp(log_row_[j] + k * std::log(spec_.r2()) - log_gamma(k + 1.0) - log_norm_);
}

BlockingDistribution blocking_stationary(const ErlangRSpec& spec) {
    return BlockingDistribution(spec);
}

BlockingMeasures blocking_measures(const ErlangRSpec& spec) {
    spec.validate();
    const double R1 = spec.r1(), R2 = spec.r2();
    const ProductForm full(R1, R2, spec.s, spec.n);
    BlockingMeasures m{};
    m.p_block = full.full_prob();
    m.rho_s = full.mean_min_s() / spec.s;
    m.rho_n = full.mean_total() / spec.n;
    if (spec.n >= 1) {
        // A patient moving into the needy station sees the network with one
        // circulating patient less (arrival theorem for the closed network).
        const ProductForm seen(R1, R2, spec.s, spec.n - 1);
        m.p_delay = seen.tail_prob_from(spec.s);
        m.expected_wait = seen.mean_excess() / (spec.s * spec.mu);
    } else {
        m.p_delay = 0.0;
        m.expected_wait = 0.0;
    }
    return m;
}

double stability_rho_max(const ErlangRSpec& spec) {
    spec.validate();
    const int s = spec.s, n = spec.n;
    const double lx = std::log(spec.delta / (spec.p * spec.mu));
    // log-space sums of binom(n,i) (delta/(p mu))^i, weighted by min(i,s)/s
    double m = -std::numeric_limits<double>::infinity();
    std::vector<double> lw(n + 1);
    for (int i = 0; i <= n; ++i) {
        double v = log_gamma(n + 1.0) - log_gamma(i + 1.0) - log_gamma(n - i + 1.0) + i * lx;
        if (i > s)
            v += log_gamma(i + 1.0) - log_gamma(s + 1.0) + (s - i) * std::log(static_cast<double>(s));
        lw[i] = v;
        m = std::max(m, v);
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = std::exp(lw[i] - m);
        num += w * (std::min(i, s) / static_cast<double>(s));
        den += w;
    }
    return num / den;
}

double QbdModel::boundary_diag(int level, int j) const {
    return -(spec.lambda + std::min(j, spec.s) * spec.mu + (level - j) * spec.delta);
}
double QbdModel::boundary_up(int level, int j) const { return (level - j) * spec.delta; }
double QbdModel::boundary_down(int /*level*/, int j) const {
    return spec.p * std::min(j, spec.s) * spec.mu;
}

void QbdModel::check_generator() const {
    // Boundary levels: out-rates are diag + up + down + lambda (to the next
    // level) + (1-p) nu(j) (to the previous level); rows must sum to zero.
    for (int level = 0; level <= spec.n; ++level) {
        for (int j = 0; j <= std::min(level, spec.n); ++j) {
            double row = boundary_diag(level, j) + boundary_up(level, j) + spec.lambda;
            if (j > 0) row += boundary_down(level, j) + (1.0 - spec.p) * std::min(j, spec.s) * spec.mu;
            if (std::fabs(row) > 1e-12)
                throw numerical_error("qbd: boundary row sum nonzero at level " +
                                      std::to_string(level));
        }
    }
    // Repeating levels n+1..n+3: A0 + A1 + A2 row sums.
    const Eigen::VectorXd rs = (A0 + A1 + A2) * Eigen::VectorXd::Ones(spec.n + 1);
    if (rs.cwiseAbs().maxCoeff() > 1e-12)
        throw numerical_error("qbd: repeating-block row sums nonzero");
}

QbdModel qbd_build(const ErlangRSpec& spec) {
    spec.validate();
    const int n = spec.n, s = spec.s;
    QbdModel model{spec, Eigen::MatrixXd::Zero(n + 1, n + 1),
                   Eigen::MatrixXd::Zero(n + 1, n + 1), Eigen::MatrixXd::Zero(n + 1, n + 1)};
    for (int j = 0; j <= n; ++j) {
        const double nu = std::min(j, s) * spec.mu;
        model.A0(j, j) = spec.lambda;
        model.A2(j, j) = (1.0 - spec.p) * nu;
        model.A1(j, j) = -(spec.lambda + nu + (n - j) * spec.delta);
        if (j < n) model.A1(j, j + 1) = (n - j) * spec.delta;
        if (j > 0) model.A1(j, j - 1) = spec.p * nu;
    }
    model.check_generator();
    return model;
}

MatrixGeomSolution qbd_solve(const QbdModel& model) {
    const ErlangRSpec& spec = model.spec;
    const int n = spec.n, s = spec.s;
    const double rho = spec.r1() / s;
    const double rho_max = stability_rho_max(spec);
    if (!(rho < rho_max))
        throw instability_error("qbd_solve: rho = " + std::to_string(rho) +
                                " >= rho_max = " + std::to_string(rho_max));

    // G iteration: G <- -(A0 + G^2 A2) A1^{-1}, A1 factorized once.
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(model.A1.transpose());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n + 1, n + 1);
    int iterations = 0;
    for (;;) {
        // X A1 = -(A0 + G^2 A2)  =>  A1^T X^T = -(A0 + G^2 A2)^T
        const Eigen::MatrixXd rhs = -(model.A0 + G * G * model.A2);
        const Eigen::MatrixXd Gn = lu.solve(rhs.transpose()).transpose();
        const double diff = (Gn - G).cwiseAbs().maxCoeff();
        G = Gn;
        ++iterations;
        if (diff < 1e-13) break;
        if (iterations >= 100000)
            throw convergence_error("qbd_solve: G iteration stalled after 1e5 iterations");
    }
    const double residual =
        (model.A0 + G * model.A1 + G * G * model.A2).cwiseAbs().maxCoeff();
    if (residual > 1e-10)
        throw numerical_error("qbd_solve: G residual " + std::to_string(residual));

    // Boundary solve by backward block elimination: pi_i = pi_{i-1} S_i with
    // S_i = -B_{i-1,i} (B_ii + S_{i+1} B_{i+1,i})^{-1}, S_{n+1} term = G A2.
    // B_{i-1,i} (i x (i+1)): arrival superdiagonal lambda.
    // B_{i,i-1} ((i+1) x i): departure subdiagonal (1-p) nu(j).
    auto b_diag_block = [&](int level) {
        const int d = std::min(level, n) + 1;
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
        for (int j = 0; j < d; ++j) {
            B(j, j) = model.boundary_diag(level, j);
            if (j + 1 < d) B(j, j + 1) = model.boundary_up(level, j);
            if (j > 0) B(j, j - 1) = model.boundary_down(level, j);
        }
        return B;
    };

    std::vector<Eigen::MatrixXd> S(n + 1);  // S[i]: pi_i = pi_{i-1} S[i], i = 1..n
    {
        Eigen::MatrixXd correction = G * model.A2;  // enters level n's block
        for (int i = n; i >= 1; --i) {
            Eigen::MatrixXd M = b_diag_block(i);
            M += correction;
            // B_{i-1,i}: (dims(i-1) x dims(i)) with lambda on the superdiagonal
            const int dprev = std::min(i - 1, n) + 1;
            const int dcur = std::min(i, n) + 1;
            Eigen::MatrixXd Bup = Eigen::MatrixXd::Zero(dprev, dcur);
            for (int j = 0; j < dprev; ++j) {
                const int target = (i - 1 < n) ? j + 1 : j;  // above n arrivals keep phase
                if (target < dcur) Bup(j, target) = spec.lambda;
            }
            S[i] = -(M.transpose().partialPivLu().solve(Bup.transpose())).transpose();
            // next correction: S_i B_{i,i-1}, B_{i,i-1} subdiagonal (1-p) nu(j)
            Eigen::MatrixXd Bdown = Eigen::MatrixXd::Zero(dcur, dprev);
            for (int j = 1; j < dcur; ++j)
                Bdown(j, j - 1) = (1.0 - spec.p) * std::min(j, s) * spec.mu;
            correction.noalias() = S[i] * Bdown;
        }
        // level-0 consistency: B_00 + S_1 B_10 must vanish (it pins pi_0)
    }

    std::vector<Eigen::VectorXd> pi(n + 1);
    pi[0] = Eigen::VectorXd::Ones(1);
    for (int i = 1; i <= n; ++i) pi[i] = (pi[i - 1].transpose() * S[i]).transpose();

    // Normalize: sum_{i<n} pi_i e + pi_n (I - G)^{-1} e = 1.
    const Eigen::MatrixXd IG = Eigen::MatrixXd::Identity(n + 1, n + 1) - G;
    const Eigen::VectorXd ig_e = IG.partialPivLu().solve(Eigen::VectorXd::Ones(n + 1));
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += pi[i].sum();
    total += pi[n].dot(ig_e);
    for (auto& v : pi) v /= total;

    MatrixGeomSolution sol{};
    sol.G = std::move(G);
    sol.pi_boundary = std::move(pi);
    sol.residual = residual;
    sol.iterations = iterations;
    Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(sol.G, false).eigenvalues();
    sol.spectral_radius_g = ev.cwiseAbs().maxCoeff();
    return sol;
}

HoldingMeasures holding_measures(const MatrixGeomSolution& sol, const ErlangRSpec& spec) {
    const int n = spec.n, s = spec.s;
    const Eigen::MatrixXd IG = Eigen::MatrixXd::Identity(n + 1, n + 1) - sol.G;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(IG.transpose());
    // tail = pi_n (I-G)^{-1} = sum of all levels >= n
    const Eigen::VectorXd tail = lu.solve(sol.pi_boundary[n]);

    HoldingMeasures m{};
    double delay = 0.0, excess = 0.0, busy = 0.0, beds = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto& v = sol.pi_boundary[i];
        for (int j = 0; j < v.size(); ++j) {
            const double pr = v(j);
            if (j >= s) {
                delay += pr;
                excess += (j - s + 1.0) * pr;
            }
            busy += std::min(j, s) * pr;
            beds += i * pr;  // below level n all patients occupy beds
        }
    }
    for (int j = 0; j <= n; ++j) {
        const double pr = tail(j);
        if (j >= s) {
            delay += pr;
            excess += (j - s + 1.0) * pr;
        }
        busy += std::min(j, s) * pr;
        beds += n * pr;  // levels >= n keep all n beds full
    }
    m.p_delay = delay;
    m.p_hold = tail.sum();
    m.expected_wait = excess / (s * spec.mu);
    m.rho_s = busy / s;
    m.rho_n = beds / n;
    return m;
}

double ErlangRAsymptotics::eta_hat(double r) const {
    return (gamma - beta * std::sqrt(r)) / std::sqrt(1.0 - r);
}
double ErlangRAsymptotics::omega(double r) const {
    return (gamma - beta / std::sqrt(r)) / std::sqrt(1.0 - r);
}

namespace {

// The limits share the integral I = int_{-inf}^{beta} Phi((gamma - t sqrt(r))/sqrt(1-r)) dPhi(t)
double hedge_integral(double beta, double gamma, double r) {
    const double sq1r = std::sqrt(1.0 - r), sqr = std::sqrt(r);
    return quad::panels(
        [&](double t) { return std_normal_cdf((gamma - t * sqr) / sq1r) * std_normal_pdf(t); },
        beta - 10.0, beta, 0.25);
}

// T = phi(sqrt(beta^2 + eta^2)) e^{omega^2/2} Phi(omega), overflow-free.
double t_term(double beta, double eta, double omega) {
    if (omega <= 0.0)
        return std_normal_pdf(std::sqrt(beta * beta + eta * eta)) * exp_half_sq_cdf(omega);
    const double expo = 0.5 * (omega * omega - beta * beta - eta * eta);
    if (expo > 600.0) throw numerical_error("qed_limits_blocking: overflow in e^{omega^2/2} term");
    return 0.39894228040143267794 * std::exp(expo) * std_normal_cdf(omega);
}

} // namespace

QedBlockingLimits qed_limits_blocking(double r, const ErlangRAsymptotics& h) {
    if (!(r > 0.0 && r < 1.0)) throw domain_error("qed_limits_blocking: r must lie in (0,1)");
    const double beta = h.beta, gamma = h.gamma;
    const double eta = h.eta_hat(r), omega = h.omega(r);
    const double I = hedge_integral(beta, gamma, r);
    QedBlockingLimits out{};
    if (std::fabs(beta) < 1e-6) {
        // beta = 0 closed forms for the probabilities; the wait limit comes
        // from Richardson extrapolation of the regular formula (the dedicated
        // display is inconsistent with the beta -> 0 limit of the theorem)
        const double base = std::sqrt((1.0 - r) / r) * 0.39894228040143267794 *
                            (eta * std_normal_cdf(eta) + std_normal_pdf(eta));
        out.g = 1.0 / (1.0 + I / base);
        out.f = (std::sqrt(r) * std_normal_pdf(gamma) *
                     std_normal_cdf(-omega * std::sqrt(r)) +
                 0.39894228040143267794 * std_normal_cdf(eta)) /
                (I + base);
        const double h1 = qed_limits_blocking(r, ErlangRAsymptotics{1e-4, gamma}).h;
        const double h2 = qed_limits_blocking(r, ErlangRAsymptotics{2e-4, gamma}).h;
        out.h = 2.0 * h1 - h2;
        return out;
    }
    const double T = t_term(beta, eta, omega);
    const double D = std_normal_pdf(beta) * std_normal_cdf(eta) - T;
    out.g = 1.0 / (1.0 + beta * I / D);
    const double den = I + D / beta;
    out.f = (std::sqrt(r) * std_normal_pdf(gamma) * std_normal_cdf(-omega * std::sqrt(r)) + T) /
            den;
    out.h = (std_normal_pdf(beta) * std_normal_cdf(eta) / (beta * beta) +
             (beta / r - gamma / std::sqrt(r) - 1.0 / beta) * T / beta -
             std::sqrt((1.0 - r) / r) * std_normal_pdf(beta) * std_normal_pdf(eta) / beta) /
            den;
    return out;
}

HoldingHeuristic holding_heuristic(double r, const ErlangRAsymptotics& hedges) {
    if (!(hedges.beta > 0.0)) throw domain_error("holding_heuristic: beta must be > 0");
    retrial::ShiftRule rule;
    rule.gamma_shift = retrial::ShiftRule::GammaShift::InvSqrtR;
    rule.kappa_or_r = r;
    auto f = [&](double b, double gm) {
        return qed_limits_blocking(r, ErlangRAsymptotics{b, gm}).f;
    };
    const retrial::FixedPointSolution sol = retrial::solve_retrial_fixed_point(
        f, rule, retrial::QedHedge{hedges.beta, hedges.gamma});
    const QedBlockingLimits corrected =
        qed_limits_blocking(r, ErlangRAsymptotics{sol.beta_shifted, sol.gamma_shifted});
    return HoldingHeuristic{sol.alpha, corrected.g, corrected.h};
}

} // namespace qedkit::erlang_r
