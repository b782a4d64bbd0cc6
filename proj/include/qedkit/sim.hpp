#ifndef QEDKIT_SIM_HPP
#define QEDKIT_SIM_HPP

// Discrete-event (CTMC) simulator validating the approximations: M/M/s
// variants with finite capacity, abandonment and retrial orbits, the cloud
// tandem, the restricted Erlang-R models, and time-varying arrivals driven
// by a staffing curve. Replications are deterministic given (seed, rep) and
// may run concurrently.

#include "qedkit/dimensioning.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qedkit::sim {

enum class Model {
    Mms,
    MmsN,
    ErlangA,
    MmsNRetrial,
    ErlangARetrial,
    Cloud,
    ErlangRBlocking,
    ErlangRHolding,
    MtMst,  // time-varying arrivals with a staffing curve
};

struct SimScenario {
    Model model = Model::Mms;
    double lambda = 1.0;       // arrival rate (ignored when lambda_curve set)
    double mu = 1.0;           // service rate
    int s = 1;                 // servers
    int n = 0;                 // capacity (MmsN/Cloud/ErlangR)
    double theta = 1.0;        // abandonment rate (ErlangA)
    double delta_retry = 0.1;  // retrial rate
    double kappa = 1.0;        // cloud second-stage rate
    double delta = 1.0;        // Erlang-R content rate
    double p = 0.5;            // Erlang-R return probability

    double horizon = 1e4;
    double warmup = 1e3;  // default set by callers; must be < horizon
    int reps = 20;
    std::uint64_t seed = 1;

    std::optional<dim::StaffingCurve> staffing;
    std::optional<dim::OfferedLoadCurve> lambda_curve;

    void validate() const;
    static SimScenario from_json(const std::string& text);
};

struct SimEstimate {
    std::string measure;
    double point;
    double half_width_95;
    int reps;
};

std::vector<SimEstimate> simulate(const SimScenario& scenario);

// Per-slice delay probability for time-varying runs (slice width = the
// staffing curve's review period).
struct TimeSlicedDelay {
    std::vector<double> slice_start;
    std::vector<double> delay_prob;
    std::vector<double> half_width_95;
};

TimeSlicedDelay simulate_time_sliced(const SimScenario& scenario);

std::string estimates_to_csv(const std::vector<SimEstimate>& estimates);

// 97.5% Student-t quantile (exact table for small df, Cornish-Fisher beyond).
double t_quantile_975(int df);

} // namespace qedkit::sim

#endif
