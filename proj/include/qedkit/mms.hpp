#ifndef QEDKIT_MMS_HPP
#define QEDKIT_MMS_HPP

// Exact steady-state analysis of the classical Markovian queues: M/M/s,
// M/M/s/n, the Erlang-B loss system and the Erlang-A queue with abandonment.
// Factorial-heavy expressions are evaluated in log space so that offered
// loads up to ~10^3 stay exact.

#include <cstdint>
#include <vector>

namespace qedkit::mms {

struct MmsSpec {
    double lambda;  // arrival rate
    double mu;      // service rate
    int s;          // servers

    double offered_load() const { return lambda / mu; }
    double rho() const { return lambda / (s * mu); }
    void validate() const;          // lambda, mu > 0; s >= 1
    void require_stable() const;    // rho < 1
};

struct FiniteMmsSpec {
    MmsSpec base;
    int n;  // system capacity, n >= s
    void validate() const;
};

struct AbandonSpec {
    MmsSpec base;
    double theta;  // abandonment rate > 0
    void validate() const;
};

// Stationary distribution of the M/M/s queue; pmf evaluable lazily, tail in
// closed form.
struct MmsDistribution {
    double log_pi0;
    MmsSpec spec;
    double pmf(std::int64_t k) const;
    // Sum_{k=0}^{K} pi_k plus the closed-form geometric tail equals 1.
    double head_sum(std::int64_t K) const;
    double tail_sum(std::int64_t K) const;  // Sum_{k > K} pi_k
};

MmsDistribution mms_stationary(const MmsSpec& spec);

struct MmsMetrics {
    double delay_prob;      // Erlang-C
    double expected_wait;
    double expected_queue;  // waiting customers, by Little's law
};

MmsMetrics mms_metrics(const MmsSpec& spec);

// Erlang-B blocking probability by the stable recurrence
// B(R,k) = R B(R,k-1) / (k + R B(R,k-1)), B(R,0) = 1.
double erlang_b(double offered_load, int s);

struct FiniteMmsMetrics {
    double delay_prob;   // P(Q >= s)
    double block_prob;   // P(Q = n)
    double expected_wait;  // of admitted customers, Little on the waiting room
};

FiniteMmsMetrics mmsn_metrics(const FiniteMmsSpec& spec);

struct ErlangAMetrics {
    double delay_prob;
    double abandon_prob;
    double expected_wait;
    std::int64_t truncation;  // adaptive state-space cut (tail mass < 1e-12)
};

ErlangAMetrics erlang_a_metrics(const AbandonSpec& spec);

} // namespace qedkit::mms

#endif
