#ifndef QEDKIT_RNG_HPP
#define QEDKIT_RNG_HPP

// Counter-based RNG (Philox 4x32-10). A stream is addressed by (seed, stream
// id); replication k of a simulation draws from stream (seed, k), so parallel
// replications are deterministic regardless of scheduling.

#include <cmath>
#include <cstdint>

namespace qedkit::rng {

class Philox {
  public:
    Philox(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          ctr2_(static_cast<std::uint32_t>(stream)),
          ctr3_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint64_t next_u64() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        std::uint32_t c0 = static_cast<std::uint32_t>(block_);
        std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
        std::uint32_t c2 = ctr2_, c3 = ctr3_;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = 0xD2511F53ULL * c0;
            const std::uint64_t p1 = 0xCD9E8D57ULL * c2;
            const std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t l0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t l1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = h1 ^ c1 ^ k0;
            const std::uint32_t n2 = h0 ^ c3 ^ k1;
            c1 = l1;
            c3 = l0;
            c0 = n0;
            c2 = n2;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        ++block_;
        spare_ = (static_cast<std::uint64_t>(c2) << 32) | c3;
        have_ = true;
        return (static_cast<std::uint64_t>(c0) << 32) | c1;
    }

    // Uniform in (0, 1), 53-bit, never exactly 0.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Standard normal via polar Marsaglia.
    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return spare_normal_;
        }
        double u, v, q;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            q = u * u + v * v;
        } while (q >= 1.0 || q == 0.0);
        const double f = std::sqrt(-2.0 * std::log(q) / q);
        spare_normal_ = v * f;
        have_normal_ = true;
        return u * f;
    }

    // Gamma(shape, scale=1) by Marsaglia-Tsang, shape > 0.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Poisson(mean) sample; inversion for small means, PTRD-lite (normal
    // cutpoint + search) is unnecessary here, so use the Atkinson rejection
    // for large means.
    std::int64_t poisson(double mean) {
        if (mean < 30.0) {
            const double L = std::exp(-mean);
            double p = 1.0;
            std::int64_t k = 0;
            do {
                ++k;
                p *= uniform();
            } while (p > L);
            return k - 1;
        }
        const double c = 0.767 - 3.36 / mean;
        const double beta = M_PI / std::sqrt(3.0 * mean);
        const double alpha = beta * mean;
        const double k = std::log(c) - mean - std::log(beta);
        for (;;) {
            const double u = uniform();
            const double x = (alpha - std::log((1.0 - u) / u)) / beta;
            const std::int64_t n = static_cast<std::int64_t>(std::floor(x + 0.5));
            if (n < 0) continue;
            const double v = uniform();
            const double y = alpha - beta * x;
            const double t = 1.0 + std::exp(y);
            const double lhs = y + std::log(v / (t * t));
            const double rhs = k + n * std::log(mean) - std::lgamma(n + 1.0);
            if (lhs <= rhs) return n;
        }
    }

  private:
    std::uint32_t key0_, key1_, ctr2_, ctr3_;
    std::uint64_t block_ = 0;
    std::uint64_t spare_ = 0;
    bool have_ = false;
    double spare_normal_ = 0.0;
    bool have_normal_ = false;
};

} // namespace qedkit::rng

#endif
