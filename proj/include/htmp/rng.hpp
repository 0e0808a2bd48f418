#ifndef HTMP_RNG_HPP
#define HTMP_RNG_HPP

#include <cmath>
#include <cstdint>

#include "htmp/errors.hpp"

namespace htmp {

// Deterministic counter-seeded generator. Identical (seed, stream_id) pairs
// reproduce identical draws on every platform and thread layout; replicate
// parallelism derives one substream per work item.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_(stream_id) {
        std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
        for (int i = 0; i < 4; ++i) s_[i] = splitmix(x);
        // avoid the all-zero state
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    RngStream substream(std::uint64_t id) const {
        return RngStream(seed_ ^ (0xbf58476d1ce4e5b9ULL * (stream_ + 1)), id + 1);
    }

    std::uint64_t next_u64() {
        // xoshiro256++
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on (0, 1)
    double uniform() {
        double u = (next_u64() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double c = std::cos(6.283185307179586476925286766559 * u2);
        double s = std::sin(6.283185307179586476925286766559 * u2);
        spare_ = r * s;
        have_spare_ = true;
        return r * c;
    }

    // Gamma(shape, scale), Marsaglia-Tsang; shape 0 gives the point mass at 0.
    double gamma(double shape, double scale) {
        if (shape < 0.0 || !(scale > 0.0))
            throw contract_error("RngStream::gamma: invalid parameters");
        if (shape == 0.0) return 0.0;
        if (shape < 1.0) {
            double u = uniform();
            return gamma(shape + 1.0, scale) * std::exp(std::log(u) / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return scale * d * v;
        }
    }

    // chi draw with (possibly fractional) dof
    double chi(double dof) { return std::sqrt(gamma(0.5 * dof, 2.0)); }

private:
    static std::uint64_t splitmix(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t seed_, stream_;
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace htmp

#endif
