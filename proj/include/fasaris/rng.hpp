// SPDX-License-Identifier: Apache-2.0
//
// Counter-based substreams for reproducible parallel Monte Carlo: every
// (seed, trial) pair keys an independent generator, so trial outcomes do
// not depend on how trials are sliced across threads.

#pragma once

#include <cmath>
#include <cstdint>

namespace fasaris::rng {

inline std::uint64_t splitmix64(std::uint64_t& s)
{
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Xoshiro256ss {
public:
    // Key the state from (seed, stream); stream is typically a trial index.
    Xoshiro256ss(std::uint64_t seed, std::uint64_t stream = 0)
    {
        std::uint64_t s = seed ^ (0xd1342543de82ef95ULL * (stream + 1));
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t next()
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform on (0, 1]
    double uniform() { return ((next() >> 11) + 1) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

// Box-Muller pairs; platform-independent unlike std::normal_distribution.
class GaussianStream {
public:
    explicit GaussianStream(Xoshiro256ss gen) : gen_(gen) {}
    GaussianStream(std::uint64_t seed, std::uint64_t stream) : gen_(seed, stream) {}

    double next()
    {
        if (have_) {
            have_ = false;
            return cached_;
        }
        const double u1 = gen_.uniform();
        const double u2 = gen_.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        cached_ = r * std::sin(phi);
        have_ = true;
        return r * std::cos(phi);
    }

    double uniform() { return gen_.uniform(); }

private:
    Xoshiro256ss gen_;
    double cached_ = 0.0;
    bool have_ = false;
};

}  // namespace fasaris::rng
