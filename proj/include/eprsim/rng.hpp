/*
   Copyright 2026 the eprsim authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef EPRSIM_RNG_HPP
#define EPRSIM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace eprsim {

/// SplitMix64 mixing step. Used to spread seed material across derived
/// sub-streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// PCG32 (XSH-RR variant): seedable, cheap, and jumpable in O(log n) via
/// advance(). Each (seed, stream) pair selects an independent sequence;
/// sub-streams derived per pulse keep parallel generation identical to
/// the serial order.
class Pcg32 {
public:
    Pcg32() : Pcg32(0x853c49e6748fea9bULL, 0) {}

    Pcg32(std::uint64_t seed, std::uint64_t stream) {
        inc_ = (stream << 1u) | 1u;
        state_ = 0u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * kMultiplier + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    /// Exponential variate with the given rate.
    double exponential(double rate) { return -std::log1p(-next_double()) / rate; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Jump the sequence forward by delta steps in O(log delta).
    void advance(std::uint64_t delta) {
        // Affine-map exponentiation over the LCG step (Brown, "Random
        // Number Generation with Arbitrary Strides").
        std::uint64_t acc_mult = 1u, acc_plus = 0u;
        std::uint64_t cur_mult = kMultiplier, cur_plus = inc_;
        while (delta > 0) {
            if (delta & 1u) {
                acc_mult *= cur_mult;
                acc_plus = acc_plus * cur_mult + cur_plus;
            }
            cur_plus = (cur_mult + 1) * cur_plus;
            cur_mult *= cur_mult;
            delta >>= 1u;
        }
        state_ = acc_mult * state_ + acc_plus;
    }

    friend bool operator==(const Pcg32&, const Pcg32&) = default;

private:
    static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;

    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
};

/// Derives the generator for an independent sub-stream keyed by up to two
/// tags (module tag, entity index). Mixing the key material through
/// SplitMix64 decorrelates neighbouring keys.
inline Pcg32 substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
    std::uint64_t s = seed ^ 0x6a09e667f3bcc909ULL;
    splitmix64(s);
    s ^= tag;
    const std::uint64_t mixed_seed = splitmix64(s);
    s ^= index;
    const std::uint64_t mixed_stream = splitmix64(s);
    return Pcg32(mixed_seed, mixed_stream);
}

}  // namespace eprsim

#endif  // EPRSIM_RNG_HPP
