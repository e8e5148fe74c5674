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

#ifndef EPRSIM_SIMULATION_HPP
#define EPRSIM_SIMULATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "eprsim/analytic.hpp"
#include "eprsim/rng.hpp"

/// Event-based source/detector model: timed anti-correlated pulse pairs,
/// Malus-law channel routing at the beam splitters, and photoelectron
/// emission delays distributed over the pulse length.
namespace eprsim {

/// Detector output channel of the polarizing beam splitter.
enum class Channel : std::uint8_t { plus, minus };

struct SourceConfig {
    double rate = 1e4;           ///< pair emissions per unit time (Poisson)
    double pulse_length = 1e-6;  ///< pulse/coherence length l, time units
    double duration = 10.0;      ///< total emission window
    double efficiency = 1.0;     ///< photoelectron yield per pulse, in (0, 1]
    std::uint64_t seed = 1;

    /// rate * pulse_length, the knob controlling how often two pulse
    /// pairs overlap in time.
    double overlap_density() const { return rate * pulse_length; }

    void validate() const {
        if (!(rate > 0.0)) throw std::invalid_argument("source rate must be positive");
        if (!(pulse_length > 0.0)) throw std::invalid_argument("pulse length must be positive");
        if (!(duration >= 0.0)) throw std::invalid_argument("duration must be non-negative");
        if (!(efficiency > 0.0) || efficiency > 1.0)
            throw std::invalid_argument("efficiency must be in (0, 1]");
    }

    friend bool operator==(const SourceConfig&, const SourceConfig&) = default;
};

/// One source emission: a pair of opposed pulses sharing a variant.
struct PulsePair {
    std::uint64_t id = 0;
    double t_emit = 0.0;
    int variant = 0;  ///< 0: left vertical / right horizontal; 1: swapped
};

/// A single photoelectron registration.
struct DetectionEvent {
    Side side = Side::left;
    Channel channel = Channel::plus;
    double time = 0.0;
    std::uint64_t pulse_id = 0;  ///< diagnostic only; pairing never reads it
};

namespace detail {
// Sub-stream tags for the per-run generators.
inline constexpr std::uint64_t kEmissionTag = 0xe31a11u;
inline constexpr std::uint64_t kDetectLeftTag = 0xde7ec71eF7ull;
inline constexpr std::uint64_t kDetectRightTag = 0xde7ec7121u;
}  // namespace detail

/// Homogeneous Poisson emission stream over [0, duration); variants are
/// i.i.d. fair coin flips. Deterministic for a given seed. A zero
/// duration yields an empty stream.
inline std::vector<PulsePair> generate_emissions(const SourceConfig& config) {
    config.validate();
    std::vector<PulsePair> pulses;
    pulses.reserve(static_cast<std::size_t>(config.rate * config.duration * 1.05) + 16);
    Pcg32 rng = substream(config.seed, detail::kEmissionTag);
    double t = 0.0;
    std::uint64_t id = 0;
    for (;;) {
        t += rng.exponential(config.rate);
        if (t >= config.duration) break;
        pulses.push_back({id++, t, rng.bernoulli(0.5) ? 1 : 0});
    }
    return pulses;
}

/// Polarization orientation carried by the pulse of a given side and
/// variant, in the analytic module's basis (axis 1 horizontal = 0 rad,
/// axis 2 vertical = pi/2 rad). The two sides are perpendicular for both
/// variants.
inline Angle pulse_polarization(Side side, int variant) {
    if (variant != 0 && variant != 1) throw std::invalid_argument("variant must be 0 or 1");
    const bool vertical = (side == Side::left) ? (variant == 0) : (variant == 1);
    return vertical ? half_pi : 0.0;
}

/// Detector response to one pulse: with probability `efficiency` a single
/// photoelectron is produced; it lands in the plus channel with
/// probability cos^2(pol - analyzer) (the squared axis-1 output-port
/// amplitude) and its registration time is displaced uniformly over the
/// pulse length.
inline std::optional<DetectionEvent> detect(Side side, std::uint64_t pulse_id, Angle pol,
                                            Angle analyzer, double t_arrive,
                                            double pulse_length, double efficiency,
                                            Pcg32& rng) {
    if (!(pulse_length > 0.0)) throw std::invalid_argument("pulse length must be positive");
    if (!(efficiency > 0.0) || efficiency > 1.0)
        throw std::invalid_argument("efficiency must be in (0, 1]");
    if (efficiency < 1.0 && !rng.bernoulli(efficiency)) return std::nullopt;
    const double c = std::cos(pol - analyzer);
    const Channel channel = rng.bernoulli(c * c) ? Channel::plus : Channel::minus;
    const double time = t_arrive + rng.uniform(0.0, pulse_length);
    return DetectionEvent{side, channel, time, pulse_id};
}

/// Left and right detection streams of one run, each sorted by time.
struct RunStreams {
    std::vector<DetectionEvent> left;
    std::vector<DetectionEvent> right;
};

/// Full event-based run at analyzer orientations (zl, zr). Every pulse
/// pair yields at most one detection per side; propagation delays are
/// equal on both sides and set to zero. Each pulse consumes its own RNG
/// sub-stream per side, so the result is independent of evaluation order
/// and the left stream never depends on the right analyzer angle.
inline RunStreams run_experiment(const SourceConfig& config, Angle zl, Angle zr) {
    config.validate();
    const std::vector<PulsePair> pulses = generate_emissions(config);
    RunStreams streams;
    streams.left.reserve(static_cast<std::size_t>(double(pulses.size()) * config.efficiency) + 16);
    streams.right.reserve(streams.left.capacity());
    for (const PulsePair& pulse : pulses) {
        Pcg32 rng_left = substream(config.seed, detail::kDetectLeftTag, pulse.id);
        Pcg32 rng_right = substream(config.seed, detail::kDetectRightTag, pulse.id);
        if (auto ev = detect(Side::left, pulse.id, pulse_polarization(Side::left, pulse.variant),
                             zl, pulse.t_emit, config.pulse_length, config.efficiency, rng_left))
            streams.left.push_back(*ev);
        if (auto ev = detect(Side::right, pulse.id, pulse_polarization(Side::right, pulse.variant),
                             zr, pulse.t_emit, config.pulse_length, config.efficiency, rng_right))
            streams.right.push_back(*ev);
    }
    const auto by_time = [](const DetectionEvent& a, const DetectionEvent& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.pulse_id < b.pulse_id;
    };
    std::sort(streams.left.begin(), streams.left.end(), by_time);
    std::sort(streams.right.begin(), streams.right.end(), by_time);
    return streams;
}

}  // namespace eprsim

#endif  // EPRSIM_SIMULATION_HPP
