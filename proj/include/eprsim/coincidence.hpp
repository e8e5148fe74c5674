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

#ifndef EPRSIM_COINCIDENCE_HPP
#define EPRSIM_COINCIDENCE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "eprsim/simulation.hpp"

/// Window-based pairing of detection streams and the counting statistics
/// built on the resulting coincidences.
namespace eprsim {

/// Coincidence window: maximum |t_left - t_right| for a pair. Full
/// acceptance width is 2 tau.
struct WindowConfig {
    double tau = 1e-6;

    void validate() const {
        if (!(tau > 0.0)) throw std::invalid_argument("coincidence window must be positive");
    }
};

/// One matched left/right detection pair.
struct CoincidencePair {
    DetectionEvent left_event;
    DetectionEvent right_event;
    double dt = 0.0;          ///< t_left - t_right
    bool legitimate = false;  ///< same originating pulse; diagnostic only
};

namespace detail {

struct Candidate {
    double abs_dt;
    std::uint32_t left_idx;
    std::uint32_t right_idx;
};

// Strict total order on candidates: smallest |dt| first, ties toward the
// earlier partner, then by stream position. Never consults pulse ids.
struct CandidateOrder {
    std::span<const DetectionEvent> left;
    std::span<const DetectionEvent> right;

    bool operator()(const Candidate& a, const Candidate& b) const {
        if (a.abs_dt != b.abs_dt) return a.abs_dt < b.abs_dt;
        const double a_lo = std::min(left[a.left_idx].time, right[a.right_idx].time);
        const double b_lo = std::min(left[b.left_idx].time, right[b.right_idx].time);
        if (a_lo != b_lo) return a_lo < b_lo;
        const double a_hi = std::max(left[a.left_idx].time, right[a.right_idx].time);
        const double b_hi = std::max(left[b.left_idx].time, right[b.right_idx].time);
        if (a_hi != b_hi) return a_hi < b_hi;
        if (a.left_idx != b.left_idx) return a.left_idx < b.left_idx;
        return a.right_idx < b.right_idx;
    }
};

inline void require_sorted(std::span<const DetectionEvent> events, const char* label) {
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].time < events[i - 1].time)
            throw std::invalid_argument(std::string("pair_events: ") + label +
                                        " stream not sorted by time");
}

}  // namespace detail

/// Greedy closest-partner matching of two time-sorted detection streams.
///
/// Candidate pairs are all (left, right) combinations with |dt| <= tau;
/// they are consumed in order of increasing |dt| (ties toward the earlier
/// partner), each accepted pair removing its two events from further
/// consideration. The matching therefore never changes when the window
/// widens: pairs(tau1) is exactly the |dt| <= tau1 subset of pairs(tau2)
/// for tau1 <= tau2.
///
/// To bound memory on wide windows the |dt| axis is processed in bands:
/// all candidates of a band are generated among still-unmatched events
/// only, which cannot alter the global greedy order (every candidate of
/// an earlier band involving two free events would already have matched).
///
/// Pairing reads event times only; pulse ids pass through untouched into
/// the legitimacy diagnostic of the output.
inline std::vector<CoincidencePair> pair_events(std::span<const DetectionEvent> left,
                                                std::span<const DetectionEvent> right,
                                                WindowConfig window) {
    window.validate();
    detail::require_sorted(left, "left");
    detail::require_sorted(right, "right");

    std::vector<std::uint32_t> free_left(left.size());
    std::vector<std::uint32_t> free_right(right.size());
    for (std::size_t i = 0; i < left.size(); ++i) free_left[i] = std::uint32_t(i);
    for (std::size_t j = 0; j < right.size(); ++j) free_right[j] = std::uint32_t(j);
    std::vector<char> used_left(left.size(), 0), used_right(right.size(), 0);

    // Candidates among free events with lo < |dt| <= hi (lo < 0 includes
    // exact zero). Visits each left event's window with two pointers.
    const auto for_each_candidate = [&](double lo, double hi, auto&& fn) {
        std::size_t begin = 0;
        for (const std::uint32_t il : free_left) {
            const double t = left[il].time;
            while (begin < free_right.size() && right[free_right[begin]].time < t - hi) ++begin;
            for (std::size_t k = begin; k < free_right.size(); ++k) {
                const std::uint32_t jr = free_right[k];
                const double dt = t - right[jr].time;
                if (dt < -hi) break;
                const double a = std::abs(dt);
                if (a <= hi && a > lo) fn(il, jr, a);
            }
        }
    };

    std::vector<CoincidencePair> pairs;
    std::vector<detail::Candidate> band;
    const detail::CandidateOrder order{left, right};
    constexpr std::size_t kBandBudget = std::size_t(1) << 23;

    double lo = -1.0;
    while (!free_left.empty() && !free_right.empty()) {
        double hi = window.tau;
        for (;;) {
            std::size_t count = 0;
            for_each_candidate(lo, hi, [&](std::uint32_t, std::uint32_t, double) { ++count; });
            if (count <= kBandBudget) break;
            const double base = std::max(lo, 0.0);
            const double mid = base + (hi - base) * 0.5;
            if (!(mid > base) || mid >= hi) break;  // band no longer divisible
            hi = mid;
        }

        band.clear();
        for_each_candidate(lo, hi, [&](std::uint32_t il, std::uint32_t jr, double a) {
            band.push_back({a, il, jr});
        });
        std::sort(band.begin(), band.end(), order);
        for (const detail::Candidate& c : band) {
            if (used_left[c.left_idx] || used_right[c.right_idx]) continue;
            used_left[c.left_idx] = 1;
            used_right[c.right_idx] = 1;
            pairs.push_back({left[c.left_idx], right[c.right_idx],
                             left[c.left_idx].time - right[c.right_idx].time,
                             left[c.left_idx].pulse_id == right[c.right_idx].pulse_id});
        }

        if (hi >= window.tau) break;
        lo = hi;
        std::erase_if(free_left, [&](std::uint32_t i) { return used_left[i] != 0; });
        std::erase_if(free_right, [&](std::uint32_t j) { return used_right[j] != 0; });
    }

    std::sort(pairs.begin(), pairs.end(), [](const CoincidencePair& a, const CoincidencePair& b) {
        const double ta = std::min(a.left_event.time, a.right_event.time);
        const double tb = std::min(b.left_event.time, b.right_event.time);
        if (ta != tb) return ta < tb;
        return a.left_event.time < b.left_event.time;
    });
    return pairs;
}

/// Per-window channel-combination counts and the correlation estimate.
struct WindowedStats {
    std::uint64_t n_pp = 0;  ///< (+,+)
    std::uint64_t n_pm = 0;  ///< (+,-)
    std::uint64_t n_mp = 0;  ///< (-,+)
    std::uint64_t n_mm = 0;  ///< (-,-)

    std::uint64_t n_total() const { return n_pp + n_pm + n_mp + n_mm; }

    /// E = (N++ + N-- - N+- - N-+) / n_total; empty when no pairs were
    /// counted (never NaN).
    std::optional<double> correlation() const {
        const std::uint64_t n = n_total();
        if (n == 0) return std::nullopt;
        return (double(n_pp) + double(n_mm) - double(n_pm) - double(n_mp)) / double(n);
    }

    /// Binomial standard error of the correlation estimate.
    std::optional<double> correlation_error() const {
        const std::uint64_t n = n_total();
        if (n == 0) return std::nullopt;
        const double e = *correlation();
        return std::sqrt(std::max(1.0 - e * e, 0.0) / double(n));
    }
};

/// Classifies pairs by (left channel, right channel).
inline WindowedStats tally(std::span<const CoincidencePair> pairs) {
    WindowedStats stats;
    for (const CoincidencePair& p : pairs) {
        const bool lp = p.left_event.channel == Channel::plus;
        const bool rp = p.right_event.channel == Channel::plus;
        if (lp && rp)
            ++stats.n_pp;
        else if (lp)
            ++stats.n_pm;
        else if (rp)
            ++stats.n_mp;
        else
            ++stats.n_mm;
    }
    return stats;
}

/// Empirical CHSH discriminator from four runs at settings
/// (x,z), (x,zz), (xx,z), (xx,zz), in that order.
struct ChshEstimate {
    double value = 0.0;      ///< E1 - E2 + E3 + E4, reported unclamped
    double std_error = 0.0;  ///< propagated binomial error
    std::array<double, 4> e{};
    std::array<double, 4> e_error{};
};

inline ChshEstimate chsh_estimate(const std::array<WindowedStats, 4>& runs) {
    ChshEstimate est;
    double var = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const auto e = runs[k].correlation();
        if (!e) throw std::invalid_argument("chsh_estimate: run with no coincidences");
        est.e[k] = *e;
        est.e_error[k] = *runs[k].correlation_error();
        var += est.e_error[k] * est.e_error[k];
    }
    est.value = est.e[0] - est.e[1] + est.e[2] + est.e[3];
    est.std_error = std::sqrt(var);
    return est;
}

/// One sample of a coincidence fringe: rate at a relative analyzer angle.
struct FringeSample {
    Angle relative_angle = 0.0;
    std::uint64_t count = 0;
};

struct VisibilityStats {
    double value = 0.0;
    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;
};

/// Fringe contrast (max - min) / (max + min) over a rate sweep.
inline VisibilityStats visibility_stats(std::span<const FringeSample> rates) {
    if (rates.size() < 2)
        throw std::invalid_argument("visibility requires at least two samples");
    std::uint64_t lo = rates[0].count, hi = rates[0].count;
    for (const FringeSample& s : rates) {
        lo = std::min(lo, s.count);
        hi = std::max(hi, s.count);
    }
    if (hi == 0) throw std::invalid_argument("visibility undefined for all-zero rates");
    return {double(hi - lo) / double(hi + lo), lo, hi};
}

inline double visibility(std::span<const FringeSample> rates) {
    return visibility_stats(rates).value;
}

}  // namespace eprsim

#endif  // EPRSIM_COINCIDENCE_HPP
