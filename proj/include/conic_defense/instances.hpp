#pragma once
/**
 * @file instances.hpp
 * @brief Input instances: timed intruder arrivals on the unit circumference.
 */

#include "conic_defense/errors.hpp"
#include "conic_defense/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace conic_defense {

/// An intruder appearing at (1, angle) at `time`.
struct ArrivalEvent {
    double time{};
    double angle{};

    bool operator==(const ArrivalEvent&) const = default;

    [[nodiscard]] IntruderPath path() const { return {time, angle}; }
};

/// Arrivals sorted by time. Equal times are a burst and stay separate records.
struct InputInstance {
    ProblemParams params;
    std::vector<ArrivalEvent> arrivals;

    bool operator==(const InputInstance&) const = default;
};

enum class IntruderStatus { pending, active, captured, lost };

inline const char* to_string(IntruderStatus s) {
    switch (s) {
        case IntruderStatus::pending: return "pending";
        case IntruderStatus::active: return "active";
        case IntruderStatus::captured: return "captured";
        case IntruderStatus::lost: return "lost";
    }
    return "?";
}

struct IntruderRecord {
    int id{};
    ArrivalEvent arrival;
    IntruderStatus status{IntruderStatus::pending};
    double resolved_at{};            ///< capture or breach time once resolved
    bool captured_on_arrival{false};  ///< already inside the capture disc when it appeared
};

inline const InputInstance& validate(const InputInstance& instance) {
    validate_params(instance.params);
    const double theta = instance.params.theta;
    for (std::size_t k = 0; k < instance.arrivals.size(); ++k) {
        const auto& a = instance.arrivals[k];
        const std::string at = " at index " + std::to_string(k);
        if (!std::isfinite(a.time) || !std::isfinite(a.angle)) throw ValidationError("non-finite value" + at);
        if (a.time < 0.0) throw ValidationError("negative arrival time" + at);
        if (std::abs(a.angle) > theta + kAngleTol) throw ValidationError("angle out of range" + at);
        if (k > 0 && a.time < instance.arrivals[k - 1].time) throw ValidationError("arrivals not sorted" + at);
    }
    return instance;
}

/// n arrivals, times uniform on [0, horizon], angles uniform on [-theta, theta].
inline InputInstance random_instance(const ProblemParams& params, std::size_t n, double horizon, std::uint64_t seed) {
    validate_params(params);
    if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> time_dist(0.0, horizon);
    std::uniform_real_distribution<double> angle_dist(-params.theta, params.theta);
    InputInstance out{params, {}};
    out.arrivals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = time_dist(rng);
        out.arrivals.push_back({t, angle_dist(rng)});
    }
    std::stable_sort(out.arrivals.begin(), out.arrivals.end(),
                     [](const ArrivalEvent& a, const ArrivalEvent& b) { return a.time < b.time; });
    return out;
}

/// Same as random_instance with every time shifted by `offset`.
inline InputInstance random_instance_after(const ProblemParams& params, std::size_t n, double horizon,
                                           std::uint64_t seed, double offset) {
    auto out = random_instance(params, n, horizon, seed);
    for (auto& a : out.arrivals) a.time += offset;
    return out;
}

}  // namespace conic_defense
