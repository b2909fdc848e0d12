#pragma once
/**
 * @file adversary.hpp
 * @brief Lower-bound input constructions.
 *
 * StreamBurstSource: a stream of intruders at (1, theta) spaced (1 - rho)/v
 * apart starting at t = 1; the instant the defender first captures one of
 * them, a burst appears at (1, -theta) and the stream stops.
 *
 * Two-intruder instances I1..I5: intruder a at (1, theta), intruder b at
 * (1, -theta), with arrival times chosen so that an online defender cannot
 * tell which corner to pre-position for.
 */

#include "conic_defense/engine.hpp"
#include "conic_defense/errors.hpp"
#include "conic_defense/geometry.hpp"
#include "conic_defense/instances.hpp"
#include "conic_defense/policies.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <vector>

namespace conic_defense {

class StreamBurstSource final : public ArrivalSource {
public:
    StreamBurstSource(const ProblemParams& params, int burst_size, int stream_cap = 50,
                      std::optional<double> stream_gap = std::nullopt, double first_time = 1.0)
        : params_(validate_params(params)),
          burst_size_(burst_size),
          stream_cap_(stream_cap),
          gap_(stream_gap.value_or((1.0 - params.rho) / params.v)),
          first_time_(first_time) {
        if (burst_size < 0 || stream_cap < 0) throw ValidationError("burst size and stream cap must be nonnegative");
        if (!(gap_ > 0.0)) throw ValidationError("stream gap must be positive");
    }

    [[nodiscard]] std::optional<double> next_time() const override {
        if (burst_remaining_ > 0) return *burst_time_;
        if (!burst_time_ && stream_emitted_ < stream_cap_) return first_time_ + stream_emitted_ * gap_;
        return std::nullopt;
    }

    ArrivalEvent pop() override {
        ArrivalEvent e;
        if (burst_remaining_ > 0) {
            --burst_remaining_;
            e = {*burst_time_, -params_.theta};
        } else {
            e = {first_time_ + stream_emitted_ * gap_, params_.theta};
            ++stream_emitted_;
        }
        emitted_.push_back(e);
        return e;
    }

    void on_capture(double time, int intruder_id) override {
        if (burst_time_ || intruder_id >= stream_emitted_) return;
        burst_time_ = time;
        burst_remaining_ = burst_size_;
    }

    /// Everything emitted so far, as a static instance.
    [[nodiscard]] InputInstance realized() const { return {params_, emitted_}; }
    [[nodiscard]] int stream_count() const { return stream_emitted_; }
    [[nodiscard]] std::optional<double> burst_time() const { return burst_time_; }
    [[nodiscard]] int burst_size() const { return burst_size_; }

private:
    ProblemParams params_;
    int burst_size_;
    int stream_cap_;
    double gap_;
    double first_time_;
    int stream_emitted_{0};
    int burst_remaining_{0};
    std::optional<double> burst_time_;
    std::vector<ArrivalEvent> emitted_;
};

/// Outcome of coupling a policy with the stream-burst adversary.
struct StreamBurstRun {
    SimResult sim;
    InputInstance realized;
    int stream_count{};
    std::optional<double> burst_time;
};

inline StreamBurstRun run_stream_burst(Policy& policy, const ProblemParams& params, int burst_size,
                                       int stream_cap = 50) {
    StreamBurstSource source(params, burst_size, stream_cap);
    StreamBurstRun out;
    out.sim = simulate(source, policy, params);
    out.realized = source.realized();
    out.stream_count = source.stream_count();
    out.burst_time = source.burst_time();
    return out;
}

// ---------------------------------------------------------------------------

/// Vehicle poses and timing for the two-intruder construction.
///
/// For theta <= pi/2, (t1, alpha1) and (t2, alpha2) are where the segment from
/// (1, theta) to (rho, -theta) crosses the r-circles about its endpoints; t1
/// doubles as the arrival time of the instances. For theta > pi/2 the segment
/// leaves the sector, the path runs through the apex, and t2 = 1 + rho - 2r is
/// the apex path length; the second capture pose is then (rho - r, -theta).
struct Thm2Quantities {
    double t1{};
    double alpha1{};
    double t2{};
    double alpha2{};
    double L{};          ///< time to move from (t1, alpha1) to its mirror
    double sqrt_term{};  ///< sqrt(1 + rho^2 - 2 rho cos(2 theta))
    PolarPoint first_pose;   ///< touches (1, theta)
    PolarPoint second_pose;  ///< touches (rho, -theta)
    bool through_apex{false};
    double leg_time{};   ///< travel time between the two capture poses
};

inline Thm2Quantities thm2_quantities(const ProblemParams& params) {
    validate_params(params);
    const auto [theta, rho, v, r] = params;
    Thm2Quantities q;
    q.sqrt_term = std::sqrt(1.0 + rho * rho - 2.0 * rho * std::cos(2.0 * theta));
    const double S = q.sqrt_term;
    if (theta <= kPi / 2.0) {
        const double s = std::sin(theta), c = std::cos(theta);
        q.t1 = std::sqrt(1.0 + r * r - 2.0 * r * (1.0 - rho * std::cos(2.0 * theta)) / S);
        q.t2 = std::sqrt(rho * rho + r * r + 2.0 * r * rho * (std::cos(2.0 * theta) - rho) / S);
        q.alpha1 = std::atan2(s * S - r * (1.0 + rho) * s, c * S - r * (1.0 - rho) * c);
        q.alpha2 = std::atan2(-rho * s * S + r * (1.0 + rho) * s, rho * c * S + r * (1.0 - rho) * c);
        q.L = 2.0 * s * (1.0 - r * (1.0 + rho) / S);
        q.first_pose = {q.t1, q.alpha1};
        q.second_pose = {q.t2, q.alpha2};
        q.leg_time = S - 2.0 * r;
    } else {
        q.t1 = 1.0 - r;
        q.alpha1 = theta;
        q.t2 = 1.0 + rho - 2.0 * r;
        q.alpha2 = -theta;
        q.L = 2.0 * (1.0 - r);
        q.first_pose = {1.0 - r, theta};
        q.second_pose = {rho - r, -theta};
        q.through_apex = true;
        q.leg_time = 1.0 + rho - 2.0 * r;
    }
    return q;
}

/// Same poses for theta <= pi/2 built directly from the segment/circle
/// intersections, independent of the closed forms above.
inline std::pair<PolarPoint, PolarPoint> thm2_poses_by_construction(const ProblemParams& params) {
    const Vec2 a = to_cartesian({1.0, params.theta});
    const Vec2 b = to_cartesian({params.rho, -params.theta});
    const Vec2 d = b - a;
    const double len = d.norm();
    const Vec2 u = d * (1.0 / len);
    return {to_polar(a + u * params.r), to_polar(b - u * params.r)};
}

/// Gap between the two arrivals in I4/I5. Positive only strictly inside the regime.
inline double thm2_strict_gap(const ProblemParams& params) {
    const auto q = thm2_quantities(params);
    return q.leg_time - (1.0 - params.rho) / params.v;
}

/// Whether (1 - rho)/v <= the second-leg time (the "at least 2" regime).
inline bool thm2_condition(const ProblemParams& params) {
    return (1.0 - params.rho) / params.v <= thm2_quantities(params).leg_time + kAngleTol;
}

/// Builds I_k, k in 1..5. `eps_fraction` sets the I2/I3 gap as a fraction of L.
/// With `unchecked`, I4/I5 keep the raw gap even when it is not positive.
inline InputInstance thm2_instance(const ProblemParams& params, int k, double eps_fraction = 0.5,
                                   Admission admission = Admission::checked) {
    const auto q = thm2_quantities(params);
    const double th = params.theta;
    auto pair = [&](double ta, double tb) {
        InputInstance inst{params, {}};
        if (ta <= tb) {
            inst.arrivals = {{ta, th}, {tb, -th}};
        } else {
            inst.arrivals = {{tb, -th}, {ta, th}};
        }
        return validate(inst);
    };
    switch (k) {
        case 1: return pair(q.t1, q.t1);
        case 2: return pair(q.t1, q.t1 + eps_fraction * q.L);
        case 3: return pair(q.t1 + eps_fraction * q.L, q.t1);
        case 4:
        case 5: {
            const double eps = thm2_strict_gap(params);
            if (!(eps > 0.0) && admission == Admission::checked) throw RegimeError("I4/I5 need (1 - rho)/v strictly below the second-leg time", eps);
            return k == 4 ? pair(q.t1, q.t1 + eps) : pair(q.t1 + eps, q.t1);
        }
        default: throw ValidationError("instance index must be 1..5");
    }
}

struct Thm2Instances {
    std::array<std::optional<InputInstance>, 5> items;  ///< I1..I5; I4/I5 empty outside the strict regime
};

inline Thm2Instances thm2_instances(const ProblemParams& params, double eps_fraction = 0.5) {
    Thm2Instances out;
    for (int k = 1; k <= 5; ++k) {
        try {
            out.items[static_cast<std::size_t>(k - 1)] = thm2_instance(params, k, eps_fraction);
        } catch (const RegimeError&) {
        }
    }
    return out;
}

}  // namespace conic_defense
