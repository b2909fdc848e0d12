#pragma once
/**
 * @file engine.hpp
 * @brief Event-driven simulator for one vehicle against radial intruders.
 *
 * The vehicle follows piecewise motion legs (straight segments at constant
 * velocity, or circular arcs about the apex). Intruders move radially inward at
 * speed v. The next event is the earliest of: next arrival, first capture on
 * the current leg, first breach, end of the current leg, policy review time.
 * Captures on straight legs come from a quadratic; on arcs from conservative
 * distance stepping, which never steps past a crossing.
 *
 * Ties at one timestamp are processed as arrivals, captures, breaches, then
 * motion completion and the policy consult. Every intruder inside the capture
 * disc at a capture instant is captured together, and a capture at the breach
 * instant wins over the breach.
 */

#include "conic_defense/errors.hpp"
#include "conic_defense/geometry.hpp"
#include "conic_defense/instances.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace conic_defense {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct RevealedArrival {
    int id{};
    ArrivalEvent event;
};

struct ActiveIntruder {
    int id{};
    ArrivalEvent arrival;
    PolarPoint position;
};

/// What a policy may look at. Everything here is known at `now`.
struct Observation {
    double now{};
    std::span<const RevealedArrival> revealed;  ///< every arrival with time <= now, in order
    std::vector<ActiveIntruder> active;
    PolarPoint vehicle;
    const ProblemParams* params{nullptr};
};

struct MotionDirective {
    enum class Kind { hold, go_to, follow_arc };

    Kind kind{Kind::hold};
    PolarPoint waypoint;      ///< go_to target
    double arc_radius{};      ///< follow_arc radius, must equal the vehicle radius
    double target_angle{};    ///< follow_arc end angle (unwrapped; may pass +-pi when theta = pi)
    double speed{1.0};
    std::optional<double> review_at;
    bool decision{true};  ///< log a decision record when applied

    static MotionDirective hold(std::optional<double> review = std::nullopt, bool decision = true) {
        MotionDirective d;
        d.review_at = review;
        d.decision = decision;
        return d;
    }
    static MotionDirective go_to(PolarPoint p, bool decision = true, double speed = 1.0) {
        MotionDirective d;
        d.kind = Kind::go_to;
        d.waypoint = p;
        d.speed = speed;
        d.decision = decision;
        return d;
    }
    static MotionDirective arc(double radius, double target_angle, bool decision = true, double speed = 1.0) {
        MotionDirective d;
        d.kind = Kind::follow_arc;
        d.arc_radius = radius;
        d.target_angle = target_angle;
        d.speed = speed;
        d.decision = decision;
        return d;
    }
};

/// Why the engine is consulting the policy. Several may be set at once.
struct Triggers {
    bool start{false};
    bool arrival{false};
    bool capture{false};
    bool breach{false};
    bool motion_done{false};
    bool review{false};
};

/// Online policy. Returning nullopt keeps the current motion.
class Policy {
public:
    virtual ~Policy() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] virtual PolarPoint initial_position() const = 0;
    virtual std::optional<MotionDirective> decide(const Observation& obs, const Triggers& why) = 0;
};

/// Arrivals fed to the engine. Reactive sources may add arrivals when told
/// about captures; an arrival added at the capture instant is processed at
/// that same instant.
class ArrivalSource {
public:
    virtual ~ArrivalSource() = default;
    [[nodiscard]] virtual std::optional<double> next_time() const = 0;
    virtual ArrivalEvent pop() = 0;
    virtual void on_capture(double /*time*/, int /*intruder_id*/) {}
};

class InstanceSource final : public ArrivalSource {
public:
    explicit InstanceSource(std::vector<ArrivalEvent> arrivals) : arrivals_(std::move(arrivals)) {}
    explicit InstanceSource(const InputInstance& instance) : arrivals_(instance.arrivals) {}

    [[nodiscard]] std::optional<double> next_time() const override {
        if (next_ >= arrivals_.size()) return std::nullopt;
        return arrivals_[next_].time;
    }
    ArrivalEvent pop() override { return arrivals_.at(next_++); }

private:
    std::vector<ArrivalEvent> arrivals_;
    std::size_t next_{0};
};

enum class TraceEvent { arrival, capture, breach, decision, waypoint_reached };

inline const char* to_string(TraceEvent e) {
    switch (e) {
        case TraceEvent::arrival: return "arrival";
        case TraceEvent::capture: return "capture";
        case TraceEvent::breach: return "breach";
        case TraceEvent::decision: return "decision";
        case TraceEvent::waypoint_reached: return "waypoint_reached";
    }
    return "?";
}

struct TraceRecord {
    double time{};
    TraceEvent event{};
    int intruder_id{-1};  ///< -1 for decisions and waypoints
    PolarPoint vehicle;
};

/// One piece of vehicle motion over [t0, t1].
struct Leg {
    enum class Kind { linear, arc };

    Kind kind{Kind::linear};
    double t0{};
    double t1{};
    Vec2 p0;        // linear
    Vec2 velocity;  // linear
    double radius{};  // arc
    double angle0{};  // arc, unwrapped
    double omega{};   // arc, signed angular rate
    PolarPoint end_pose;

    [[nodiscard]] Vec2 position(double t) const {
        if (t >= t1) return to_cartesian(end_pose);
        if (kind == Kind::linear) return p0 + velocity * (t - t0);
        const double a = angle0 + omega * (t - t0);
        return {radius * std::cos(a), radius * std::sin(a)};
    }

    [[nodiscard]] PolarPoint polar(double t) const {
        if (t >= t1) return end_pose;
        if (kind == Kind::arc) return {radius, wrap_angle(angle0 + omega * (t - t0))};
        const PolarPoint p = to_polar(position(t));
        if (p.radius < 1e-15) return {0.0, end_pose.angle};
        return p;
    }

    [[nodiscard]] double speed() const {
        return kind == Kind::linear ? velocity.norm() : std::abs(omega) * radius;
    }

    static double wrap_angle(double a) {
        if (a > kPi || a <= -kPi) {
            a = std::remainder(a, 2.0 * kPi);
            if (a <= -kPi) a += 2.0 * kPi;
        }
        return a;
    }
};

struct SimResult {
    int captured{0};
    int lost{0};
    std::vector<IntruderRecord> per_intruder;
    std::vector<TraceRecord> trace;
    double end_time{0.0};
    PolarPoint start;         ///< vehicle pose at t = 0
    std::vector<Leg> motion;  ///< legs actually flown, cut where a new directive replaced them

    [[nodiscard]] int total() const { return static_cast<int>(per_intruder.size()); }
};

namespace detail {

/// Earliest t in [lo, hi] with the intruder within `reach` of the vehicle on `leg`
/// (or of a stationary vehicle at `hold_at` when leg is null).
inline std::optional<double> first_capture_on(const Leg* leg, const Vec2& hold_at, const IntruderPath& path,
                                              double v, double reach, double lo, double hi) {
    if (lo > hi) return std::nullopt;
    const Vec2 w = path.velocity(v);
    if (leg == nullptr || leg->kind == Leg::Kind::linear) {
        const Vec2 p_lo = leg ? leg->position(lo) : hold_at;
        const Vec2 vel = leg ? leg->velocity : Vec2{};
        const Vec2 e = p_lo - path.position_at(lo, v);
        if (auto tau = first_inside(e, vel - w, reach, hi - lo)) return lo + *tau;
        return std::nullopt;
    }
    // arc: relative speed is at most leg speed + v, so stepping by gap/(speed+v)
    // cannot jump over the first crossing
    const double rate = leg->speed() + v;
    double t = lo;
    for (int iter = 0; iter < 2'000'000; ++iter) {
        const double gap = distance(leg->position(t), path.position_at(t, v)) - reach;
        if (gap <= kAngleTol) return t;
        t += std::max(gap / rate, 1e-13);
        if (t > hi) {
            const double gap_hi = distance(leg->position(hi), path.position_at(hi, v)) - reach;
            if (gap_hi <= kAngleTol) return hi;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace detail

struct SimOptions {
    std::optional<double> horizon;
    /// Consults allowed at a single timestamp before the run is declared stuck.
    int max_consults_per_instant{10'000};
};

/// Runs one policy against one arrival source.
inline SimResult simulate(ArrivalSource& source, Policy& policy, const ProblemParams& params,
                          const SimOptions& options = {}) {
    validate_params(params);
    const double reach = params.r + 0.5 * kCaptureTol;
    const double theta = params.theta;

    SimResult result;
    std::vector<RevealedArrival> revealed;
    std::vector<int> active;  // ids, arrival order
    std::deque<Leg> plan;
    std::optional<double> review;
    double now = 0.0;

    PolarPoint vehicle = policy.initial_position();
    if (!cone_contains(vehicle, theta)) throw PolicyFault("initial position outside the environment", 0.0);
    result.start = vehicle;

    auto vehicle_xy = [&] { return to_cartesian(vehicle); };
    auto trace = [&](TraceEvent e, int id) { result.trace.push_back({now, e, id, vehicle}); };

    auto cut_motion = [&] {
        while (!result.motion.empty() && result.motion.back().t1 > now) {
            auto& last = result.motion.back();
            if (last.t0 >= now) {
                result.motion.pop_back();
                continue;
            }
            last.end_pose = last.polar(now);
            last.t1 = now;
            break;
        }
    };

    auto observation = [&] {
        Observation obs;
        obs.now = now;
        obs.revealed = revealed;
        obs.vehicle = vehicle;
        obs.params = &params;
        obs.active.reserve(active.size());
        for (int id : active) {
            const auto& rec = result.per_intruder[static_cast<std::size_t>(id)];
            obs.active.push_back({id, rec.arrival, {rec.arrival.path().radius_at(now, params.v), rec.arrival.angle}});
        }
        return obs;
    };

    auto apply = [&](const MotionDirective& d) {
        if (d.review_at && *d.review_at < now - kAngleTol) throw PolicyFault("review time in the past", now);
        cut_motion();
        plan.clear();
        review = d.review_at;
        if (d.kind == MotionDirective::Kind::hold) {
            if (d.decision) trace(TraceEvent::decision, -1);
            return;
        }
        if (!(d.speed > 0.0 && d.speed <= 1.0)) throw PolicyFault("speed outside (0, 1]", now);
        if (d.kind == MotionDirective::Kind::go_to) {
            if (!cone_contains(d.waypoint, theta)) throw PolicyFault("waypoint outside the environment", now);
            auto push_linear = [&](const PolarPoint& from, const PolarPoint& to) {
                const Vec2 a = to_cartesian(from), b = to_cartesian(to);
                const double len = distance(a, b);
                if (len == 0.0) return;
                const double start = plan.empty() ? now : plan.back().t1;
                Leg leg;
                leg.kind = Leg::Kind::linear;
                leg.t0 = start;
                leg.t1 = start + len / d.speed;
                leg.p0 = a;
                leg.velocity = (b - a) * (d.speed / len);
                leg.end_pose = to;
                plan.push_back(leg);
                result.motion.push_back(leg);
            };
            if (chord_visible(vehicle, d.waypoint)) {
                push_linear(vehicle, d.waypoint);
            } else {
                push_linear(vehicle, {0.0, d.waypoint.angle});
                push_linear({0.0, d.waypoint.angle}, d.waypoint);
            }
        } else {
            if (!(d.arc_radius > 0.0 && d.arc_radius <= 1.0)) throw PolicyFault("arc radius outside (0, 1]", now);
            if (std::abs(vehicle.radius - d.arc_radius) > 1e-9) throw PolicyFault("vehicle is not on the arc", now);
            if (!is_full_disk(theta) && std::abs(d.target_angle) > theta + kAngleTol)
                throw PolicyFault("arc end outside the sector", now);
            const double delta = d.target_angle - vehicle.angle;
            if (delta != 0.0) {
                Leg leg;
                leg.kind = Leg::Kind::arc;
                leg.t0 = now;
                leg.t1 = now + d.arc_radius * std::abs(delta) / d.speed;
                leg.radius = d.arc_radius;
                leg.angle0 = vehicle.angle;
                leg.omega = std::copysign(d.speed / d.arc_radius, delta);
                leg.end_pose = {d.arc_radius, Leg::wrap_angle(d.target_angle)};
                plan.push_back(leg);
                result.motion.push_back(leg);
            }
        }
        if (d.decision) trace(TraceEvent::decision, -1);
    };

    int consults_here = 0;
    double last_consult_time = -kInf;
    auto consult = [&](const Triggers& why) {
        if (now == last_consult_time) {
            if (++consults_here > options.max_consults_per_instant)
                throw PolicyFault("policy keeps re-deciding without time advancing", now);
        } else {
            last_consult_time = now;
            consults_here = 0;
        }
        auto obs = observation();
        if (auto d = policy.decide(obs, why)) {
            apply(*d);
            return d->kind != MotionDirective::Kind::hold && plan.empty();
        }
        return false;
    };

    // Motion that completes instantly (zero-length go_to or arc) is reported
    // back to the policy at the same timestamp.
    auto consult_until_settled = [&](Triggers why) {
        while (consult(why)) {
            trace(TraceEvent::waypoint_reached, -1);
            why = Triggers{};
            why.motion_done = true;
        }
    };

    Triggers start;
    start.start = true;
    consult_until_settled(start);

    while (true) {
        const auto t_arrival = source.next_time();
        if (!t_arrival && active.empty()) break;

        double t_next = kInf;
        if (t_arrival) t_next = std::min(t_next, *t_arrival);
        if (!plan.empty()) t_next = std::min(t_next, plan.front().t1);
        if (review) t_next = std::min(t_next, *review);
        for (int id : active) t_next = std::min(t_next, result.per_intruder[static_cast<std::size_t>(id)].arrival.path().breach_time(params));
        const Leg* leg = plan.empty() ? nullptr : &plan.front();
        for (int id : active) {
            const auto path = result.per_intruder[static_cast<std::size_t>(id)].arrival.path();
            if (auto tc = detail::first_capture_on(leg, vehicle_xy(), path, params.v, reach, now, t_next))
                t_next = std::min(t_next, *tc);
        }
        if (options.horizon && t_next > *options.horizon) {
            now = *options.horizon;
            if (leg) vehicle = leg->polar(now);
            cut_motion();
            break;
        }
        if (!std::isfinite(t_next)) throw PolicyFault("no further events can occur", now);

        // advance
        now = std::max(now, t_next);
        if (!plan.empty()) vehicle = plan.front().polar(now);

        Triggers why;
        bool changed = true;
        while (changed) {
            changed = false;
            while (auto t = source.next_time()) {
                if (*t > now) break;
                const ArrivalEvent a = source.pop();
                if (std::abs(a.angle) > theta + kAngleTol || !(a.time >= 0.0))
                    throw ValidationError("source produced an invalid arrival at index " +
                                          std::to_string(result.per_intruder.size()));
                const int id = static_cast<int>(result.per_intruder.size());
                result.per_intruder.push_back({id, a, IntruderStatus::active, 0.0, false});
                revealed.push_back({id, a});
                active.push_back(id);
                trace(TraceEvent::arrival, id);
                why.arrival = true;
            }
            const Vec2 here = vehicle_xy();
            std::vector<int> still;
            std::vector<int> caught;
            for (int id : active) {
                auto& rec = result.per_intruder[static_cast<std::size_t>(id)];
                if (distance(here, rec.arrival.path().position_at(now, params.v)) <= params.r + kCaptureTol) {
                    rec.status = IntruderStatus::captured;
                    rec.resolved_at = now;
                    rec.captured_on_arrival = (rec.arrival.time == now);
                    ++result.captured;
                    trace(TraceEvent::capture, id);
                    caught.push_back(id);
                } else {
                    still.push_back(id);
                }
            }
            active.swap(still);
            if (!caught.empty()) {
                why.capture = true;
                for (int id : caught) source.on_capture(now, id);
                if (auto t = source.next_time(); t && *t <= now) changed = true;
            }
        }

        std::vector<int> still;
        for (int id : active) {
            auto& rec = result.per_intruder[static_cast<std::size_t>(id)];
            if (rec.arrival.path().breach_time(params) <= now) {
                rec.status = IntruderStatus::lost;
                rec.resolved_at = rec.arrival.path().breach_time(params);
                ++result.lost;
                trace(TraceEvent::breach, id);
                why.breach = true;
            } else {
                still.push_back(id);
            }
        }
        active.swap(still);

        while (!plan.empty() && plan.front().t1 <= now) {
            vehicle = plan.front().end_pose;
            plan.pop_front();
            if (plan.empty()) {
                trace(TraceEvent::waypoint_reached, -1);
                why.motion_done = true;
            }
        }
        if (review && *review <= now) {
            review.reset();
            why.review = true;
        }

        if (why.arrival || why.capture || why.breach || why.motion_done || why.review) consult_until_settled(why);
    }

    result.end_time = now;
    return result;
}

inline SimResult simulate(const InputInstance& instance, Policy& policy, const SimOptions& options = {}) {
    validate(instance);
    InstanceSource source(instance);
    return simulate(source, policy, instance.params, options);
}

}  // namespace conic_defense
