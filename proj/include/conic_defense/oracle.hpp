#pragma once
/**
 * @file oracle.hpp
 * @brief Offline optimum by branch and bound over capture orders.
 *
 * Model: the vehicle starts at a known pose (the apex at t = 0 by default) and
 * knows every arrival. A schedule is a sequence of (capture time, pose); each
 * leg leaves the previous capture pose at the previous capture time and runs
 * along the in-sector geodesic. Within an order every capture happens as early
 * as possible. When the vehicle can be in place before the target appears,
 * the capture pose is free inside a lens; the search then also tries the lens
 * point closest to each remaining intruder's breach point, which is what the
 * two-corner constructions need. Every intruder inside the capture disc at a
 * capture instant is captured with it.
 *
 * Identical arrivals (same time and angle) always share a fate and are
 * searched as one weighted group.
 */

#include "conic_defense/engine.hpp"
#include "conic_defense/errors.hpp"
#include "conic_defense/geometry.hpp"
#include "conic_defense/instances.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace conic_defense {

struct ScheduleEntry {
    int intruder_id{};
    double time{};
    PolarPoint pose;
};

struct OracleResult {
    int max_captured{0};
    std::vector<ScheduleEntry> schedule;  ///< one entry per captured intruder, in capture order
    std::uint64_t nodes_explored{0};
};

struct OracleOptions {
    std::size_t limit{10};
    PolarPoint start{0.0, 0.0};
    double start_time{0.0};
    bool lens_hints{true};
};

namespace detail {

struct Group {
    IntruderPath path;
    std::vector<int> members;
    [[nodiscard]] int weight() const { return static_cast<int>(members.size()); }
};

/// Closest point to `hint` within both disc(s_center, s_radius) and disc(i_center, r).
inline std::optional<Vec2> lens_point(const Vec2& s_center, double s_radius, const Vec2& i_center, double r,
                                      const Vec2& hint) {
    constexpr double slack = 1e-12;
    auto in_s = [&](const Vec2& p) { return distance(p, s_center) <= s_radius * (1.0 + slack) + slack; };
    auto in_i = [&](const Vec2& p) { return distance(p, i_center) <= r * (1.0 + slack) + slack; };
    if (in_s(hint) && in_i(hint)) return hint;
    auto toward = [](const Vec2& c, double rad, const Vec2& h) {
        const Vec2 d = h - c;
        const double n = d.norm();
        return n == 0.0 ? c : c + d * (rad / n);
    };
    const Vec2 c1 = in_i(hint) ? hint : toward(i_center, r, hint);
    if (in_s(c1)) return c1;
    const Vec2 c2 = in_s(hint) ? hint : toward(s_center, s_radius, hint);
    if (in_i(c2)) return c2;
    // the optimum lies on both boundaries
    const Vec2 d = i_center - s_center;
    const double dist = d.norm();
    if (dist == 0.0 || dist > s_radius + r || dist < std::abs(s_radius - r)) return std::nullopt;
    const double a = (s_radius * s_radius - r * r + dist * dist) / (2.0 * dist);
    const double h = std::sqrt(std::max(0.0, s_radius * s_radius - a * a));
    const Vec2 mid = s_center + d * (a / dist);
    const Vec2 perp{-d.y / dist, d.x / dist};
    const Vec2 p1 = mid + perp * h, p2 = mid - perp * h;
    return distance(p1, hint) <= distance(p2, hint) ? p1 : p2;
}

class BranchAndBound {
public:
    BranchAndBound(const ProblemParams& params, std::vector<Group> groups, const OracleOptions& options)
        : params_(params), groups_(std::move(groups)), options_(options) {}

    OracleResult run() {
        std::vector<char> taken(groups_.size(), 0);
        std::vector<Step> path;
        search(options_.start, options_.start_time, taken, 0, path);
        OracleResult out;
        out.max_captured = best_;
        out.nodes_explored = nodes_;
        for (const auto& step : best_path_)
            for (int id : groups_[step.group].members) out.schedule.push_back({id, step.time, step.pose});
        return out;
    }

private:
    struct Step {
        std::size_t group;
        double time;
        PolarPoint pose;
    };

    struct Move {
        std::size_t group;
        double time;
        PolarPoint pose;
    };

    [[nodiscard]] bool alive_at(const Group& g, double t) const {
        return g.path.arrival_time <= t && t <= g.path.breach_time(params_);
    }

    void candidate_moves(const PolarPoint& pose, double now, const std::vector<char>& taken, std::size_t g,
                         const Interception& hit, std::vector<Move>& out) const {
        out.push_back({g, hit.time, hit.pose});
        if (!options_.lens_hints) return;
        const Group& target = groups_[g];
        if (hit.time != std::max(now, target.path.arrival_time)) return;
        // capture at the first possible instant: the pose is free inside the lens
        const Vec2 s_center = to_cartesian(pose);
        const double s_radius = hit.time - now;
        const Vec2 i_center = target.path.position_at(hit.time, params_.v);
        std::vector<double> seen_angles;
        for (std::size_t h = 0; h < groups_.size(); ++h) {
            if (h == g || taken[h]) continue;
            const double ang = groups_[h].path.angle;
            if (std::find(seen_angles.begin(), seen_angles.end(), ang) != seen_angles.end()) continue;
            seen_angles.push_back(ang);
            const Vec2 hint = to_cartesian({params_.rho, ang});
            auto p = lens_point(s_center, s_radius, i_center, params_.r, hint);
            if (!p) continue;
            PolarPoint pp = to_polar(*p);
            if (pp.radius > 1.0 || std::abs(pp.angle) > params_.theta + kAngleTol) continue;
            if (cone_distance(pose, pp, params_.theta) > s_radius + 1e-12) continue;
            if (distance(*p, i_center) > params_.r + 0.5 * kCaptureTol) continue;
            out.push_back({g, hit.time, pp});
        }
    }

    void search(const PolarPoint& pose, double now, std::vector<char>& taken, int captured, std::vector<Step>& path) {
        ++nodes_;
        if (captured > best_) {
            best_ = captured;
            best_path_ = path;
        }
        std::vector<std::pair<std::size_t, Interception>> hits;
        int reachable = 0;
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            if (taken[g]) continue;
            if (auto hit = intercept(pose, now, groups_[g].path, params_)) {
                hits.emplace_back(g, *hit);
                reachable += groups_[g].weight();
            }
        }
        if (captured + reachable <= best_) return;

        std::vector<Move> moves;
        for (const auto& [g, hit] : hits) candidate_moves(pose, now, taken, g, hit, moves);

        for (const auto& m : moves) {
            const Vec2 at = to_cartesian(m.pose);
            std::vector<std::size_t> newly{m.group};
            for (std::size_t h = 0; h < groups_.size(); ++h) {
                if (h == m.group || taken[h] || !alive_at(groups_[h], m.time)) continue;
                if (distance(at, groups_[h].path.position_at(m.time, params_.v)) <= params_.r + kCaptureTol)
                    newly.push_back(h);
            }
            int gained = 0;
            for (auto h : newly) {
                taken[h] = 1;
                gained += groups_[h].weight();
            }
            for (auto h : newly) path.push_back({h, m.time, m.pose});
            search(m.pose, m.time, taken, captured + gained, path);
            for (std::size_t k = 0; k < newly.size(); ++k) path.pop_back();
            for (auto h : newly) taken[h] = 0;
            if (best_ == total_weight()) return;
        }
    }

    [[nodiscard]] int total_weight() const {
        int w = 0;
        for (const auto& g : groups_) w += g.weight();
        return w;
    }

    ProblemParams params_;
    std::vector<Group> groups_;
    OracleOptions options_;
    int best_{0};
    std::vector<Step> best_path_;
    std::uint64_t nodes_{0};
};

inline std::vector<Group> group_arrivals(const InputInstance& instance) {
    std::vector<Group> groups;
    for (std::size_t i = 0; i < instance.arrivals.size(); ++i) {
        const auto& a = instance.arrivals[i];
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            return g.path.arrival_time == a.time && g.path.angle == a.angle;
        });
        if (it == groups.end()) {
            groups.push_back({a.path(), {static_cast<int>(i)}});
        } else {
            it->members.push_back(static_cast<int>(i));
        }
    }
    return groups;
}

}  // namespace detail

/// Exact maximum number of captures under the waypoint-interception model.
/// The limit counts distinct (time, angle) arrivals; identical ones are searched together.
inline OracleResult offline_opt(const InputInstance& instance, const OracleOptions& options = {}) {
    validate(instance);
    auto groups = detail::group_arrivals(instance);
    if (groups.size() > options.limit)
        throw OracleLimitError("instance has " + std::to_string(groups.size()) +
                               " distinct arrivals, above the oracle limit of " + std::to_string(options.limit) +
                               "; use upper_bound() instead");
    detail::BranchAndBound bnb(instance.params, std::move(groups), options);
    return bnb.run();
}

/// Trivial bound OPT <= N.
inline int upper_bound(const InputInstance& instance) { return static_cast<int>(instance.arrivals.size()); }

/// Replays an oracle schedule: leaves each capture pose at its capture time for the next.
class ScriptedPolicy final : public Policy {
public:
    ScriptedPolicy(PolarPoint start, std::vector<ScheduleEntry> schedule, double start_time = 0.0)
        : start_(start), start_time_(start_time) {
        for (const auto& e : schedule)
            if (legs_.empty() || e.time != legs_.back().time || !(e.pose == legs_.back().pose)) legs_.push_back(e);
    }

    [[nodiscard]] std::string name() const override { return "scripted"; }
    [[nodiscard]] PolarPoint initial_position() const override { return start_; }

    std::optional<MotionDirective> decide(const Observation& obs, const Triggers& why) override {
        if (why.start) {
            if (start_time_ > obs.now) return MotionDirective::hold(start_time_);
            return next_leg();
        }
        if (why.review) return next_leg();
        return std::nullopt;
    }

private:
    MotionDirective next_leg() {
        if (next_ >= legs_.size()) return MotionDirective::hold();
        const auto& e = legs_[next_++];
        auto d = MotionDirective::go_to(e.pose);
        d.review_at = e.time;
        return d;
    }

    PolarPoint start_;
    double start_time_;
    std::vector<ScheduleEntry> legs_;
    std::size_t next_{0};
};

struct RatioEstimate {
    double ratio{1.0};
    int opt{0};
    int alg{0};
};

/// opt / alg with opt from the oracle. alg = 0 < opt gives +inf; opt = 0 gives 1.
inline RatioEstimate ratio_from_counts(int opt, int alg) {
    RatioEstimate r{1.0, opt, alg};
    if (opt == 0) return r;
    r.ratio = alg == 0 ? kInf : static_cast<double>(opt) / alg;
    return r;
}

inline RatioEstimate competitive_ratio_estimate(const InputInstance& instance, Policy& policy,
                                                const OracleOptions& options = {}) {
    const int opt = offline_opt(instance, options).max_captured;
    const int alg = simulate(instance, policy).captured;
    return ratio_from_counts(opt, alg);
}

}  // namespace conic_defense
