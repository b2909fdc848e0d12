#pragma once
// Reference implementations used as independent oracles by the tests.

#include "conic_defense.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace testref {

using namespace conic_defense;

struct XY {
    double x{}, y{};
};

inline XY xy(double radius, double angle) { return {radius * std::cos(angle), radius * std::sin(angle)}; }
inline double dist(XY a, XY b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// In-sector shortest path, written from scratch: straight when the angular
/// gap is at most pi, else through the apex.
inline double geodesic(double r1, double a1, double r2, double a2) {
    if (r1 == 0.0 || r2 == 0.0 || std::abs(a1 - a2) <= std::numbers::pi) return dist(xy(r1, a1), xy(r2, a2));
    return r1 + r2;
}

/// Minimum geodesic distance between the parts of two capture discs that lie in
/// the environment, by sampling each disc boundary and the sector edges inside it.
inline double sampled_traverse(const ProblemParams& p, int samples = 1500) {
    auto disc_points = [&](double ca) {
        std::vector<std::pair<double, double>> pts;  // polar
        const XY c = xy(p.rho, ca);
        for (int k = 0; k < samples; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / samples;
            const XY q{c.x + p.r * std::cos(phi), c.y + p.r * std::sin(phi)};
            const double rad = std::hypot(q.x, q.y), ang = std::atan2(q.y, q.x);
            if (rad <= 1.0 && std::abs(ang) <= p.theta) pts.emplace_back(rad, ang);
        }
        for (double edge : {p.theta, -p.theta})
            for (int k = 0; k <= samples; ++k) {
                const double rad = (p.rho - p.r) + 2.0 * p.r * k / samples;
                if (dist(xy(rad, edge), c) <= p.r) pts.emplace_back(rad, edge);
            }
        return pts;
    };
    const auto A = disc_points(p.theta), B = disc_points(-p.theta);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [r1, a1] : A)
        for (const auto& [r2, a2] : B) best = std::min(best, geodesic(r1, a1, r2, a2));
    return best;
}

/// Vehicle position at t from the legs recorded by the engine, evaluated directly.
inline XY vehicle_at(const SimResult& res, double t) {
    auto it = std::upper_bound(res.motion.begin(), res.motion.end(), t,
                               [](double x, const Leg& leg) { return x < leg.t0; });
    if (it == res.motion.begin()) return xy(res.start.radius, res.start.angle);
    const Leg& leg = *std::prev(it);
    if (t >= leg.t1) return xy(leg.end_pose.radius, leg.end_pose.angle);
    const double s = t - leg.t0;
    if (leg.kind == Leg::Kind::linear) return {leg.p0.x + leg.velocity.x * s, leg.p0.y + leg.velocity.y * s};
    return xy(leg.radius, leg.angle0 + leg.omega * s);
}

struct SteppedOutcome {
    bool captured{false};
    double time{};
};

/// Fixed-step replay of the recorded vehicle motion against every intruder.
inline std::vector<SteppedOutcome> dense_replay(const SimResult& res, const ProblemParams& p, double dt = 1e-4) {
    std::vector<SteppedOutcome> out(res.per_intruder.size());
    for (std::size_t i = 0; i < res.per_intruder.size(); ++i) {
        const auto& a = res.per_intruder[i].arrival;
        const double breach = a.time + (1.0 - p.rho) / p.v;
        out[i].time = breach;
        for (long k = 0;; ++k) {
            const double t = std::min(a.time + k * dt, breach);
            const XY me = xy(1.0 - p.v * (t - a.time), a.angle);
            if (dist(me, vehicle_at(res, t)) <= p.r + kCaptureTol) {
                out[i] = {true, t};
                break;
            }
            if (t >= breach) break;
        }
    }
    return out;
}

/// Exhaustive search over ordered subsets with greedy-earliest transitions and
/// no pruning. Co-located intruders at a capture instant are captured together.
inline int naive_opt(const InputInstance& inst, std::vector<double> extra_delays = {}) {
    const auto& p = inst.params;
    const std::size_t n = inst.arrivals.size();
    std::vector<char> done(n, 0);
    int best = 0;
    std::function<void(PolarPoint, double, int)> rec = [&](PolarPoint pose, double now, int got) {
        best = std::max(best, got);
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            const auto path = inst.arrivals[i].path();
            auto hit = intercept(pose, now, path, p);
            if (!hit) continue;
            std::vector<std::pair<double, PolarPoint>> options{{hit->time, hit->pose}};
            for (double d : extra_delays) {
                const double t = hit->time + d;
                if (t > path.breach_time(p)) continue;
                const PolarPoint target{path.radius_at(t, p.v), path.angle};
                if (geodesic(pose.radius, pose.angle, target.radius, target.angle) <= t - now)
                    options.emplace_back(t, target);
            }
            for (const auto& [t, at] : options) {
                std::vector<std::size_t> taken;
                for (std::size_t j = 0; j < n; ++j) {
                    if (done[j]) continue;
                    const auto pj = inst.arrivals[j].path();
                    if (pj.arrival_time > t || t > pj.breach_time(p)) continue;
                    const XY ij = xy(pj.radius_at(t, p.v), pj.angle);
                    if (j == i || dist(ij, xy(at.radius, at.angle)) <= p.r + kCaptureTol) taken.push_back(j);
                }
                for (auto j : taken) done[j] = 1;
                rec(at, t, got + static_cast<int>(taken.size()));
                for (auto j : taken) done[j] = 0;
            }
        }
    };
    rec({0.0, 0.0}, 0.0, 0);
    return best;
}

/// A handful of valid parameter points spread over the space.
inline std::vector<ProblemParams> sample_params(std::size_t count, std::uint64_t seed, double theta_max = std::numbers::pi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ProblemParams> out;
    while (out.size() < count) {
        ProblemParams p{0.05 + u(rng) * (theta_max - 0.05), 0.2 + 0.7 * u(rng), 0.02 + 0.9 * u(rng), 0.0};
        p.r = (0.05 + 0.9 * u(rng)) * p.rho;
        if (params_valid(p)) out.push_back(p);
    }
    return out;
}

}  // namespace testref
