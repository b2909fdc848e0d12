#pragma once
/**
 * @file geometry.hpp
 * @brief Conical-sector geometry: coordinates, geodesics through the apex,
 *        guard poses, minimum traverse times and interception times.
 *
 * The environment is the closed unit sector {(y, a) : 0 <= y <= 1, |a| <= theta}.
 * The apex is part of it. For theta = pi the sector is a disk slit along the
 * ray a = +-pi; a geodesic never crosses that ray.
 *
 * Units: environment radius 1, vehicle speed 1, so lengths and times share
 * one unit.
 */

#include "conic_defense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace conic_defense {

inline constexpr double kPi = std::numbers::pi;

/// Absolute tolerance for angle comparisons and event-time refinement.
inline constexpr double kAngleTol = 1e-12;

/// Slack on the capture radius. A capture is reported when the separation is
/// at most r + kCaptureTol; root solvers aim at r + kCaptureTol / 2.
inline constexpr double kCaptureTol = 1e-9;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }
    constexpr bool operator==(const Vec2&) const = default;

    [[nodiscard]] constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    [[nodiscard]] double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// The tuple (theta, rho, v, r). Environment radius and vehicle speed are 1.
struct ProblemParams {
    double theta{};  ///< half-angle of the cone, radians
    double rho{};    ///< perimeter radius
    double v{};      ///< intruder speed as a fraction of vehicle speed
    double r{};      ///< capture radius

    bool operator==(const ProblemParams&) const = default;
};

/// Empty string when valid, otherwise a description of the first violation.
inline std::string params_violation(const ProblemParams& p) {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(p.theta) || !finite(p.rho) || !finite(p.v) || !finite(p.r)) return "non-finite parameter";
    if (!(p.theta > 0.0 && p.theta <= kPi + kAngleTol)) return "theta must lie in (0, pi]";
    if (!(p.rho > 0.0 && p.rho < 1.0)) return "rho must lie in (0, 1)";
    if (!(p.v > 0.0 && p.v < 1.0)) return "v must lie in (0, 1)";
    if (!(p.r > 0.0 && p.r < p.rho)) return "r must lie in (0, rho)";
    return {};
}

inline bool params_valid(const ProblemParams& p) { return params_violation(p).empty(); }

inline const ProblemParams& validate_params(const ProblemParams& p) {
    if (auto why = params_violation(p); !why.empty()) throw ValidationError("invalid params: " + why);
    return p;
}

/// True when theta is pi up to kAngleTol.
inline bool is_full_disk(double theta) { return std::abs(theta - kPi) <= kAngleTol; }

struct PolarPoint {
    double radius{0.0};
    double angle{0.0};

    bool operator==(const PolarPoint&) const = default;
};

inline Vec2 to_cartesian(const PolarPoint& p) {
    return {p.radius * std::cos(p.angle), p.radius * std::sin(p.angle)};
}

inline PolarPoint to_polar(const Vec2& c) {
    const double radius = c.norm();
    return {radius, radius == 0.0 ? 0.0 : std::atan2(c.y, c.x)};
}

/// Closed-sector membership with no tolerance on the radius.
inline bool cone_contains(const PolarPoint& p, double theta) {
    return p.radius >= 0.0 && p.radius <= 1.0 && std::abs(p.angle) <= theta + kAngleTol;
}

inline void require_in_environment(const PolarPoint& p, double theta, const char* what) {
    if (!cone_contains(p, theta)) {
        std::ostringstream os;
        os << what << " (" << p.radius << ", " << p.angle << ") is outside the environment";
        throw DomainError(os.str());
    }
}

/// Whether the straight chord p-q stays inside the closed sector. The chord
/// sweeps the angular interval between the two points; it leaves the sector
/// exactly when that interval is wider than pi (it would wrap through the
/// excluded wedge, or across the slit when theta = pi).
inline bool chord_visible(const PolarPoint& p, const PolarPoint& q) {
    if (p.radius == 0.0 || q.radius == 0.0) return true;
    return std::abs(p.angle - q.angle) <= kPi + kAngleTol;
}

/// Shortest in-sector path length between two environment points.
inline double cone_distance(const PolarPoint& p, const PolarPoint& q, double theta) {
    require_in_environment(p, theta, "point");
    require_in_environment(q, theta, "point");
    if (chord_visible(p, q)) return distance(to_cartesian(p), to_cartesian(q));
    return p.radius + q.radius;
}

/// Point at arc length `arc` along the geodesic from `from` to `to`, clamped at `to`.
inline PolarPoint geodesic_point(const PolarPoint& from, const PolarPoint& to, double arc) {
    if (arc <= 0.0) return from;
    if (chord_visible(from, to)) {
        const Vec2 a = to_cartesian(from);
        const Vec2 b = to_cartesian(to);
        const double len = distance(a, b);
        if (arc >= len) return to;
        const Vec2 p = a + (b - a) * (arc / len);
        // keep the start angle when the chord is radial to avoid atan2 noise
        PolarPoint out = to_polar(p);
        if (from.radius > 0.0 && std::abs(from.angle - to.angle) <= kAngleTol) out.angle = from.angle;
        return out;
    }
    if (arc <= from.radius) return {from.radius - arc, from.angle};
    return {std::min(arc - from.radius, to.radius), to.angle};
}

/// Stationary guard: the pose on the bisector whose capture disc of
/// smallest radius covers the whole perimeter arc.
struct GuardPose {
    PolarPoint position;
    double min_radius{};
};

inline GuardPose min_guard_radius(double rho, double theta) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0, 1)");
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    if (theta >= kPi / 4.0) throw DomainError("guard radius requires theta < pi/4 (otherwise rho*tan(theta) >= rho)");
    return {{rho / std::cos(theta), 0.0}, rho * std::tan(theta)};
}

/// Fastest move from a pose covering (rho, theta) to one covering (rho, -theta).
struct TraverseResult {
    double time{};
    PolarPoint from;  ///< pose whose disc touches (rho, theta)
    PolarPoint to;    ///< mirrored pose touching (rho, -theta)
    bool degenerate{false};  ///< rho*sin(theta) <= r: one pose covers both ends
};

inline TraverseResult min_traverse_time(const ProblemParams& params) {
    validate_params(params);
    const auto [theta, rho, v, r] = params;
    if (theta < kPi / 2.0) {
        const double half_gap = rho * std::sin(theta) - r;
        if (half_gap <= 0.0) {
            const PolarPoint mid{rho * std::cos(theta), 0.0};
            return {0.0, mid, mid, true};
        }
        const double alpha = std::atan2(half_gap, rho * std::cos(theta));
        const double x = half_gap / std::sin(alpha);
        return {2.0 * half_gap, {x, alpha}, {x, -alpha}, false};
    }
    return {2.0 * (rho - r), {rho - r, theta}, {rho - r, -theta}, false};
}

/// Radial intruder state: arrival time and angle; radius 1 at arrival.
struct IntruderPath {
    double arrival_time{};
    double angle{};

    [[nodiscard]] double radius_at(double t, double v) const { return 1.0 - v * (t - arrival_time); }
    [[nodiscard]] double breach_time(const ProblemParams& p) const { return arrival_time + (1.0 - p.rho) / p.v; }
    [[nodiscard]] Vec2 position_at(double t, double v) const {
        return to_cartesian({radius_at(t, v), angle});
    }
    [[nodiscard]] Vec2 velocity(double v) const { return {-v * std::cos(angle), -v * std::sin(angle)}; }
};

struct Interception {
    double time{};
    PolarPoint pose;  ///< where the vehicle stands at `time`
};

namespace detail {

/// Earliest tau in [0, span] with |e + u*tau| <= radius (convex quadratic).
inline std::optional<double> first_inside(const Vec2& e, const Vec2& u, double radius, double span) {
    const double c = e.dot(e) - radius * radius;
    if (c <= 0.0) return 0.0;
    const double a = u.dot(u);
    if (a == 0.0) return std::nullopt;
    const double b = 2.0 * e.dot(u);
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    // numerically stable smaller root
    const double q = -0.5 * (b + std::copysign(sq, b));
    double lo = q / a;
    double hi = (q != 0.0) ? c / q : lo;
    if (lo > hi) std::swap(lo, hi);
    if (hi < 0.0 || lo > span) return std::nullopt;
    return std::max(lo, 0.0);
}

/// Earliest tau >= 0 with |d + w*tau| <= tau + c where |w| < 1 and c > 0.
/// The left side minus the right is strictly decreasing, so the root is unique.
inline double first_reachable(const Vec2& d, const Vec2& w, double c) {
    const double f0 = d.dot(d) - c * c;
    if (f0 <= 0.0) return 0.0;
    const double a = w.dot(w) - 1.0;  // < 0
    const double b = 2.0 * (d.dot(w) - c);
    const double disc = b * b - 4.0 * a * f0;
    const double sq = std::sqrt(std::max(disc, 0.0));
    const double r1 = (-b + sq) / (2.0 * a);
    const double r2 = (-b - sq) / (2.0 * a);
    return std::max(r1, r2);
}

}  // namespace detail

/// Earliest capture of a radially moving intruder by a unit-speed vehicle that
/// leaves `vehicle` at time `t0` along the in-sector geodesic toward the
/// intruder's position at the capture instant. Empty when the intruder reaches
/// the perimeter first.
inline std::optional<Interception> intercept(const PolarPoint& vehicle, double t0, const IntruderPath& intruder,
                                             const ProblemParams& params) {
    const double reach = params.r + 0.5 * kCaptureTol;
    const double lo = std::max(t0, intruder.arrival_time);
    const double hi = intruder.breach_time(params);
    if (lo > hi) return std::nullopt;

    const PolarPoint start_dir{1.0, intruder.angle};
    const Vec2 v0 = to_cartesian(vehicle);
    const Vec2 w = intruder.velocity(params.v);

    auto pose_at = [&](double t) {
        const PolarPoint target{intruder.radius_at(t, params.v), intruder.angle};
        return geodesic_point(vehicle, target, t - t0);
    };

    if (chord_visible(vehicle, start_dir)) {
        const Vec2 d = intruder.position_at(lo, params.v) - v0;
        const double tau = detail::first_reachable(d, w, (lo - t0) + reach);
        const double t = lo + tau;
        if (t > hi) return std::nullopt;
        return Interception{t, pose_at(t)};
    }

    // Apex detour. Leg A: straight toward the apex.
    const double apex_time = t0 + vehicle.radius;
    if (lo <= apex_time) {
        const double span = std::min(apex_time, hi) - lo;
        const Vec2 dir_in = v0 * (-1.0 / vehicle.radius);
        const Vec2 p_lo = v0 + dir_in * (lo - t0);
        const Vec2 e = p_lo - intruder.position_at(lo, params.v);
        if (auto tau = detail::first_inside(e, dir_in - w, reach, span)) {
            const double t = lo + *tau;
            return Interception{t, PolarPoint{vehicle.radius - (t - t0), vehicle.angle}};
        }
    }
    // Leg B: out along the intruder's ray, gap = |I(t)| - (t - apex_time).
    const double lo_b = std::max(lo, apex_time);
    const double t_b =
        std::max(lo_b, (1.0 - reach + params.v * intruder.arrival_time + apex_time) / (1.0 + params.v));
    if (t_b > hi) return std::nullopt;
    return Interception{t_b, pose_at(t_b)};
}

inline std::optional<double> intercept_time(const PolarPoint& vehicle, double t0, const IntruderPath& intruder,
                                            const ProblemParams& params) {
    if (auto hit = intercept(vehicle, t0, intruder, params)) return hit->time;
    return std::nullopt;
}

/// Separation between the intruder and the vehicle when the vehicle has had
/// `t - t0` time to travel along the geodesic toward the intruder's position
/// at t. Used by the bisection solver.
inline double pursuit_gap(const PolarPoint& vehicle, double t0, const IntruderPath& intruder,
                          const ProblemParams& params, double t) {
    const PolarPoint target{intruder.radius_at(t, params.v), intruder.angle};
    const PolarPoint pose = geodesic_point(vehicle, target, t - t0);
    return distance(to_cartesian(pose), to_cartesian(target));
}

/// Scan-and-bisect variant of intercept_time. Slower; used as the fallback
/// and as an independent cross-check of the closed-form roots.
inline std::optional<double> intercept_time_bisection(const PolarPoint& vehicle, double t0,
                                                      const IntruderPath& intruder, const ProblemParams& params,
                                                      double scan_step = 1e-3) {
    const double reach = params.r + 0.5 * kCaptureTol;
    const double lo = std::max(t0, intruder.arrival_time);
    const double hi = intruder.breach_time(params);
    if (lo > hi) return std::nullopt;
    auto inside = [&](double t) { return pursuit_gap(vehicle, t0, intruder, params, t) <= reach; };
    if (inside(lo)) return lo;
    double prev = lo;
    for (double t = lo + scan_step;; t += scan_step) {
        const double tc = std::min(t, hi);
        if (inside(tc)) {
            double a = prev, b = tc;
            while (b - a > kAngleTol) {
                const double m = 0.5 * (a + b);
                (inside(m) ? b : a) = m;
            }
            return b;
        }
        if (tc >= hi) return std::nullopt;
        prev = tc;
    }
}

}  // namespace conic_defense
