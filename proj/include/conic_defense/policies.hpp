#pragma once
/**
 * @file policies.hpp
 * @brief Online defense policies and their admissible-parameter calculators.
 *
 *  - StationaryGuard: park at the bisector guard pose and wait.
 *  - AngularSweep:    sweep the arc of radius x_S between the two sector edges.
 *  - ConCaC:          per epoch, compare intruder counts on the two halves and
 *                     sweep the busier half out and back.
 *  - Snp:             split the sector into wedges coverable from a resting
 *                     point near the perimeter and hop between resting points.
 *
 * Every policy moves at unit speed or holds.
 */

#include "conic_defense/engine.hpp"
#include "conic_defense/errors.hpp"
#include "conic_defense/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace conic_defense {

struct Interval {
    double lo{};
    double hi{};

    [[nodiscard]] bool empty() const { return lo > hi + kAngleTol; }
    [[nodiscard]] bool contains(double x) const { return x >= lo - kAngleTol && x <= hi + kAngleTol; }
    [[nodiscard]] double midpoint() const { return 0.5 * (lo + hi); }
};

/// Whether constructors enforce the regime where the policy carries its guarantee.
/// `unchecked` is for exploring behavior outside that regime.
enum class Admission { checked, unchecked };

// ---------------------------------------------------------------------------
// Angular Sweep

/// 2 on the full disk (one circle per period), 4 otherwise (out and back).
inline double sweep_factor(double theta) { return is_full_disk(theta) ? 2.0 : 4.0; }

inline double sweep_v_bound(const ProblemParams& p) {
    const double a = sweep_factor(p.theta);
    return std::min(2.0 * p.r / ((p.rho + p.r) * a * p.theta), (1.0 - p.rho) / ((1.0 - p.r) * a * p.theta));
}

/// Unchecked closed forms; lo is +inf when a*theta*v >= 1.
inline Interval sweep_interval_raw(const ProblemParams& p) {
    const double denom = 1.0 - sweep_factor(p.theta) * p.theta * p.v;
    return {denom > 0.0 ? (p.rho - p.r) / denom : kInf, std::min(1.0 - p.r, p.rho + p.r)};
}

inline Interval sweep_interval(const ProblemParams& p) {
    validate_params(p);
    const Interval iv = sweep_interval_raw(p);
    if (iv.empty()) {
        std::ostringstream os;
        os << "angular sweep needs v <= " << sweep_v_bound(p) << " (got v = " << p.v << ")";
        throw RegimeError(os.str(), sweep_v_bound(p));
    }
    return iv;
}

// ---------------------------------------------------------------------------
// ConCaC

inline double concac_v_bound(const ProblemParams& p) {
    return std::min(p.r / (p.theta * (p.rho + p.r)), (1.0 - p.rho) / (p.theta * (2.0 - 3.0 * p.r + p.rho)));
}

inline Interval concac_interval_raw(const ProblemParams& p) {
    const double denom = 1.0 - 2.0 * p.theta * p.v;
    return {denom > 0.0 ? (p.rho - p.r) / denom : kInf,
            std::min(p.rho + p.r, (1.0 - p.r) / (1.0 + p.v * p.theta))};
}

inline Interval concac_interval(const ProblemParams& p) {
    validate_params(p);
    const Interval iv = concac_interval_raw(p);
    if (iv.empty()) {
        std::ostringstream os;
        os << "ConCaC needs v <= " << concac_v_bound(p) << " (got v = " << p.v << ")";
        throw RegimeError(os.str(), concac_v_bound(p));
    }
    return iv;
}

// ---------------------------------------------------------------------------
// Stay Near Perimeter partition

struct SectorPartition {
    double theta_s{};  ///< half-angle of one wedge, atan(r / rho)
    int n_s{};         ///< number of wedges, ceil(theta / theta_s)
    double resting_radius{};
    std::vector<PolarPoint> resting_points;  ///< index 0 is the leftmost wedge (most negative angle)
    double D{};        ///< travel time between the two farthest resting points
    double ratio_bound{};

    /// 0-based wedge index of an angle in [-theta, theta].
    [[nodiscard]] int sector_of(double angle) const {
        const double pos = (angle + n_s * theta_s) / (2.0 * theta_s);
        const int k = static_cast<int>(std::floor(pos));
        return std::clamp(k, 0, n_s - 1);
    }
};

inline SectorPartition snp_partition(const ProblemParams& p) {
    validate_params(p);
    SectorPartition s;
    s.theta_s = std::atan(p.r / p.rho);
    s.n_s = std::max(1, static_cast<int>(std::ceil(p.theta / s.theta_s - kAngleTol)));
    s.resting_radius = p.rho / std::cos(s.theta_s);
    for (int l = 1; l <= s.n_s; ++l)
        s.resting_points.push_back({s.resting_radius, (l - (s.n_s + 1) / 2.0) * 2.0 * s.theta_s});
    const double spread = (s.n_s - 1) * s.theta_s;
    s.D = (spread < kPi / 2.0) ? 2.0 * s.resting_radius * std::sin(spread) : 2.0 * s.resting_radius;
    s.ratio_bound = (3.0 * s.n_s - 1.0) / 2.0;
    return s;
}

/// 3D <= (1 - rho) / v: every intruder is alive for at least three intervals.
inline bool snp_timing_ok(const ProblemParams& p, const SectorPartition& s) {
    return 3.0 * s.D <= (1.0 - p.rho) / p.v + kAngleTol;
}

/// rho / cos(theta_s) <= 2D: a resting point is reachable from the apex in the startup window.
inline bool snp_startup_ok_body(const ProblemParams& p, const SectorPartition& s) {
    return p.rho / std::cos(s.theta_s) <= 2.0 * s.D + kAngleTol;
}

/// Variant as printed in the competitiveness statement: 2 / (rho cos(theta_s)) <= 2D.
inline bool snp_startup_ok_theorem(const ProblemParams& p, const SectorPartition& s) {
    return 2.0 / (p.rho * std::cos(s.theta_s)) <= 2.0 * s.D + kAngleTol;
}

enum class SnpFeasibilityForm { body, theorem };

inline bool snp_feasible(const ProblemParams& p, SnpFeasibilityForm form = SnpFeasibilityForm::body) {
    const auto s = snp_partition(p);
    if (s.n_s == 1) return true;  // D = 0, one resting point covers the whole perimeter
    const bool startup = form == SnpFeasibilityForm::body ? snp_startup_ok_body(p, s) : snp_startup_ok_theorem(p, s);
    return snp_timing_ok(p, s) && startup;
}

// ---------------------------------------------------------------------------
// Policies

class StationaryGuard final : public Policy {
public:
    /// Parks at the bisector guard pose. Needs theta < pi/4.
    explicit StationaryGuard(const ProblemParams& params)
        : pose_(guard_pose(params)) {}
    StationaryGuard(const ProblemParams& params, PolarPoint pose) : pose_(pose) {
        if (!cone_contains(pose, params.theta)) throw ConfigError("guard pose outside the environment");
    }

    [[nodiscard]] std::string name() const override { return "stationary"; }
    [[nodiscard]] PolarPoint initial_position() const override { return pose_; }
    std::optional<MotionDirective> decide(const Observation&, const Triggers& why) override {
        if (why.start) return MotionDirective::hold();
        return std::nullopt;
    }

private:
    static PolarPoint guard_pose(const ProblemParams& params) {
        validate_params(params);
        if (params.theta >= kPi / 4.0) throw ConfigError("stationary guard needs theta < pi/4");
        const auto g = min_guard_radius(params.rho, params.theta);
        if (g.position.radius > 1.0) throw ConfigError("guard pose lies outside the unit sector");
        return g.position;
    }

    PolarPoint pose_;
};

class AngularSweep final : public Policy {
public:
    explicit AngularSweep(const ProblemParams& params, std::optional<double> x_s = std::nullopt,
                          Admission admission = Admission::checked)
        : params_(validate_params(params)) {
        if (admission == Admission::checked) {
            const Interval iv = sweep_interval(params);
            x_s_ = x_s.value_or(iv.midpoint());
            if (!iv.contains(x_s_)) {
                std::ostringstream os;
                os << "x_S = " << x_s_ << " outside [" << iv.lo << ", " << iv.hi << "]";
                throw ConfigError(os.str());
            }
        } else {
            x_s_ = x_s.value_or(sweep_interval_raw(params).hi);
        }
        if (!(x_s_ > 0.0 && x_s_ <= 1.0)) throw ConfigError("x_S must lie in (0, 1]");
    }

    [[nodiscard]] double x_s() const { return x_s_; }
    [[nodiscard]] double period() const { return sweep_factor(params_.theta) * params_.theta * x_s_; }

    [[nodiscard]] std::string name() const override { return "sweep"; }
    [[nodiscard]] PolarPoint initial_position() const override { return {x_s_, 0.0}; }

    std::optional<MotionDirective> decide(const Observation& obs, const Triggers& why) override {
        const double theta = params_.theta;
        if (why.start) {
            return is_full_disk(theta) ? MotionDirective::arc(x_s_, 2.0 * kPi)
                                       : MotionDirective::arc(x_s_, theta);
        }
        if (!why.motion_done) return std::nullopt;
        if (is_full_disk(theta)) return MotionDirective::arc(x_s_, obs.vehicle.angle + 2.0 * kPi, false);
        const double next = obs.vehicle.angle > 0.0 ? -theta : theta;
        return MotionDirective::arc(x_s_, next, false);
    }

private:
    ProblemParams params_;
    double x_s_{};
};

class ConCaC final : public Policy {
public:
    explicit ConCaC(const ProblemParams& params, std::optional<double> x_c = std::nullopt,
                    Admission admission = Admission::checked)
        : params_(validate_params(params)) {
        if (admission == Admission::checked) {
            const Interval iv = concac_interval(params);
            x_c_ = x_c.value_or(iv.midpoint());
            if (!iv.contains(x_c_)) {
                std::ostringstream os;
                os << "x_C = " << x_c_ << " outside [" << iv.lo << ", " << iv.hi << "]";
                throw ConfigError(os.str());
            }
        } else {
            x_c_ = x_c.value_or(concac_interval_raw(params).hi);
        }
        if (!(x_c_ > 0.0 && x_c_ <= 1.0)) throw ConfigError("x_C must lie in (0, 1]");
    }

    [[nodiscard]] double x_c() const { return x_c_; }
    [[nodiscard]] double epoch_duration() const { return 2.0 * params_.theta * x_c_; }
    [[nodiscard]] double initial_wait() const {
        return 1.0 - std::min(1.0, x_c_ + params_.r + 2.0 * params_.theta * params_.v * x_c_);
    }
    [[nodiscard]] int epochs_started() const { return epoch_; }

    /// Intruder counts of the right and left sets at an epoch start.
    struct SetCounts {
        int left{0};
        int right{0};
    };

    [[nodiscard]] SetCounts count_sets(const std::vector<ActiveIntruder>& active) const {
        const auto [theta, rho, v, r] = params_;
        SetCounts c;
        for (const auto& a : active) {
            const double y = a.position.radius;
            const double beta = a.position.angle;
            if (beta >= 0.0) {
                const double upper = std::min(1.0, x_c_ + r + (2.0 * theta - beta) * v * x_c_);
                if (rho + beta * x_c_ * v < y && y <= upper) ++c.right;
            } else {
                const double upper = std::min(1.0, x_c_ + r + (2.0 * theta + beta) * v * x_c_);
                if (rho - beta * x_c_ * v < y && y <= upper) ++c.left;
            }
        }
        return c;
    }

    [[nodiscard]] std::string name() const override { return "concac"; }
    [[nodiscard]] PolarPoint initial_position() const override { return {x_c_, 0.0}; }

    std::optional<MotionDirective> decide(const Observation& obs, const Triggers& why) override {
        switch (phase_) {
            case Phase::before_first:
                if (why.start) return MotionDirective::hold(std::nullopt, false);
                if (!why.arrival) return std::nullopt;
                phase_ = Phase::waiting;
                if (initial_wait() > 0.0) return MotionDirective::hold(obs.now + initial_wait(), false);
                return start_epoch(obs);
            case Phase::waiting:
                if (why.review) return start_epoch(obs);
                return std::nullopt;
            case Phase::outbound:
                if (!why.motion_done) return std::nullopt;
                phase_ = Phase::inbound;
                return MotionDirective::arc(x_c_, 0.0, false);
            case Phase::inbound:
                if (!why.motion_done) return std::nullopt;
                return start_epoch(obs);
        }
        return std::nullopt;
    }

private:
    enum class Phase { before_first, waiting, outbound, inbound };

    MotionDirective start_epoch(const Observation& obs) {
        ++epoch_;
        const SetCounts c = count_sets(obs.active);
        phase_ = Phase::outbound;
        const double side = (c.left < c.right) ? 1.0 : -1.0;
        return MotionDirective::arc(x_c_, side * params_.theta, true);
    }

    ProblemParams params_;
    double x_c_{};
    Phase phase_{Phase::before_first};
    int epoch_{0};
};

class Snp final : public Policy {
public:
    explicit Snp(const ProblemParams& params, Admission admission = Admission::checked)
        : params_(validate_params(params)), partition_(snp_partition(params)) {
        if (partition_.resting_radius > 1.0) throw RegimeError("resting points lie outside the unit sector");
        if (admission == Admission::checked && partition_.n_s > 1) {
            if (!snp_timing_ok(params_, partition_))
                throw RegimeError("SNP needs 3D <= (1 - rho)/v", (1.0 - params_.rho) / (3.0 * partition_.D));
            if (!snp_startup_ok_body(params_, partition_))
                throw RegimeError("SNP needs rho/cos(theta_s) <= 2D", 2.0 * partition_.D);
        }
    }

    [[nodiscard]] const SectorPartition& partition() const { return partition_; }
    /// 0-based sector the vehicle is assigned to, -1 before startup.
    [[nodiscard]] int current_sector() const { return sector_; }
    [[nodiscard]] std::optional<double> first_arrival() const { return t0_; }

    [[nodiscard]] std::string name() const override { return "snp"; }
    [[nodiscard]] PolarPoint initial_position() const override {
        return partition_.n_s == 1 ? partition_.resting_points.front() : PolarPoint{0.0, 0.0};
    }

    std::optional<MotionDirective> decide(const Observation& obs, const Triggers& why) override {
        if (partition_.n_s == 1) {
            if (why.start) {
                sector_ = 0;
                return MotionDirective::hold();
            }
            return std::nullopt;
        }
        const double D = partition_.D;
        if (why.start) return MotionDirective::hold(std::nullopt, false);
        if (!t0_) {
            if (!why.arrival) return std::nullopt;
            t0_ = obs.now;
            return MotionDirective::hold(*t0_ + D, false);
        }
        if (!why.review) return std::nullopt;

        if (stage_ == 0) {
            // startup at D: go to the busiest wedge of interval 1
            const auto counts = interval_counts(obs, 1);
            sector_ = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
            stage_ = 1;
            auto d = MotionDirective::go_to(partition_.resting_points[static_cast<std::size_t>(sector_)]);
            d.review_at = *t0_ + 3.0 * D;
            return d;
        }
        if (stage_ == 1) {
            stage_ = 2;
            j_ = 1;
            return MotionDirective::hold(*t0_ + 4.0 * D);
        }

        // loop decision j at (j + 3) D
        const int n = partition_.n_s;
        const auto s1 = interval_counts(obs, j_ + 1);
        const auto s2 = interval_counts(obs, j_ + 2);
        const auto s3 = interval_counts(obs, j_ + 3);
        const auto i = static_cast<std::size_t>(sector_);
        std::vector<int> eta(static_cast<std::size_t>(n));
        for (std::size_t l = 0; l < eta.size(); ++l)
            eta[l] = (l == i) ? s1[l] + s2[l] + s3[l] : s2[l] + s3[l];
        const int best = *std::max_element(eta.begin(), eta.end());
        std::size_t o = i;
        if (eta[i] != best) {
            o = eta.size();
            for (std::size_t l = 0; l < eta.size(); ++l) {
                if (eta[l] != best) continue;
                if (o == eta.size() || s2[l] > s2[o]) o = l;  // ties: more in j+2, then least index
            }
        }
        ++j_;
        const double next_review = *t0_ + (j_ + 3) * D;
        if (o != i && s2[o] >= s1[i]) {
            sector_ = static_cast<int>(o);
            auto d = MotionDirective::go_to(partition_.resting_points[o]);
            d.review_at = next_review;
            return d;
        }
        return MotionDirective::hold(next_review);
    }

    /// |S_l^j| for every wedge l, counting arrivals in [(j-1)D, jD) after the first arrival.
    [[nodiscard]] std::vector<int> interval_counts(const Observation& obs, int j) const {
        std::vector<int> counts(static_cast<std::size_t>(partition_.n_s), 0);
        const double lo = *t0_ + (j - 1) * partition_.D;
        const double hi = *t0_ + j * partition_.D;
        for (const auto& a : obs.revealed)
            if (a.event.time >= lo && a.event.time < hi) ++counts[static_cast<std::size_t>(partition_.sector_of(a.event.angle))];
        return counts;
    }

private:
    ProblemParams params_;
    SectorPartition partition_;
    std::optional<double> t0_;
    int stage_{0};
    int j_{0};
    int sector_{-1};
};

struct PolicyOverrides {
    std::optional<double> x_s;
    std::optional<double> x_c;
    Admission admission{Admission::checked};
};

/// Builds a policy from its CLI name: stationary, sweep, concac, snp.
inline std::unique_ptr<Policy> make_policy(const std::string& name, const ProblemParams& params,
                                           const PolicyOverrides& o = {}) {
    if (name == "stationary") return std::make_unique<StationaryGuard>(params);
    if (name == "sweep") return std::make_unique<AngularSweep>(params, o.x_s, o.admission);
    if (name == "concac") return std::make_unique<ConCaC>(params, o.x_c, o.admission);
    if (name == "snp") return std::make_unique<Snp>(params, o.admission);
    throw ConfigError("unknown policy \"" + name + "\" (expected stationary, sweep, concac or snp)");
}

}  // namespace conic_defense
