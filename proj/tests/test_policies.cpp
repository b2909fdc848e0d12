#include "support.hpp"

#include <gtest/gtest.h>

using namespace conic_defense;

namespace {

constexpr double pi = std::numbers::pi;
const ProblemParams kQuarter{pi / 4, 0.5, 0.1, 0.2};

// ---------------------------------------------------------------------------
// intervals

TEST(SweepInterval, ReferenceValues) {
    const auto iv = sweep_interval(kQuarter);
    EXPECT_NEAR(iv.lo, 0.43742, 1e-5);
    EXPECT_DOUBLE_EQ(iv.hi, 0.7);
}

TEST(SweepInterval, EmptyCarriesBound) {
    try {
        sweep_interval({pi / 4, 0.5, 0.2, 0.2});
        FAIL();
    } catch (const RegimeError& e) {
        EXPECT_NEAR(e.bound(), 0.18189, 1e-5);
    }
}

TEST(SweepInterval, SlowLimit) { EXPECT_NEAR(sweep_interval({pi / 4, 0.5, 1e-12, 0.2}).lo, 0.3, 1e-10); }

TEST(SweepInterval, NonemptyExactlyBelowBound) {
    for (const auto& p : testref::sample_params(300, 41)) {
        const double bound = sweep_v_bound(p);
        for (double f : {0.98, 1.02}) {
            ProblemParams q = p;
            q.v = bound * f;
            if (!params_valid(q)) continue;
            EXPECT_EQ(!sweep_interval_raw(q).empty(), f < 1.0) << p.theta << " " << p.rho << " " << p.r;
        }
    }
}

TEST(ConcacInterval, ReferenceValues) {
    const auto iv = concac_interval(kQuarter);
    EXPECT_NEAR(iv.lo, 0.35591, 1e-5);
    EXPECT_DOUBLE_EQ(iv.hi, 0.7);
    // evaluates to 0.335063; the interval closes exactly there
    EXPECT_NEAR(concac_v_bound(kQuarter), 0.33506, 1e-5);
}

TEST(ConcacInterval, SlowLimitAndEmpty) {
    EXPECT_NEAR(concac_interval({pi / 4, 0.5, 1e-12, 0.2}).lo, 0.3, 1e-10);
    EXPECT_THROW(concac_interval({pi / 4, 0.5, 0.34, 0.2}), RegimeError);
    EXPECT_NO_THROW(concac_interval({pi / 4, 0.5, 0.335, 0.2}));
}

TEST(ConcacInterval, NonemptyExactlyBelowBound) {
    for (const auto& p : testref::sample_params(300, 43)) {
        const double bound = concac_v_bound(p);
        for (double f : {0.98, 1.02}) {
            ProblemParams q = p;
            q.v = bound * f;
            if (!params_valid(q)) continue;
            EXPECT_EQ(!concac_interval_raw(q).empty(), f < 1.0) << p.theta << " " << p.rho << " " << p.r;
        }
    }
}

// ---------------------------------------------------------------------------
// partition

TEST(Partition, ReferenceValues) {
    const auto s = snp_partition({pi / 3, 0.5, 0.1, 0.2});
    EXPECT_NEAR(s.theta_s, 0.38051, 1e-5);
    EXPECT_EQ(s.n_s, 3);
    EXPECT_NEAR(s.resting_radius, 0.53852, 1e-5);
    ASSERT_EQ(s.resting_points.size(), 3u);
    EXPECT_NEAR(s.resting_points[0].angle, -0.76102, 1e-5);
    EXPECT_NEAR(s.resting_points[1].angle, 0.0, 1e-15);
    EXPECT_NEAR(s.resting_points[2].angle, 0.76102, 1e-5);
    EXPECT_NEAR(s.D, 0.74278, 1e-5);
    EXPECT_DOUBLE_EQ(s.ratio_bound, 4.0);
}

TEST(Partition, SingleSector) {
    const auto s = snp_partition({0.3, 0.5, 0.1, 0.2});
    EXPECT_EQ(s.n_s, 1);
    EXPECT_EQ(s.D, 0.0);
    EXPECT_EQ(s.ratio_bound, 1.0);
}

TEST(Partition, FullDisk) { EXPECT_EQ(snp_partition({pi, 0.5, 0.1, 0.2}).n_s, 9); }

TEST(Partition, RestingPointsCoverThePerimeter) {
    for (const auto& p : testref::sample_params(100, 47)) {
        const auto s = snp_partition(p);
        EXPECT_LT(s.theta_s, pi / 4);
        EXPECT_GE(s.n_s * s.theta_s, p.theta - 1e-12);
        for (int k = 0; k <= 500; ++k) {
            const double beta = -p.theta + 2.0 * p.theta * k / 500;
            const Vec2 q = to_cartesian({p.rho, beta});
            double best = kInf;
            for (const auto& rp : s.resting_points) best = std::min(best, distance(q, to_cartesian(rp)));
            ASSERT_LE(best, p.r + 1e-12) << p.theta << " " << p.rho << " " << p.r;
            // the wedge that owns beta is one whose resting point covers it
            const auto& own = s.resting_points[static_cast<std::size_t>(s.sector_of(beta))];
            EXPECT_LE(distance(q, to_cartesian(own)), p.r + 1e-12);
        }
    }
}

TEST(Partition, DTwoCases) {
    for (const auto& p : testref::sample_params(100, 53)) {
        const auto s = snp_partition(p);
        const double spread = (s.n_s - 1) * s.theta_s;
        const double chord = distance(to_cartesian(s.resting_points.front()), to_cartesian(s.resting_points.back()));
        if (spread < pi / 2) EXPECT_NEAR(s.D, chord, 1e-12);
        else EXPECT_NEAR(s.D, 2.0 * s.resting_radius, 1e-12);
    }
}

// ---------------------------------------------------------------------------
// configuration

TEST(Config, Errors) {
    EXPECT_THROW(AngularSweep(kQuarter, 0.2), ConfigError);
    EXPECT_THROW(AngularSweep({pi / 4, 0.5, 0.2, 0.2}), RegimeError);
    EXPECT_THROW(ConCaC(kQuarter, 0.9), ConfigError);
    EXPECT_THROW(Snp({pi / 3, 0.5, 0.3, 0.2}), RegimeError);
    EXPECT_THROW(StationaryGuard({pi / 3, 0.5, 0.1, 0.2}), ConfigError);
    EXPECT_THROW(make_policy("zigzag", kQuarter), ConfigError);
    EXPECT_NEAR(AngularSweep(kQuarter).x_s(), 0.5 * (0.43742 + 0.7), 1e-5);
    EXPECT_NEAR(ConCaC(kQuarter).x_c(), 0.5 * (0.35591 + 0.7), 1e-5);
}

// ---------------------------------------------------------------------------
// behavior

std::vector<ProblemParams> regime_points(std::size_t count, std::uint64_t seed, bool (*in)(const ProblemParams&)) {
    std::vector<ProblemParams> out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& p : testref::sample_params(count * 20, seed)) {
        if (out.size() == count) break;
        ProblemParams q = p;
        q.v = std::min(0.9, q.v * u(rng) * 0.5);
        if (params_valid(q) && in(q)) out.push_back(q);
    }
    return out;
}

TEST(Sweep, NoLossesInsideRegime) {
    const auto pts = regime_points(20, 61, [](const ProblemParams& p) { return !sweep_interval_raw(p).empty(); });
    ASSERT_EQ(pts.size(), 20u);
    std::uint64_t seed = 0;
    for (const auto& p : pts)
        for (int k = 0; k < 10; ++k) {
            ++seed;
            AngularSweep pol(p);
            const auto inst = random_instance(p, 10 + seed % 41, 15.0, seed);
            const auto res = simulate(inst, pol);
            ASSERT_EQ(res.lost, 0) << p.theta << " " << p.rho << " " << p.v << " " << p.r << " seed " << seed;
        }
}

TEST(Sweep, FullDiskCirclesOneWay) {
    const ProblemParams p{pi, 0.5, 0.05, 0.2};
    AngularSweep pol(p);
    const auto res = simulate(random_instance(p, 20, 10.0, 5), pol);
    ASSERT_FALSE(res.motion.empty());
    for (const auto& leg : res.motion) {
        ASSERT_EQ(leg.kind, Leg::Kind::arc);
        EXPECT_GT(leg.omega, 0.0);
    }
    EXPECT_EQ(res.lost, 0);
}

TEST(Sweep, OutsideIntervalLosesTheTimedIntruder) {
    const ProblemParams p = kQuarter;
    const double xs = 0.35;  // below the interval
    AngularSweep pol(p, xs, Admission::unchecked);
    // the vehicle leaves (x_S, theta) at theta x_S (1 + 4k); place the intruder
    // just beyond reach at (x_S + r, theta) on the fifth departure
    const double depart = p.theta * xs * 17.0;
    const double arrive = depart - (1.0 - (xs + p.r + 1e-3)) / p.v;
    ASSERT_GT(arrive, 0.0);
    const auto res = simulate(InputInstance{p, {{arrive, p.theta}}}, pol);
    EXPECT_EQ(res.lost, 1);

    AngularSweep inside(p);
    EXPECT_EQ(simulate(InputInstance{p, {{arrive, p.theta}}}, inside).lost, 0);
}

TEST(Policies, UnitSpeedOnly) {
    for (const auto& p : testref::sample_params(30, 67)) {
        const auto inst = random_instance(p, 15, 6.0, 3);
        for (const char* name : {"sweep", "concac", "snp"}) {
            std::unique_ptr<Policy> pol;
            try {
                pol = make_policy(name, p, {std::nullopt, std::nullopt, Admission::unchecked});
            } catch (const Error&) {
                continue;
            }
            for (const auto& leg : simulate(inst, *pol).motion) EXPECT_NEAR(leg.speed(), 1.0, 1e-12) << name;
        }
    }
}

/// Bursts of `size` intruders alternating between the two boundary rays.
InputInstance alternating_bursts(const ProblemParams& p, int bursts, int size, double gap) {
    InputInstance inst{p, {}};
    for (int b = 0; b < bursts; ++b)
        for (int k = 0; k < size; ++k) inst.arrivals.push_back({b * gap, (b % 2 ? -1.0 : 1.0) * p.theta});
    return inst;
}

TEST(ConCaC, AtLeastHalfInsideRegime) {
    const auto pts = regime_points(20, 71, [](const ProblemParams& p) { return !concac_interval_raw(p).empty(); });
    ASSERT_EQ(pts.size(), 20u);
    std::uint64_t seed = 0;
    for (const auto& p : pts) {
        for (int k = 0; k < 10; ++k) {
            ++seed;
            ConCaC pol(p);
            const auto inst = random_instance(p, 10 + seed % 41, 15.0, seed);
            const auto res = simulate(inst, pol);
            ASSERT_GE(2 * res.captured, res.total()) << p.theta << " " << p.rho << " " << p.v << " " << p.r;
        }
        for (double gap : {0.0, 0.3, 1.0, (1.0 - p.rho) / p.v}) {
            for (int size : {1, 3}) {
                ConCaC pol(p);
                const auto res = simulate(alternating_bursts(p, 6, size, gap), pol);
                ASSERT_GE(2 * res.captured, res.total()) << p.theta << " " << p.rho << " " << p.v << " gap " << gap;
            }
        }
    }
}

TEST(ConCaC, OneSideIsFullyCaptured) {
    const auto pts = regime_points(10, 73, [](const ProblemParams& p) { return !concac_interval_raw(p).empty(); });
    std::mt19937_64 rng(3);
    for (const auto& p : pts) {
        for (double side : {1.0, -1.0}) {
            std::uniform_real_distribution<double> a(0.0, p.theta), t(0.0, 10.0);
            InputInstance inst{p, {}};
            for (int k = 0; k < 25; ++k) inst.arrivals.push_back({t(rng), side * a(rng)});
            std::sort(inst.arrivals.begin(), inst.arrivals.end(),
                      [](const ArrivalEvent& x, const ArrivalEvent& y) { return x.time < y.time; });
            ConCaC pol(p);
            EXPECT_EQ(simulate(inst, pol).lost, 0) << p.theta << " " << p.rho << " " << p.v << " " << p.r;
        }
    }
}

TEST(ConCaC, EpochsLastTwoThetaXc) {
    const auto pts = regime_points(10, 79, [](const ProblemParams& p) { return !concac_interval_raw(p).empty(); });
    for (const auto& p : pts) {
        ConCaC pol(p);
        const auto res = simulate(random_instance(p, 20, 8.0, 7), pol);
        std::vector<double> starts;
        for (const auto& rec : res.trace)
            if (rec.event == TraceEvent::decision) starts.push_back(rec.time);
        ASSERT_GE(starts.size(), 2u);
        for (std::size_t i = 1; i < starts.size(); ++i)
            EXPECT_NEAR(starts[i] - starts[i - 1], 2.0 * p.theta * pol.x_c(), 1e-9);
        // first epoch begins after the initial wait
        EXPECT_NEAR(starts.front(), res.per_intruder.front().arrival.time + pol.initial_wait(), 1e-12);
    }
}

TEST(ConCaC, TieGoesLeft) {
    ConCaC pol(kQuarter);
    Observation obs;
    obs.params = &kQuarter;
    obs.vehicle = {pol.x_c(), 0.0};
    Triggers why;
    why.start = true;
    pol.decide(obs, why);
    why = {};
    why.arrival = true;
    auto d = pol.decide(obs, why);
    if (d && d->kind == MotionDirective::Kind::hold) {
        obs.now = *d->review_at;
        why = {};
        why.review = true;
        d = pol.decide(obs, why);
    }
    ASSERT_TRUE(d);
    ASSERT_EQ(d->kind, MotionDirective::Kind::follow_arc);
    EXPECT_EQ(d->target_angle, -kQuarter.theta);
}

TEST(ConCaC, SetsUseCurrentPositions) {
    ConCaC pol(kQuarter);
    const double xc = pol.x_c();
    // right set: rho + beta x_C v < y <= min(1, x_C + r + (2 theta - beta) v x_C)
    const double beta = 0.3;
    const double lo = kQuarter.rho + beta * xc * kQuarter.v;
    const double hi = std::min(1.0, xc + kQuarter.r + (2 * kQuarter.theta - beta) * kQuarter.v * xc);
    auto at = [&](double y, double b) { return ActiveIntruder{0, {0.0, b}, {y, b}}; };
    auto c = pol.count_sets({at(lo, beta), at(0.5 * (lo + hi), beta), at(hi, beta), at(hi + 1e-6, beta)});
    EXPECT_EQ(c.right, 2);
    EXPECT_EQ(c.left, 0);
    c = pol.count_sets({at(0.5 * (lo + hi), -beta)});
    EXPECT_EQ(c.left, 1);
}

TEST(Snp, SingleSectorParksAndCapturesAll) {
    const ProblemParams p{0.5, 0.5, 0.3, 0.3};
    Snp pol(p);
    ASSERT_EQ(pol.partition().n_s, 1);
    const auto res = simulate(random_instance(p, 50, 10.0, 4), pol);
    EXPECT_EQ(res.lost, 0);
    EXPECT_TRUE(res.motion.empty());
    EXPECT_EQ(res.start, pol.partition().resting_points.front());
}

const ProblemParams kSnp{pi / 3, 0.5, 0.1, 0.2};

TEST(Snp, OneSectorArrivalsAllCaptured) {
    ASSERT_TRUE(snp_feasible(kSnp));
    const auto s = snp_partition(kSnp);
    std::mt19937_64 rng(9);
    for (int l = 0; l < s.n_s; ++l) {
        const double lo = std::max(-kSnp.theta, (2 * l - s.n_s) * s.theta_s) + 1e-9;
        const double hi = std::min(kSnp.theta, (2 * l + 2 - s.n_s) * s.theta_s) - 1e-9;
        for (int rep = 0; rep < 10; ++rep) {
            std::uniform_real_distribution<double> a(lo, hi), t(0.0, 12.0);
            InputInstance inst{kSnp, {}};
            for (int k = 0; k < 20; ++k) inst.arrivals.push_back({t(rng), a(rng)});
            std::sort(inst.arrivals.begin(), inst.arrivals.end(),
                      [](const ArrivalEvent& x, const ArrivalEvent& y) { return x.time < y.time; });
            for (const auto& e : inst.arrivals) ASSERT_EQ(s.sector_of(e.angle), l);
            Snp pol(kSnp);
            EXPECT_EQ(simulate(inst, pol).lost, 0) << "sector " << l << " rep " << rep;
        }
    }
}

TEST(Snp, DecisionsAtIntervalBoundaries) {
    const auto s = snp_partition(kSnp);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Snp pol(kSnp);
        const auto res = simulate(random_instance(kSnp, 25, 10.0, seed), pol);
        const double t0 = res.per_intruder.front().arrival.time;
        for (const auto& rec : res.trace) {
            if (rec.event != TraceEvent::decision) continue;
            const double k = (rec.time - t0) / s.D;
            EXPECT_NEAR(k, std::round(k), 1e-9 / s.D);
            EXPECT_TRUE(std::round(k) == 1.0 || std::round(k) >= 3.0) << k;
        }
    }
}

TEST(Snp, StartupPicksBusiestSectorLeastIndexOnTies) {
    const auto s = snp_partition(kSnp);
    // two arrivals in sector 2, two in sector 0 during interval 1: tie goes to sector 0
    InputInstance tie{kSnp, {{0.0, 0.9}, {0.1, -0.9}, {0.2, 0.9}, {0.3, -0.9}}};
    Snp a(kSnp);
    const auto res = simulate(tie, a);
    ASSERT_FALSE(res.motion.empty());
    EXPECT_EQ(res.motion.front().end_pose, s.resting_points[0]);
    InputInstance right{kSnp, {{0.0, 0.9}, {0.1, -0.9}, {0.2, 0.9}}};
    Snp b(kSnp);
    EXPECT_EQ(simulate(right, b).motion.front().end_pose, s.resting_points[2]);
}

}  // namespace
