#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace delegate;

namespace {

// With point-mass outcomes the cheapest inducing payment pays only on a's own outcome,
// so the floor is max(0, max_b (c_a - c_b - eps)).
Rational identity_floor(const DelegationInstance& inst, std::size_t a, const Rational& eps) {
    Rational f = 0;
    for (std::size_t b = 0; b < inst.num_actions(); ++b)
        if (b != a && inst.costs[a] - inst.costs[b] - eps > f) f = inst.costs[a] - inst.costs[b] - eps;
    return f;
}

DelegationInstance random_identity(std::mt19937_64& rng, std::size_t l) {
    Matrix F(l, l), R(l, 1);
    Vector costs(l);
    for (std::size_t a = 0; a < l; ++a) {
        F(a, a) = 1;
        costs[a] = frac(static_cast<long>(rng() % 11), 10);
    }
    return make_instance({Rational(1)}, F, R, costs);
}

}  // namespace

TEST(Floor, ZeroCostsGiveZero) {
    auto inst = fixtures::diag2();
    for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(compute_floor(inst, a, Rational(0)).value(), 0);
}

TEST(Floor, CostGap) {
    auto inst = fixtures::two_action(Rational(0), frac(3, 10));
    EXPECT_EQ(compute_floor(inst, 1, Rational(0)).value(), frac(3, 10));
    EXPECT_EQ(compute_floor(inst, 1, frac(1, 10)).value(), frac(1, 5));
    EXPECT_EQ(compute_floor(inst, 0, Rational(0)).value(), 0);
}

TEST(Floor, MatchesClosedFormOnPointMassInstances) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        auto inst = random_identity(rng, 1 + trial % 4);
        const Rational eps = frac(static_cast<long>(rng() % 4), 10);
        for (std::size_t a = 0; a < inst.num_actions(); ++a)
            EXPECT_EQ(compute_floor(inst, a, eps).value(), identity_floor(inst, a, eps));
    }
}

TEST(Floor, SingletonActionSet) {
    auto inst = fixtures::two_action(Rational(0), frac(3, 10));
    EXPECT_EQ(compute_floor(inst, 1, Rational(0), {1}).value(), 0);
}

TEST(Floor, DominatedActionIsNotImplementable) {
    // a2 is the even mix of a1 and a3 but costs more than their average.
    Matrix F(2, 3), R(2, 1);
    F(0, 0) = 1;
    F(0, 1) = frac(1, 2);
    F(1, 1) = frac(1, 2);
    F(1, 2) = 1;
    auto inst = make_instance({Rational(1)}, F, R, {Rational(0), frac(1, 2), Rational(0)});
    EXPECT_FALSE(compute_floor(inst, 1, Rational(0)).implementable());
    EXPECT_THROW(compute_floor(inst, 1, Rational(0)).value(), InfeasibleError);
    EXPECT_TRUE(compute_floor(inst, 1, frac(1, 2)).implementable());
}

TEST(Floor, RejectsBadArguments) {
    auto inst = fixtures::diag2();
    EXPECT_THROW(compute_floor(inst, 0, frac(-1, 10)), std::invalid_argument);
    EXPECT_THROW(compute_floor(inst, 0, Rational(0), {1}), std::invalid_argument);
}

TEST(Floor, MonotoneInEps) {
    for (std::size_t i = 0; i < 40; ++i) {
        auto inst = fixtures::suite_instance(i, 300);
        for (std::size_t a = 0; a < inst.num_actions(); ++a) {
            std::optional<Rational> prev;
            for (long e = 0; e <= 5; ++e) {
                auto f = compute_floor(inst, a, frac(e, 10));
                if (prev) {
                    ASSERT_TRUE(f.implementable());
                    EXPECT_LE(*f.floor, *prev);
                }
                if (f.implementable()) prev = f.floor;
            }
        }
    }
}

TEST(Floor, CacheReturnsSameValues) {
    auto inst = gen_random(2, 3, 3, 5);
    FloorCache cache(inst);
    for (std::size_t a = 0; a < 3; ++a) {
        EXPECT_EQ(cache.get(a, frac(1, 10)).floor, compute_floor(inst, a, frac(1, 10)).floor);
        EXPECT_EQ(cache.get(a, frac(1, 10)).floor, compute_floor(inst, a, frac(1, 10)).floor);
    }
    EXPECT_EQ(cache.size(), 3u);
}

TEST(Reconstruct, PointMass) {
    auto inst = fixtures::diag2();
    EXPECT_EQ(reconstruct_payment(inst, 0, Rational(1), Rational(0)), (Vector{Rational(1), Rational(0)}));
}

TEST(Reconstruct, BindsAtTheFloor) {
    for (std::size_t i = 0; i < 40; ++i) {
        auto inst = fixtures::suite_instance(i, 500);
        for (std::size_t a = 0; a < inst.num_actions(); ++a) {
            auto f = compute_floor(inst, a, Rational(0));
            if (!f.implementable()) continue;
            auto p = reconstruct_payment(inst, a, *f.floor, Rational(0));
            EXPECT_EQ(inst.expected_payment(a, p), *f.floor);
            EXPECT_EQ(provider_deviation(inst, a, p).gain, 0);
            for (const auto& x : p) EXPECT_GE(x, 0);
            if (inst.num_actions() > 1 && *f.floor > 0) {
                // Some IC row must be tight, otherwise the floor could be lowered.
                bool tight = false;
                const Rational own = inst.expected_payment(a, p) - inst.costs[a];
                for (std::size_t b = 0; b < inst.num_actions(); ++b)
                    tight = tight || (b != a && inst.expected_payment(b, p) - inst.costs[b] == own);
                EXPECT_TRUE(tight);
            }
        }
    }
}

TEST(Reconstruct, BelowFloorThrows) {
    auto inst = fixtures::two_action(Rational(0), frac(3, 10));
    EXPECT_THROW(reconstruct_payment(inst, 1, frac(1, 10), Rational(0)), InfeasibleError);
}

TEST(Reconstruct, SmoothBound) {
    // Every payment that induces a keeps ||p||_inf <= (1 + q)/c on c-smooth instances.
    std::size_t checked = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        auto inst = fixtures::suite_instance(i, 900);
        const Rational c = fixtures::smoothness_of(inst);
        if (c == 0) continue;
        for (std::size_t a = 0; a < inst.num_actions(); ++a) {
            auto f = compute_floor(inst, a, Rational(0));
            if (!f.implementable() || *f.floor > 1) continue;
            for (const Rational& q : Vector{*f.floor, Rational((*f.floor + 1) / 2), Rational(1)}) {
                auto p = reconstruct_payment(inst, a, q, Rational(0));
                for (const auto& x : p) EXPECT_LE(x, (1 + q) / c);
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 100u);
}

TEST(QShift, Examples) {
    auto d2 = fixtures::diag2();
    EXPECT_TRUE(check_q_shift(d2, 0, Rational(1), Rational(0), frac(1, 2)));
    auto inst = fixtures::two_action(Rational(0), frac(3, 10));
    EXPECT_TRUE(check_q_shift(inst, 1, frac(3, 10), Rational(0), frac(1, 10)));
    EXPECT_THROW(check_q_shift(inst, 1, frac(3, 10), Rational(0), frac(2, 5)), std::invalid_argument);
}
