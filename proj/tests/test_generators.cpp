#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace delegate;

TEST(SingleBad, TwoIsDiag2) {
    auto inst = gen_single_bad(2);
    EXPECT_TRUE(validate_instance(inst).ok());
    EXPECT_EQ(inst.type_dist, (Vector{frac(1, 2), frac(1, 2)}));
    EXPECT_EQ(inst.R(0, 0), 1);
    EXPECT_EQ(inst.R(1, 0), 0);
}

TEST(RandomizedGap, TypeDistribution) {
    auto inst = gen_randomized_gap(4);
    EXPECT_TRUE(validate_instance(inst).ok());
    EXPECT_EQ(inst.type_dist, (Vector{frac(2, 12), frac(2, 12), frac(4, 12), frac(4, 12)}));
    for (std::size_t n : {2, 6, 8}) {
        auto g = gen_randomized_gap(n);
        Rational total = 0;
        for (const auto& x : g.type_dist) total += x;
        EXPECT_EQ(total, 1);
    }
    EXPECT_THROW(gen_randomized_gap(3), std::invalid_argument);
}

TEST(RandomizedGap, Rewards) {
    auto inst = gen_randomized_gap(4);
    // Order is (1,1), (1,2), (2,1), (2,2).
    EXPECT_EQ(inst.R(3, 0), 0);           // type (1,1) at outcome (2,2)
    EXPECT_EQ(inst.R(2, 0), frac(1, 2));  // type (1,1) at outcome (2,1)
    EXPECT_EQ(inst.R(1, 0), frac(1, 2));  // same i
    EXPECT_EQ(inst.R(1, 2), 0);           // type (2,1) at outcome (1,2)
    EXPECT_EQ(inst.R(0, 2), frac(1, 4));
}

TEST(Hardness, EdgelessTwo) {
    auto h = gen_hardness(GraphSpec{2, {}});
    EXPECT_EQ(h.beta, frac(1, 120));
    EXPECT_TRUE(validate_instance(h.instance).ok());
    EXPECT_EQ(h.instance.R(h.index(1, 1), h.index(1, 1)), frac(1, 8));
    EXPECT_EQ(h.instance.R(h.index(1, 1), h.index(2, 1)), 0);
}

TEST(Hardness, EdgeRewardsLowerNeighbour) {
    auto h = gen_hardness(GraphSpec{2, {{1, 2}}});
    for (std::size_t j = 1; j <= 2; ++j) EXPECT_EQ(h.instance.R(h.index(1, j), h.index(2, 1)), frac(1, 32));
    // Only the higher vertex values the lower one's outcomes.
    EXPECT_EQ(h.instance.R(h.index(2, 1), h.index(1, 1)), 0);
}

TEST(Hardness, Guards) {
    EXPECT_THROW(gen_hardness(GraphSpec{5, {}}), std::invalid_argument);
    EXPECT_THROW(gen_hardness(GraphSpec{2, {{1, 1}}}), std::invalid_argument);
    EXPECT_THROW(gen_hardness(GraphSpec{2, {{1, 3}}}), std::invalid_argument);
}

TEST(Soundness, EdgelessValues) {
    auto h = gen_hardness(GraphSpec{2, {}});
    struct Case {
        std::vector<std::size_t> set;
        Rational value;
    };
    // beta |V*| N with beta = 1/120 and N = 2.
    for (const auto& c : {Case{{1, 2}, frac(1, 30)}, Case{{1}, frac(1, 60)}, Case{{}, Rational(0)}}) {
        auto menu = gen_soundness_menu(h, c.set);
        auto rep = verify_menu(h.instance, menu);
        EXPECT_TRUE(rep.ok());
        EXPECT_EQ(rep.value, c.value);
        EXPECT_EQ(rep.direct_value, c.value);
        EXPECT_EQ(h.beta * static_cast<long>(c.set.size()) * 2, c.value);
    }
}

TEST(Soundness, RejectsDependentSet) {
    auto h = gen_hardness(GraphSpec{3, {{1, 2}, {2, 3}}});
    EXPECT_THROW(gen_soundness_menu(h, {1, 2}), std::invalid_argument);
    auto menu = gen_soundness_menu(h, {1, 3});
    auto rep = verify_menu(h.instance, menu);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.value, h.beta * 2 * 3);
}

TEST(Random, DeterministicAndValid) {
    EXPECT_EQ(gen_random(2, 2, 2, 0), gen_random(2, 2, 2, 0));
    EXPECT_FALSE(gen_random(3, 3, 3, 1) == gen_random(3, 3, 3, 2));
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        EXPECT_TRUE(validate_instance(gen_random(1 + seed % 4, 1 + seed % 3, 1 + seed % 5, seed)).ok());
    EXPECT_THROW(gen_random(0, 1, 1, 0), std::invalid_argument);
}
