#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace delegate;

namespace {

PricingSolution diag2_items(const std::vector<std::size_t>& actions, const Vector& prices) {
    return make_solution(fixtures::diag2(), actions, prices);
}

}  // namespace

TEST(Select, ZeroUtilityBuys) {
    auto sol = diag2_items({0}, {Rational(1)});
    auto s0 = select(sol, 0);
    EXPECT_EQ(s0.item, 0u);
    EXPECT_EQ(s0.utility, 0);
    EXPECT_EQ(select(sol, 1).item, kOptOut);
}

TEST(Select, MarginBreaksUtilityTies) {
    auto inst = fixtures::two_action(Rational(0), frac(3, 10));
    auto sol = make_solution(inst, {1, 0}, {frac(1, 2), frac(1, 2)});
    // Both leave utility 1/2; margins are 1/5 and 1/2.
    auto s = select(sol, 0);
    EXPECT_EQ(s.item, 1u);
    EXPECT_EQ(s.margin, frac(1, 2));
}

TEST(Select, AllOverpricedOptsOut) {
    auto sol = diag2_items({0, 1}, {Rational(2), Rational(2)});
    EXPECT_EQ(select(sol, 0).item, kOptOut);
    EXPECT_EQ(evaluate(fixtures::diag2(), sol), 0);
}

TEST(Evaluate, Diag2) {
    EXPECT_EQ(evaluate(fixtures::diag2(), diag2_items({0, 1}, {Rational(1), Rational(1)})), 1);
    EXPECT_EQ(evaluate(fixtures::diag2(), diag2_items({0}, {Rational(1)})), frac(1, 2));
}

TEST(SolveMenu, Diag2) {
    auto inst = fixtures::diag2();
    auto one = solve_menu_k(inst, 1);
    EXPECT_EQ(one.value, frac(1, 2));
    ASSERT_EQ(one.solution.size(), 1u);
    EXPECT_EQ(one.solution.items[0].price, 1);
    EXPECT_EQ(solve_menu_k(inst, 2).value, 1);
}

TEST(SolveMenu, SingleTypeExtractsSurplus) {
    Matrix F(2, 2), R(2, 1);
    F(0, 0) = 1;
    F(1, 1) = 1;
    R(0, 0) = 1;
    auto inst = make_instance({Rational(1)}, F, R, Vector(2));
    auto rep = solve_menu_k(inst, 1);
    EXPECT_EQ(rep.value, 1);
    EXPECT_EQ(rep.solution.items[0].price, 1);
    EXPECT_EQ(brute_force_opt_k(inst, 1).value, 1);
}

TEST(SolveMenu, RejectsZeroK) { EXPECT_THROW(solve_menu_k(fixtures::diag2(), 0), std::invalid_argument); }

TEST(SolveMenu, StrategiesAgree) {
    SolveOptions subsets;
    subsets.strategy = EnumerationStrategy::kSubsets;
    for (std::size_t i = 0; i < 60; ++i) {
        auto inst = fixtures::suite_instance(i, 40);
        for (std::size_t k = 1; k <= 3; ++k) EXPECT_EQ(solve_menu_k(inst, k).value, solve_menu_k(inst, k, subsets).value);
    }
}

TEST(SolveMenu, MonotoneInK) {
    for (std::size_t i = 0; i < 40; ++i) {
        auto inst = fixtures::suite_instance(i, 80);
        Rational prev = 0;
        for (std::size_t k = 1; k <= 3; ++k) {
            Rational v = solve_menu_k(inst, k).value;
            EXPECT_GE(v, prev);
            prev = v;
        }
    }
}

TEST(SolveMenu, ThreadCountDoesNotChangeTheAnswer) {
    SolveOptions four;
    four.threads = 4;
    for (std::size_t i = 0; i < 30; ++i) {
        auto inst = gen_random(3, 3, 3, 1200 + i);
        auto a = solve_menu_k(inst, 3);
        auto b = solve_menu_k(inst, 3, four);
        EXPECT_EQ(a.value, b.value);
        ASSERT_EQ(a.solution.size(), b.solution.size());
        for (std::size_t j = 0; j < a.solution.size(); ++j) {
            EXPECT_EQ(a.solution.items[j].action, b.solution.items[j].action);
            EXPECT_EQ(a.solution.items[j].price, b.solution.items[j].price);
        }
    }
}

TEST(Conversions, Diag2DirectMenu) {
    auto inst = fixtures::diag2();
    auto rep = solve_menu_k(inst, 2);
    auto menu = pricing_to_menu(inst, rep.solution, MenuKind::kDirect);
    ASSERT_EQ(menu.schemes.size(), 2u);
    for (std::size_t t = 0; t < 2; ++t) {
        EXPECT_EQ(menu.schemes[t].action, t);
        Vector expect(2);
        expect[t] = 1;
        EXPECT_EQ(menu.schemes[t].payments, expect);
    }
    EXPECT_TRUE(verify_menu(inst, menu).ok());
    auto back = menu_to_pricing(inst, menu);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back.items[0].price, 1);
    EXPECT_EQ(back.items[1].price, 1);
}

TEST(Conversions, OptOutSlotsBecomeEmptyItems) {
    auto inst = fixtures::diag2();
    DeterministicMenu menu;
    menu.schemes = {{kOptOut, Vector(2)}};
    auto sol = menu_to_pricing(inst, menu);
    ASSERT_EQ(sol.size(), 1u);
    EXPECT_TRUE(sol.items[0].opt_out());
    EXPECT_EQ(sol.items[0].price, 0);
    EXPECT_EQ(evaluate(inst, sol), 0);
}

TEST(Conversions, RejectsProviderDeviation) {
    Matrix F(2, 2), R(2, 1);
    F(0, 0) = 1;
    F(1, 1) = 1;
    R(0, 0) = 1;
    auto inst = make_instance({Rational(1)}, F, R, {frac(1, 2), Rational(0)});
    DeterministicMenu menu;
    menu.schemes = {{0, {frac(2, 5), Rational(0)}}};
    try {
        menu_to_pricing(inst, menu);
        FAIL() << "expected NotIcError";
    } catch (const NotIcError& e) {
        EXPECT_EQ(e.scheme(), 0u);
        EXPECT_EQ(e.deviation(), 1u);
    }
}

TEST(Conversions, RoundTripPreservesValue) {
    for (std::size_t i = 0; i < 60; ++i) {
        auto inst = fixtures::suite_instance(i, 150);
        auto rep = solve_menu_k(inst, 2);
        for (auto kind : {MenuKind::kIndirect, MenuKind::kDirect}) {
            auto menu = pricing_to_menu(inst, rep.solution, kind);
            EXPECT_TRUE(verify_menu(inst, menu).ok());
            EXPECT_EQ(evaluate_menu(inst, menu), rep.value);
            EXPECT_EQ(evaluate(inst, menu_to_pricing(inst, menu)), rep.value);
        }
    }
}

TEST(Compress, Diag2Unchanged) {
    auto inst = fixtures::diag2();
    auto direct = pricing_to_menu(inst, solve_menu_k(inst, 2).solution, MenuKind::kDirect);
    auto small = compress_menu(inst, direct);
    EXPECT_EQ(small.schemes.size(), 2u);
    EXPECT_EQ(evaluate_menu(inst, small), 1);
}

TEST(Compress, SharedSchemeMerges) {
    // Types 1 and 2 value only outcome 1; type 3 values only outcome 2.
    Matrix F(2, 2), R(2, 3);
    F(0, 0) = 1;
    F(1, 1) = 1;
    R(0, 0) = 1;
    R(0, 1) = 1;
    R(1, 2) = 1;
    auto inst = make_instance({frac(1, 3), frac(1, 3), frac(1, 3)}, F, R, Vector(2));
    DeterministicMenu direct;
    direct.kind = MenuKind::kDirect;
    direct.schemes = {{0, {Rational(1), Rational(0)}}, {0, {Rational(1), Rational(0)}}, {1, {Rational(0), Rational(1)}}};
    auto small = compress_menu(inst, direct);
    EXPECT_EQ(small.schemes.size(), 2u);
    EXPECT_EQ(evaluate_menu(inst, small), evaluate_menu(inst, direct));
    EXPECT_EQ(evaluate_menu(inst, small), brute_force_opt_k(inst, 2).value);
}

TEST(Compress, AllOptOut) {
    auto inst = fixtures::diag2();
    DeterministicMenu direct;
    direct.kind = MenuKind::kDirect;
    direct.schemes = {{kOptOut, Vector(2)}, {kOptOut, Vector(2)}};
    auto small = compress_menu(inst, direct);
    ASSERT_EQ(small.schemes.size(), 1u);
    EXPECT_TRUE(small.schemes[0].opt_out());
    EXPECT_EQ(evaluate_menu(inst, small), 0);
}

TEST(Compress, RejectsNonIcInput) {
    auto inst = fixtures::diag2();
    DeterministicMenu direct;
    direct.kind = MenuKind::kDirect;
    direct.schemes = {{0, {Rational(1), Rational(0)}}, {0, {frac(1, 2), Rational(0)}}};
    EXPECT_THROW(compress_menu(inst, direct), PreconditionError);
}
