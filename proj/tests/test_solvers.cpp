#include "delegate/solvers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace delegate;

TEST(SolveLp, OneDimensionalBounded) {
    LinearProgram lp(1);
    lp.set_objective({Rational(1)});
    lp.add_dense_constraint({Rational(1)}, Relation::kLessEqual, Rational(3));
    auto out = solve_lp(lp);
    ASSERT_EQ(out.status, LpStatus::kOptimal);
    EXPECT_EQ(out.value, 3);
    EXPECT_EQ(out.x[0], 3);
}

TEST(SolveLp, DetectsUnbounded) {
    LinearProgram lp(1);
    lp.set_objective({Rational(1)});
    EXPECT_EQ(solve_lp(lp).status, LpStatus::kUnbounded);
}

TEST(SolveLp, DetectsInfeasible) {
    LinearProgram lp(1);
    lp.set_objective({Rational(1)});
    lp.add_dense_constraint({Rational(1)}, Relation::kLessEqual, Rational(1));
    lp.add_dense_constraint({Rational(1)}, Relation::kGreaterEqual, Rational(2));
    EXPECT_EQ(solve_lp(lp).status, LpStatus::kInfeasible);
}

TEST(SolveLp, FreeAndShiftedVariables) {
    // max -x - y  s.t. x + y >= -3, x free, y >= -1, x <= 5
    LinearProgram lp(2);
    lp.set_objective({Rational(-1), Rational(-1)});
    lp.set_lower_bound(0, std::nullopt);
    lp.set_lower_bound(1, Rational(-1));
    lp.add_dense_constraint({Rational(1), Rational(1)}, Relation::kGreaterEqual, Rational(-3));
    lp.add_dense_constraint({Rational(1), Rational(0)}, Relation::kLessEqual, Rational(5));
    auto out = solve_lp(lp);
    ASSERT_EQ(out.status, LpStatus::kOptimal);
    EXPECT_EQ(out.value, 3);
    EXPECT_TRUE(is_feasible_point(lp, out.x));
}

TEST(SolveLp, RedundantEqualities) {
    LinearProgram lp(2);
    lp.set_objective({Rational(1), Rational(2)});
    lp.add_dense_constraint({Rational(1), Rational(1)}, Relation::kEqual, Rational(1));
    lp.add_dense_constraint({Rational(2), Rational(2)}, Relation::kEqual, Rational(2));
    auto out = solve_lp(lp);
    ASSERT_EQ(out.status, LpStatus::kOptimal);
    EXPECT_EQ(out.value, 2);
    EXPECT_EQ(out.x[1], 1);
}

TEST(SolveLp, RejectsBadDimensions) {
    LinearProgram lp(2);
    EXPECT_THROW(lp.set_objective({Rational(1)}), std::invalid_argument);
    EXPECT_THROW(lp.add_dense_constraint({Rational(1)}, Relation::kEqual, Rational(0)), std::invalid_argument);
    EXPECT_THROW(lp.add_constraint({{3, Rational(1)}}, Relation::kEqual, Rational(0)), std::invalid_argument);
}

TEST(SolveLp, RandomDualityGapIsZero) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coef(-3, 6), pos(1, 9);
    int solved = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t m = 1 + trial % 5, n = 1 + (trial / 5) % 5;
        Matrix a(m, n);
        Vector b(m), c(n);
        for (std::size_t i = 0; i < m; ++i) {
            b[i] = frac(coef(rng), pos(rng));
            for (std::size_t j = 0; j < n; ++j) a(i, j) = frac(coef(rng), pos(rng));
        }
        for (auto& v : c) v = frac(coef(rng), pos(rng));

        // primal: max c^T x, A x <= b, x >= 0
        LinearProgram primal(n);
        primal.set_objective(c);
        for (std::size_t i = 0; i < m; ++i) {
            Vector row(n);
            for (std::size_t j = 0; j < n; ++j) row[j] = a(i, j);
            primal.add_dense_constraint(row, Relation::kLessEqual, b[i]);
        }
        // dual: max -b^T y, A^T y >= c, y >= 0
        LinearProgram dual(m);
        Vector nb(m);
        for (std::size_t i = 0; i < m; ++i) nb[i] = -b[i];
        dual.set_objective(nb);
        for (std::size_t j = 0; j < n; ++j) {
            Vector row(m);
            for (std::size_t i = 0; i < m; ++i) row[i] = a(i, j);
            dual.add_dense_constraint(row, Relation::kGreaterEqual, c[j]);
        }
        auto p = solve_lp(primal);
        auto d = solve_lp(dual);
        if (p.status == LpStatus::kOptimal) {
            ASSERT_EQ(d.status, LpStatus::kOptimal);
            EXPECT_TRUE(is_feasible_point(primal, p.x));
            EXPECT_TRUE(is_feasible_point(dual, d.x));
            EXPECT_EQ(p.value, -d.value);
            ++solved;
        } else if (p.status == LpStatus::kUnbounded) {
            EXPECT_EQ(d.status, LpStatus::kInfeasible);
        } else {
            EXPECT_NE(d.status, LpStatus::kOptimal);
        }
        // determinism
        auto again = solve_lp(primal);
        EXPECT_EQ(again.status, p.status);
        EXPECT_EQ(again.x, p.x);
    }
    EXPECT_GT(solved, 30);
}

TEST(IntersectHyperplanes, Examples) {
    auto one = intersect_hyperplanes({{{Rational(1)}, Rational(1)}});
    ASSERT_TRUE(one);
    EXPECT_EQ((*one)[0], 1);

    auto two = intersect_hyperplanes({{{Rational(1), Rational(-1)}, Rational(0)},
                                      {{Rational(1), Rational(1)}, Rational(2)}});
    ASSERT_TRUE(two);
    EXPECT_EQ(*two, (Vector{Rational(1), Rational(1)}));

    // q1 = 0 and q1 = 1 over (q1, q2): parallel
    EXPECT_FALSE(intersect_hyperplanes({{{Rational(1), Rational(0)}, Rational(0)},
                                        {{Rational(1), Rational(0)}, Rational(1)}}));
    EXPECT_THROW(intersect_hyperplanes({{{Rational(1)}, Rational(0)}, {{Rational(1)}, Rational(1)}}),
                 std::invalid_argument);
}

TEST(IntersectHyperplanes, SubstitutedSolutionSatisfiesEquations) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t k = 1 + trial % 4;
        std::vector<Hyperplane> planes(k);
        for (auto& h : planes) {
            h.normal.resize(k);
            for (auto& v : h.normal) v = d(rng);
            h.offset = frac(d(rng), 3);
        }
        auto q = intersect_hyperplanes(planes);
        if (!q) continue;
        for (const auto& h : planes) EXPECT_EQ(dot(h.normal, *q), h.offset);
    }
}
