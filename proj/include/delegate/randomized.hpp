#pragma once

// Menus of randomized payment schemes through the linear relaxation with
// x[t][a][w] standing in for phi(t, a) * p_{t,a}(w).

#include "delegate/floors.hpp"
#include "delegate/instance.hpp"
#include "delegate/solvers.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace delegate {

struct RelaxedSolution {
    Matrix phi;                                // types x (actions + 1), last column is opt-out
    std::vector<std::vector<Vector>> x;        // x[t][a][w]
    Rational value;

    /// No (t, a) carries payment mass while phi(t, a) = 0.
    bool is_regular() const {
        for (std::size_t t = 0; t < x.size(); ++t)
            for (std::size_t a = 0; a < x[t].size(); ++a) {
                if (phi(t, a) != 0) continue;
                for (const auto& v : x[t][a])
                    if (v != 0) return false;
            }
        return true;
    }
};

/// Objective of the relaxation at (phi, x).
inline Rational relaxed_value(const DelegationInstance& inst, const RelaxedSolution& sol) {
    Rational v = 0;
    for (std::size_t t = 0; t < inst.num_types(); ++t) {
        Rational per = 0;
        for (std::size_t a = 0; a < inst.num_actions(); ++a) per += inst.expected_payment(a, sol.x[t][a]) - sol.phi(t, a) * inst.costs[a];
        v += inst.type_dist[t] * per;
    }
    return v;
}

/// sum_a F_a^T x[t][a]: expected payment of type t.
inline Rational relaxed_expected_payment(const DelegationInstance& inst, const RelaxedSolution& sol, std::size_t t) {
    Rational v = 0;
    for (std::size_t a = 0; a < inst.num_actions(); ++a) v += inst.expected_payment(a, sol.x[t][a]);
    return v;
}

/// Largest violation of each constraint family of the relaxation (0 when feasible).
struct RelaxedViolations {
    Rational provider_ic, user_ic, user_ir, distribution, negativity;

    bool feasible() const {
        return provider_ic == 0 && user_ic == 0 && user_ir == 0 && distribution == 0 && negativity == 0;
    }
};

inline RelaxedViolations check_relaxed(const DelegationInstance& inst, const RelaxedSolution& sol) {
    const std::size_t n = inst.num_types(), l = inst.num_actions();
    RelaxedViolations out;
    auto bump = [](Rational& slot, const Rational& v) {
        if (v > slot) slot = v;
    };
    for (std::size_t t = 0; t < n; ++t) {
        Rational total = 0;
        for (std::size_t a = 0; a <= l; ++a) {
            bump(out.negativity, -sol.phi(t, a));
            total += sol.phi(t, a);
        }
        bump(out.distribution, abs(total - 1));
        for (std::size_t a = 0; a < l; ++a)
            for (const auto& v : sol.x[t][a]) bump(out.negativity, -v);
        for (std::size_t a = 0; a < l; ++a) {
            const Rational own = inst.expected_payment(a, sol.x[t][a]) - sol.phi(t, a) * inst.costs[a];
            for (std::size_t b = 0; b < l; ++b)
                bump(out.provider_ic, inst.expected_payment(b, sol.x[t][a]) - sol.phi(t, a) * inst.costs[b] - own);
        }
    }
    auto utility = [&](std::size_t t, std::size_t shown) {
        Rational u = 0;
        for (std::size_t a = 0; a < l; ++a)
            u += sol.phi(shown, a) * inst.expected_reward(a, t) - inst.expected_payment(a, sol.x[shown][a]);
        return u;
    };
    for (std::size_t t = 0; t < n; ++t) {
        const Rational own = utility(t, t);
        bump(out.user_ir, -own);
        for (std::size_t s = 0; s < n; ++s) bump(out.user_ic, utility(t, s) - own);
    }
    return out;
}

/// Exact optimum of the relaxation. Variables x[t][a][w] with F_a(w) = 0 only tighten provider IC,
/// so they are fixed at zero.
inline RelaxedSolution solve_randomized_lp(const DelegationInstance& inst) {
    const std::size_t n = inst.num_types(), l = inst.num_actions(), m = inst.num_outcomes();
    auto phi_var = [&](std::size_t t, std::size_t a) { return t * (l + 1) + a; };
    std::vector<std::vector<std::vector<std::size_t>>> xvar(
        n, std::vector<std::vector<std::size_t>>(l, std::vector<std::size_t>(m, SIZE_MAX)));
    std::size_t count = n * (l + 1);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t w = 0; w < m; ++w)
                if (inst.F(w, a) != 0) xvar[t][a][w] = count++;
    LinearProgram lp(count);

    // objective
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t a = 0; a < l; ++a) {
            lp.set_objective_coef(phi_var(t, a), -inst.type_dist[t] * inst.costs[a]);
            for (std::size_t w = 0; w < m; ++w)
                if (xvar[t][a][w] != SIZE_MAX) lp.set_objective_coef(xvar[t][a][w], inst.type_dist[t] * inst.F(w, a));
        }
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<Term> sum;
        for (std::size_t a = 0; a <= l; ++a) sum.push_back({phi_var(t, a), Rational(1)});
        lp.add_constraint(std::move(sum), Relation::kEqual, Rational(1));
    }
    // provider IC per (t, a, a')
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t b = 0; b < l; ++b) {
                if (a == b) continue;
                std::vector<Term> terms;
                for (std::size_t w = 0; w < m; ++w) {
                    if (xvar[t][a][w] == SIZE_MAX) continue;
                    Rational d = inst.F(w, a) - inst.F(w, b);
                    if (d != 0) terms.push_back({xvar[t][a][w], std::move(d)});
                }
                Rational c = inst.costs[b] - inst.costs[a];
                if (c != 0) terms.push_back({phi_var(t, a), std::move(c)});
                lp.add_constraint(std::move(terms), Relation::kGreaterEqual, Rational(0));
            }
    // utility of type t for the scheme shown to type s, as terms
    auto utility_terms = [&](std::size_t t, std::size_t s, const Rational& sign, std::vector<Term>& terms) {
        for (std::size_t a = 0; a < l; ++a) {
            Rational r = inst.expected_reward(a, t);
            if (r != 0) terms.push_back({phi_var(s, a), sign * r});
            for (std::size_t w = 0; w < m; ++w)
                if (xvar[s][a][w] != SIZE_MAX) terms.push_back({xvar[s][a][w], -sign * inst.F(w, a)});
        }
    };
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<Term> ir;
        utility_terms(t, t, Rational(1), ir);
        lp.add_constraint(std::move(ir), Relation::kGreaterEqual, Rational(0));
        for (std::size_t s = 0; s < n; ++s) {
            if (s == t) continue;
            std::vector<Term> ic;
            utility_terms(t, t, Rational(1), ic);
            utility_terms(t, s, Rational(-1), ic);
            lp.add_constraint(std::move(ic), Relation::kGreaterEqual, Rational(0));
        }
    }
    auto res = solve_lp(lp);
    if (res.status != LpStatus::kOptimal)
        throw std::logic_error(std::string("randomized relaxation returned ") + to_string(res.status));

    RelaxedSolution sol;
    sol.phi = Matrix(n, l + 1);
    sol.x.assign(n, std::vector<Vector>(l, Vector(m)));
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t a = 0; a <= l; ++a) sol.phi(t, a) = res.x[phi_var(t, a)];
        for (std::size_t a = 0; a < l; ++a)
            for (std::size_t w = 0; w < m; ++w)
                if (xvar[t][a][w] != SIZE_MAX) sol.x[t][a][w] = res.x[xvar[t][a][w]];
    }
    sol.value = res.value;
    return sol;
}

/// Moves the payment mass of every (t, a) with phi(t, a) = 0 onto the lowest-index action t plays,
/// spread uniformly over outcomes so that expected payments are unchanged.
inline RelaxedSolution regularize(const DelegationInstance& inst, const RelaxedSolution& sol) {
    const std::size_t n = inst.num_types(), l = inst.num_actions(), m = inst.num_outcomes();
    if (!check_relaxed(inst, sol).feasible()) throw InfeasibleError("regularize needs a feasible relaxed solution");
    RelaxedSolution out = sol;
    for (std::size_t t = 0; t < n; ++t) {
        Rational moved = 0;
        bool irregular = false;
        for (std::size_t a = 0; a < l; ++a) {
            if (sol.phi(t, a) != 0) continue;
            bool mass = false;
            for (const auto& v : sol.x[t][a]) mass = mass || v != 0;
            if (!mass) continue;
            irregular = true;
            moved += inst.expected_payment(a, sol.x[t][a]);
            out.x[t][a].assign(m, Rational(0));
        }
        if (!irregular) continue;
        std::size_t hat = l;
        for (std::size_t a = 0; a < l && hat == l; ++a)
            if (sol.phi(t, a) > 0) hat = a;
        if (hat == l) throw InfeasibleError("type " + inst.types[t] + " has payment mass but never plays an action");
        for (auto& v : out.x[t][hat]) v += moved;
    }
    out.value = relaxed_value(inst, out);
    return out;
}

/// p = x / phi wherever phi > 0.
inline RandomizedMenu recover_menu(const DelegationInstance& inst, const RelaxedSolution& sol) {
    if (!sol.is_regular()) throw std::invalid_argument("recover_menu needs a regular solution");
    const std::size_t n = inst.num_types(), l = inst.num_actions(), m = inst.num_outcomes();
    RandomizedMenu menu;
    menu.phi = sol.phi;
    menu.payments.assign(n, std::vector<Vector>(l, Vector(m)));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t a = 0; a < l; ++a) {
            if (sol.phi(t, a) == 0) continue;
            for (std::size_t w = 0; w < m; ++w) menu.payments[t][a][w] = sol.x[t][a][w] / sol.phi(t, a);
        }
    return menu;
}

struct RandomizedReport {
    Rational provider_ic, user_ic, user_ir, distribution, negativity;
    Rational value;

    bool ok() const {
        return provider_ic == 0 && user_ic == 0 && user_ir == 0 && distribution == 0 && negativity == 0;
    }
};

/// Exact largest violation per constraint family of the randomized-menu program, and the menu value.
inline RandomizedReport verify_randomized(const DelegationInstance& inst, const RandomizedMenu& menu) {
    const std::size_t n = inst.num_types(), l = inst.num_actions();
    RandomizedReport rep;
    auto bump = [](Rational& slot, const Rational& v) {
        if (v > slot) slot = v;
    };
    if (menu.phi.rows() != n || menu.phi.cols() != l + 1 || menu.payments.size() != n)
        throw std::invalid_argument("randomized menu dimensions do not match the instance");
    for (std::size_t t = 0; t < n; ++t) {
        Rational total = 0;
        for (std::size_t a = 0; a <= l; ++a) {
            bump(rep.negativity, -menu.phi(t, a));
            total += menu.phi(t, a);
        }
        bump(rep.distribution, abs(total - 1));
        Rational per = 0;
        for (std::size_t a = 0; a < l; ++a) {
            const Vector& p = menu.payments[t][a];
            for (const auto& v : p) bump(rep.negativity, -v);
            const Rational own = menu.phi(t, a) * (inst.expected_payment(a, p) - inst.costs[a]);
            per += own;
            for (std::size_t b = 0; b < l; ++b)
                bump(rep.provider_ic, menu.phi(t, a) * (inst.expected_payment(b, p) - inst.costs[b]) - own);
        }
        rep.value += inst.type_dist[t] * per;
    }
    auto utility = [&](std::size_t t, std::size_t shown) {
        Rational u = 0;
        for (std::size_t a = 0; a < l; ++a)
            u += menu.phi(shown, a) * (inst.expected_reward(a, t) - inst.expected_payment(a, menu.payments[shown][a]));
        return u;
    };
    for (std::size_t t = 0; t < n; ++t) {
        const Rational own = utility(t, t);
        bump(rep.user_ir, -own);
        for (std::size_t s = 0; s < n; ++s) bump(rep.user_ic, utility(t, s) - own);
    }
    return rep;
}

}  // namespace delegate
