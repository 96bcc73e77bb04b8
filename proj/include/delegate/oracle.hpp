#pragma once

// Brute-force reference optimizer. For every action tuple and every
// assignment of types to items (or opt-out) it solves an LP directly over
// payment vectors, so it shares no code path with the hyperplane enumeration
// in pricing.hpp. Each LP optimum is scored by the realized best responses of
// the users; the LP also asks every used scheme for a nonnegative provider
// margin, which loses nothing (an optimal menu can always be chosen that way)
// and makes the best realized score equal the optimum.

#include "delegate/floors.hpp"
#include "delegate/instance.hpp"
#include "delegate/solvers.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace delegate {

class SizeGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    Rational value;
    std::vector<std::size_t> actions;     // the tuple a_1..a_k
    std::vector<std::size_t> assignment;  // type -> item index or kOptOut
    Vector prices;                        // expected payment per item (0 for unused items)
    DeterministicMenu menu;               // schemes of the used items
    std::size_t enumerated = 0;
    // Realized value equals the LP value of the witness assignment.
    bool consistent = true;
};

inline constexpr double kDefaultOracleGuard = 1e6;

inline double oracle_work(const DelegationInstance& inst, std::size_t k) {
    return std::pow(static_cast<double>(inst.num_actions()), static_cast<double>(k)) *
           std::pow(static_cast<double>(k + 1), static_cast<double>(inst.num_types()));
}

inline OracleResult brute_force_opt_k(const DelegationInstance& inst, std::size_t k,
                                      double guard = kDefaultOracleGuard) {
    if (k < 1) throw std::invalid_argument("menu size k must be at least 1");
    if (oracle_work(inst, k) > guard)
        throw SizeGuardError("oracle would solve about " + std::to_string(static_cast<long long>(oracle_work(inst, k))) +
                             " LPs, above the limit of " + std::to_string(static_cast<long long>(guard)));
    const std::size_t n = inst.num_types(), m = inst.num_outcomes(), l = inst.num_actions();

    OracleResult best;
    best.value = 0;
    best.actions.assign(k, 0);
    best.assignment.assign(n, kOptOut);
    best.prices.assign(k, Rational(0));
    best.menu.schemes.push_back({kOptOut, Vector(m)});

    std::vector<std::size_t> tuple(k, 0);
    std::vector<std::size_t> f(n, 0);  // value k means opt-out
    for (;;) {
        std::fill(f.begin(), f.end(), 0);
        for (;;) {
            ++best.enumerated;
            std::vector<bool> used(k, false);
            for (std::size_t t = 0; t < n; ++t)
                if (f[t] < k) used[f[t]] = true;
            std::vector<std::size_t> items;
            std::vector<std::size_t> var_base(k, 0);
            for (std::size_t i = 0; i < k; ++i)
                if (used[i]) {
                    var_base[i] = items.size() * m;
                    items.push_back(i);
                }
            if (!items.empty()) {
                LinearProgram lp(items.size() * m);
                auto pay_terms = [&](std::size_t i, const Rational& scale, std::vector<Term>& terms) {
                    for (std::size_t w = 0; w < m; ++w)
                        if (inst.F(w, tuple[i]) != 0) terms.push_back({var_base[i] + w, scale * inst.F(w, tuple[i])});
                };
                for (std::size_t i : items) {
                    const std::size_t a = tuple[i];
                    for (std::size_t b = 0; b < l; ++b) {
                        if (b == a) continue;
                        std::vector<Term> terms;
                        for (std::size_t w = 0; w < m; ++w) {
                            Rational d = inst.F(w, a) - inst.F(w, b);
                            if (d != 0) terms.push_back({var_base[i] + w, std::move(d)});
                        }
                        lp.add_constraint(std::move(terms), Relation::kGreaterEqual, inst.costs[a] - inst.costs[b]);
                    }
                    std::vector<Term> margin;
                    pay_terms(i, Rational(1), margin);
                    lp.add_constraint(std::move(margin), Relation::kGreaterEqual, inst.costs[a]);
                }
                for (std::size_t t = 0; t < n; ++t) {
                    if (f[t] == k) {
                        // Opting out: no used item gives positive utility.
                        for (std::size_t j : items) {
                            std::vector<Term> terms;
                            pay_terms(j, Rational(1), terms);
                            lp.add_constraint(std::move(terms), Relation::kGreaterEqual,
                                              inst.expected_reward(tuple[j], t));
                        }
                        continue;
                    }
                    const std::size_t i = f[t];
                    const Rational own = inst.expected_reward(tuple[i], t);
                    std::vector<Term> ir;
                    pay_terms(i, Rational(1), ir);
                    lp.add_constraint(std::move(ir), Relation::kLessEqual, own);
                    for (std::size_t j : items) {
                        if (j == i) continue;
                        // own - F_i p_i >= other - F_j p_j
                        std::vector<Term> ic;
                        pay_terms(i, Rational(1), ic);
                        pay_terms(j, Rational(-1), ic);
                        lp.add_constraint(std::move(ic), Relation::kLessEqual,
                                          own - inst.expected_reward(tuple[j], t));
                    }
                    for (std::size_t w = 0; w < m; ++w)
                        if (inst.F(w, tuple[i]) != 0) {
                            Rational c = lp.objective()[var_base[i] + w] + inst.type_dist[t] * inst.F(w, tuple[i]);
                            lp.set_objective_coef(var_base[i] + w, std::move(c));
                        }
                }
                auto res = solve_lp(lp);
                if (res.status == LpStatus::kUnbounded) throw std::logic_error("oracle LP is unbounded");
                if (res.status == LpStatus::kOptimal) {
                    DeterministicMenu menu;
                    Vector prices(k);
                    for (std::size_t i : items) {
                        Vector p(res.x.begin() + static_cast<std::ptrdiff_t>(var_base[i]),
                                 res.x.begin() + static_cast<std::ptrdiff_t>(var_base[i] + m));
                        prices[i] = inst.expected_payment(tuple[i], p);
                        menu.schemes.push_back({tuple[i], std::move(p)});
                    }
                    Rational lp_value = res.value;
                    for (std::size_t t = 0; t < n; ++t)
                        if (f[t] < k) lp_value -= inst.type_dist[t] * inst.costs[tuple[f[t]]];
                    Rational realized = evaluate_menu(inst, menu);
                    if (realized > best.value) {
                        best.value = realized;
                        best.actions = tuple;
                        best.assignment.assign(n, kOptOut);
                        for (std::size_t t = 0; t < n; ++t)
                            if (f[t] < k) best.assignment[t] = f[t];
                        best.prices = std::move(prices);
                        best.menu = std::move(menu);
                        best.consistent = realized == lp_value;
                    }
                }
            }
            std::size_t pos = 0;
            while (pos < n && ++f[pos] == k + 1) f[pos++] = 0;
            if (pos == n) break;
        }
        std::size_t pos = 0;
        while (pos < k && ++tuple[pos] == l) tuple[pos++] = 0;
        if (pos == k) break;
    }
    return best;
}

// Menu verification --------------------------------------------------------------------------------

struct MenuViolation {
    std::string constraint;
    std::size_t scheme = kOptOut;
    std::size_t other = kOptOut;  // deviating action, or the scheme/type compared against
    Rational amount;
};

struct MenuReport {
    std::vector<MenuViolation> violations;
    std::vector<MenuChoice> choices;
    Rational value;
    // For direct menus: expected utility when each type takes its own scheme.
    Rational direct_value;

    bool ok() const noexcept { return violations.empty(); }
};

/// Exact check of provider IC per scheme (up to slack eps), user IC/IR (direct menus), and provider IR of
/// chosen schemes.
inline MenuReport verify_menu(const DelegationInstance& inst, const DeterministicMenu& menu,
                              const Rational& eps = Rational(0)) {
    const std::size_t n = inst.num_types();
    MenuReport rep;
    if (menu.schemes.empty()) rep.violations.push_back({"menu is empty", kOptOut, kOptOut, Rational(0)});
    for (std::size_t i = 0; i < menu.schemes.size(); ++i) {
        const auto& s = menu.schemes[i];
        if (s.opt_out()) continue;
        if (s.action >= inst.num_actions() || s.payments.size() != inst.num_outcomes()) {
            rep.violations.push_back({"malformed scheme", i, kOptOut, Rational(0)});
            continue;
        }
        for (const auto& p : s.payments)
            if (p < 0) rep.violations.push_back({"negative payment", i, kOptOut, p});
        auto dev = provider_deviation(inst, s.action, s.payments);
        if (dev.gain > eps) rep.violations.push_back({"provider IC", i, dev.deviation, dev.gain - eps});
    }
    if (!rep.ok()) return rep;

    auto utility = [&](std::size_t t, const PaymentScheme& s) -> Rational {
        if (s.opt_out()) return 0;
        return inst.expected_reward(s.action, t) - inst.expected_payment(s.action, s.payments);
    };
    if (menu.kind == MenuKind::kDirect) {
        if (menu.schemes.size() != n) {
            rep.violations.push_back({"direct menu size differs from type count", kOptOut, kOptOut, Rational(0)});
            return rep;
        }
        for (std::size_t t = 0; t < n; ++t) {
            const auto& own = menu.schemes[t];
            Rational u = utility(t, own);
            if (u < 0) rep.violations.push_back({"user IR", t, kOptOut, -u});
            for (std::size_t s = 0; s < n; ++s) {
                Rational gain = utility(t, menu.schemes[s]) - u;
                if (gain > 0) rep.violations.push_back({"user IC", t, s, gain});
            }
            if (!own.opt_out())
                rep.direct_value += inst.type_dist[t] * (inst.expected_payment(own.action, own.payments) -
                                                         inst.costs[own.action]);
        }
    }
    for (std::size_t t = 0; t < n; ++t) {
        auto c = select_scheme(inst, menu, t);
        if (c.scheme != kOptOut && c.provider_utility < 0)
            rep.violations.push_back({"provider IR", c.scheme, t, -c.provider_utility});
        rep.value += inst.type_dist[t] * c.provider_utility;
        rep.choices.push_back(std::move(c));
    }
    return rep;
}

}  // namespace delegate
