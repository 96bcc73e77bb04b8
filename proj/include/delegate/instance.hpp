#pragma once

#include "delegate/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

namespace delegate {

/// Index sentinel for the opt-out option.
inline constexpr std::size_t kOptOut = std::numeric_limits<std::size_t>::max();

/// Types, outcome distributions F (m x l, one column per action), rewards R (m x n, one column per type), costs.
struct DelegationInstance {
    std::vector<std::string> types;
    std::vector<std::string> outcomes;
    std::vector<std::string> actions;
    Vector type_dist;
    Matrix F;
    Matrix R;
    Vector costs;
    // Continuous pipelines additionally need every cost in [0, 1].
    bool bounded_costs = false;

    std::size_t num_types() const noexcept { return types.size(); }
    std::size_t num_outcomes() const noexcept { return outcomes.size(); }
    std::size_t num_actions() const noexcept { return actions.size(); }

    /// F_a^T R_theta
    Rational expected_reward(std::size_t action, std::size_t type) const {
        Rational s = 0;
        for (std::size_t w = 0; w < num_outcomes(); ++w) s += F(w, action) * R(w, type);
        return s;
    }

    /// F_a^T p
    Rational expected_payment(std::size_t action, const Vector& p) const {
        Rational s = 0;
        for (std::size_t w = 0; w < num_outcomes(); ++w) s += F(w, action) * p[w];
        return s;
    }

    friend bool operator==(const DelegationInstance&, const DelegationInstance&) = default;
};

struct PaymentScheme {
    std::size_t action = kOptOut;
    Vector payments;

    bool opt_out() const noexcept { return action == kOptOut; }
    friend bool operator==(const PaymentScheme&, const PaymentScheme&) = default;
};

enum class MenuKind { kDirect, kIndirect };

struct DeterministicMenu {
    std::vector<PaymentScheme> schemes;
    MenuKind kind = MenuKind::kIndirect;

    friend bool operator==(const DeterministicMenu&, const DeterministicMenu&) = default;
};

/// phi(t, a) over actions plus a final opt-out column; payments[t][a] is the vector paid for action a.
struct RandomizedMenu {
    Matrix phi;
    std::vector<std::vector<Vector>> payments;

    std::size_t opt_out_column() const noexcept { return phi.cols() - 1; }
    friend bool operator==(const RandomizedMenu&, const RandomizedMenu&) = default;
};

struct ValidationReport {
    std::vector<std::string> issues;

    bool ok() const noexcept { return issues.empty(); }
};

inline ValidationReport validate_instance(const DelegationInstance& inst) {
    ValidationReport rep;
    auto issue = [&](std::string s) { rep.issues.push_back(std::move(s)); };
    const std::size_t n = inst.num_types(), m = inst.num_outcomes(), l = inst.num_actions();

    if (n == 0) issue("no types");
    if (m == 0) issue("no outcomes");
    if (l == 0) issue("no actions");
    auto unique = [&](const std::vector<std::string>& ids, const char* what) {
        std::set<std::string> seen(ids.begin(), ids.end());
        if (seen.size() != ids.size()) issue(std::string("duplicate ") + what + " identifier");
    };
    unique(inst.types, "type");
    unique(inst.outcomes, "outcome");
    unique(inst.actions, "action");

    if (inst.type_dist.size() != n) issue("type distribution length differs from type count");
    if (inst.F.rows() != m || inst.F.cols() != l) issue("outcome matrix F must be outcomes x actions");
    if (inst.R.rows() != m || inst.R.cols() != n) issue("reward matrix R must be outcomes x types");
    if (inst.costs.size() != l) issue("cost vector length differs from action count");
    if (!rep.ok()) return rep;

    Rational total = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (inst.type_dist[t] < 0) issue("type distribution entry " + inst.types[t] + " is negative");
        total += inst.type_dist[t];
    }
    if (total != 1) issue("type distribution sums to " + format_rational(total) + ", not 1");

    for (std::size_t a = 0; a < l; ++a) {
        Rational col = 0;
        bool negative = false;
        for (std::size_t w = 0; w < m; ++w) {
            negative = negative || inst.F(w, a) < 0;
            col += inst.F(w, a);
        }
        if (negative) issue("column-stochasticity: F column " + inst.actions[a] + " has a negative entry");
        if (col != 1)
            issue("column-stochasticity: F column " + inst.actions[a] + " sums to " + format_rational(col));
    }
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t w = 0; w < m; ++w)
            if (inst.R(w, t) < 0 || inst.R(w, t) > 1)
                issue("reward range: R(" + inst.outcomes[w] + ", " + inst.types[t] + ") = " +
                      format_rational(inst.R(w, t)) + " outside [0, 1]");
    for (std::size_t a = 0; a < l; ++a) {
        if (inst.costs[a] < 0) issue("cost of " + inst.actions[a] + " is negative");
        if (inst.bounded_costs && inst.costs[a] > 1) issue("cost of " + inst.actions[a] + " exceeds 1");
    }
    return rep;
}

/// Builds a fully labelled instance with generated identifiers t1.., w1.., a1...
inline DelegationInstance make_instance(Vector type_dist, Matrix F, Matrix R, Vector costs) {
    DelegationInstance inst;
    for (std::size_t t = 0; t < type_dist.size(); ++t) inst.types.push_back("t" + std::to_string(t + 1));
    for (std::size_t w = 0; w < F.rows(); ++w) inst.outcomes.push_back("w" + std::to_string(w + 1));
    for (std::size_t a = 0; a < F.cols(); ++a) inst.actions.push_back("a" + std::to_string(a + 1));
    inst.type_dist = std::move(type_dist);
    inst.F = std::move(F);
    inst.R = std::move(R);
    inst.costs = std::move(costs);
    return inst;
}

// Menu selection on payment vectors --------------------------------------------------------------

/// Option chosen by a user type: the user's best response with ties resolved for the provider.
struct MenuChoice {
    std::size_t scheme = kOptOut;
    Rational user_utility;
    Rational provider_utility;
};

/// Best response of `type`; OPT_OUT slots of the menu are not options.
inline MenuChoice select_scheme(const DelegationInstance& inst, const DeterministicMenu& menu, std::size_t type) {
    MenuChoice best;
    bool found = false;
    for (std::size_t i = 0; i < menu.schemes.size(); ++i) {
        const auto& s = menu.schemes[i];
        if (s.opt_out()) continue;
        Rational pay = inst.expected_payment(s.action, s.payments);
        Rational user = inst.expected_reward(s.action, type) - pay;
        Rational provider = pay - inst.costs[s.action];
        if (!found || user > best.user_utility ||
            (user == best.user_utility && provider > best.provider_utility)) {
            best = {i, std::move(user), std::move(provider)};
            found = true;
        }
    }
    if (!found || best.user_utility < 0) return {kOptOut, Rational(0), Rational(0)};
    return best;
}

/// Expected provider utility when every type best-responds to the menu.
inline Rational evaluate_menu(const DelegationInstance& inst, const DeterministicMenu& menu) {
    Rational v = 0;
    for (std::size_t t = 0; t < inst.num_types(); ++t)
        v += inst.type_dist[t] * select_scheme(inst, menu, t).provider_utility;
    return v;
}

}  // namespace delegate
