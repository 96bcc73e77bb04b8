#pragma once

// Reimbursement transform: menus that stay good when the users' rewards are only
// known up to an additive error delta.

#include "delegate/floors.hpp"
#include "delegate/instance.hpp"
#include "delegate/pricing.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace delegate {

struct RobustnessParams {
    Rational delta;  // user-side slack
    Rational eps;    // provider-side slack of the input menu
    unsigned sqrt_bits = 48;

    void validate() const {
        if (delta < 0 || eps < 0) throw std::invalid_argument("delta and eps must be nonnegative");
    }
    /// Rational lower bound on sqrt(delta); exact when delta is a perfect square.
    Rational alpha() const { return sqrt_lower(delta, sqrt_bits); }
    /// Schemes with margin m are kept iff m >= sqrt(2 delta), decided exactly.
    bool keeps(const Rational& margin) const { return margin >= 0 && margin * margin >= 2 * delta; }
};

struct RobustifiedMenu {
    PricingSolution solution;
    std::vector<std::size_t> kept;  // input item index of each output item
    Rational alpha;
    Rational provider_eps;          // eps + alpha
    std::vector<std::string> warnings;
};

/// Drops schemes with margin below sqrt(2 delta) and lowers each remaining price by alpha times its margin.
/// Only F and c of `inst` are read (for the relaxed floors); rewards never enter.
inline RobustifiedMenu robustify(const DelegationInstance& inst, const PricingSolution& menu,
                                 const RobustnessParams& params) {
    params.validate();
    RobustifiedMenu out;
    out.alpha = params.alpha();
    out.provider_eps = params.eps + out.alpha;
    const std::size_t n = menu.own_value.rows();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < menu.size(); ++i) {
        const auto& it = menu.items[i];
        if (it.opt_out()) continue;
        auto base = compute_floor(inst, it.action, params.eps);
        if (!base.implementable() || it.price < *base.floor)
            throw PreconditionError("price of item " + std::to_string(i) + " is below the floor of action " +
                                    inst.actions[it.action] + " at the given eps");
        const Rational margin = it.price - it.cost;
        if (margin > 1)
            out.warnings.push_back("item " + std::to_string(i) + " has margin " + format_rational(margin) +
                                   " above 1; its rebate exceeds sqrt(delta)");
        if (params.keeps(margin)) keep.push_back(i);
    }
    out.solution.own_value = Matrix(n, keep.empty() ? 1 : keep.size());
    out.solution.other_value = Matrix(n, keep.empty() ? 1 : keep.size());
    if (keep.empty()) {
        out.solution.items.push_back(PricedItem{});
        return out;
    }
    for (std::size_t j = 0; j < keep.size(); ++j) {
        const auto& it = menu.items[keep[j]];
        PricedItem item = it;
        item.price = it.price - out.alpha * (it.price - it.cost);
        item.eps = out.provider_eps;
        item.floor = compute_floor(inst, it.action, out.provider_eps).value();
        for (std::size_t t = 0; t < n; ++t) {
            out.solution.own_value(t, j) = menu.own_value(t, keep[j]);
            out.solution.other_value(t, j) = menu.other_value(t, keep[j]);
        }
        out.solution.items.push_back(std::move(item));
    }
    out.kept = std::move(keep);
    return out;
}

/// The same items valued with the rewards of `inst_true`.
inline PricingSolution revalue(const DelegationInstance& inst_true, const PricingSolution& menu) {
    PricingSolution out = menu;
    const std::size_t n = inst_true.num_types();
    out.own_value = Matrix(n, menu.size());
    for (std::size_t i = 0; i < menu.size(); ++i) {
        if (menu.items[i].opt_out()) continue;
        for (std::size_t t = 0; t < n; ++t) out.own_value(t, i) = inst_true.expected_reward(menu.items[i].action, t);
    }
    out.other_value = out.own_value;
    return out;
}

/// Provider utility when users best-respond with their true rewards.
inline Rational true_response_value(const DelegationInstance& inst_true, const PricingSolution& menu) {
    return evaluate(revalue(inst_true, menu), inst_true.type_dist);
}

struct ApproxICReport {
    Rational user_ic;      // max over types of (best alternative utility - assigned utility)
    Rational user_ir;      // max over types of -(assigned utility)
    Rational provider_ic;  // max over items of (exact floor - price)
};

/// Exact approximate-IC slacks of `menu` against `inst_true`. Without an assignment each type takes its
/// true best response, which makes the user slacks zero.
inline ApproxICReport verify_approx(const DelegationInstance& inst_true, const PricingSolution& menu,
                                   const std::optional<std::vector<std::size_t>>& assignment = std::nullopt) {
    const std::size_t n = inst_true.num_types();
    ApproxICReport rep;
    for (const auto& it : menu.items) {
        if (it.opt_out()) continue;
        auto f = compute_floor(inst_true, it.action, Rational(0));
        if (!f.implementable()) throw InfeasibleError("action " + inst_true.actions[it.action] + " cannot be induced");
        if (*f.floor - it.price > rep.provider_ic) rep.provider_ic = *f.floor - it.price;
    }
    std::vector<std::size_t> pick(n);
    if (assignment) {
        if (assignment->size() != n) throw std::invalid_argument("assignment needs one entry per type");
        pick = *assignment;
    } else {
        const PricingSolution truth = revalue(inst_true, menu);
        for (std::size_t t = 0; t < n; ++t) pick[t] = select(truth, t).item;
    }
    auto utility = [&](std::size_t t, std::size_t i) -> Rational {
        if (i == kOptOut) return 0;
        if (i >= menu.size()) throw std::invalid_argument("assignment references an unknown item");
        const auto& it = menu.items[i];
        if (it.opt_out()) return 0;
        return inst_true.expected_reward(it.action, t) - it.price;
    };
    for (std::size_t t = 0; t < n; ++t) {
        const Rational own = utility(t, pick[t]);
        if (-own > rep.user_ir) rep.user_ir = -own;
        for (std::size_t j = 0; j < menu.size(); ++j)
            if (utility(t, j) - own > rep.user_ic) rep.user_ic = utility(t, j) - own;
    }
    return rep;
}

/// Sum of the loss terms 2 sqrt(delta) + sqrt(2 delta), rounded up.
inline Rational robustness_loss_bound(const Rational& delta, unsigned bits = 48) {
    return 2 * sqrt_upper(delta, bits) + sqrt_upper(2 * delta, bits);
}

}  // namespace delegate
