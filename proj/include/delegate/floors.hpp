#pragma once

// Price floors: the set of expected payments q = F_a^T p under which action a
// is an (eps-)best response for the provider is a ray [floor, +inf).

#include "delegate/instance.hpp"
#include "delegate/solvers.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace delegate {

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PriceFloor {
    std::size_t action = 0;
    Rational epsilon;
    std::vector<std::size_t> action_set;
    // Empty when no payment vector makes the action an eps-best response.
    std::optional<Rational> floor;

    bool implementable() const noexcept { return floor.has_value(); }
    const Rational& value() const {
        if (!floor) throw InfeasibleError("action cannot be induced by any payment vector");
        return *floor;
    }
};

inline std::vector<std::size_t> all_actions(const DelegationInstance& inst) {
    std::vector<std::size_t> out(inst.num_actions());
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
}

namespace detail {

inline void check_floor_args(const DelegationInstance& inst, std::size_t a, const Rational& eps,
                             const std::vector<std::size_t>& action_set) {
    if (eps < 0) throw std::invalid_argument("floor relaxation must be nonnegative");
    bool member = false;
    for (std::size_t x : action_set) {
        if (x >= inst.num_actions()) throw std::invalid_argument("action set references an unknown action");
        member = member || x == a;
    }
    if (!member) throw std::invalid_argument("action is not in the action set");
}

// Rows (F_a - F_a')^T p >= c_a - c_a' - eps over variables p_0..p_{m-1}.
inline void add_provider_ic_rows(LinearProgram& lp, const DelegationInstance& inst, std::size_t a,
                                 const Rational& eps, const std::vector<std::size_t>& action_set) {
    for (std::size_t b : action_set) {
        if (b == a) continue;
        std::vector<Term> terms;
        for (std::size_t w = 0; w < inst.num_outcomes(); ++w) {
            Rational d = inst.F(w, a) - inst.F(w, b);
            if (d != 0) terms.push_back({w, std::move(d)});
        }
        lp.add_constraint(std::move(terms), Relation::kGreaterEqual, inst.costs[a] - inst.costs[b] - eps);
    }
}

}  // namespace detail

/// Smallest expected payment that eps-induces action a against the actions in action_set.
inline PriceFloor compute_floor(const DelegationInstance& inst, std::size_t a, const Rational& eps,
                                const std::vector<std::size_t>& action_set) {
    detail::check_floor_args(inst, a, eps, action_set);
    PriceFloor out{a, eps, action_set, std::nullopt};
    bool only_self = true;
    for (std::size_t b : action_set) only_self = only_self && b == a;
    if (only_self) {
        out.floor = Rational(0);
        return out;
    }
    const std::size_t m = inst.num_outcomes();
    LinearProgram lp(m);
    for (std::size_t w = 0; w < m; ++w) lp.set_objective_coef(w, -inst.F(w, a));
    detail::add_provider_ic_rows(lp, inst, a, eps, action_set);
    auto res = solve_lp(lp);
    if (res.status == LpStatus::kUnbounded) throw std::logic_error("floor LP is unbounded below zero");
    if (res.status == LpStatus::kOptimal) out.floor = -res.value;
    return out;
}

inline PriceFloor compute_floor(const DelegationInstance& inst, std::size_t a, const Rational& eps) {
    return compute_floor(inst, a, eps, all_actions(inst));
}

/// Thread-safe memo of compute_floor keyed by (action, eps, action set).
class FloorCache {
public:
    explicit FloorCache(const DelegationInstance& inst) : inst_(&inst) {}

    PriceFloor get(std::size_t a, const Rational& eps, const std::vector<std::size_t>& action_set) {
        Key key{a, eps, action_set};
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        PriceFloor f = compute_floor(*inst_, a, eps, action_set);
        std::lock_guard<std::mutex> lock(mu_);
        return cache_.emplace(std::move(key), std::move(f)).first->second;
    }

    PriceFloor get(std::size_t a, const Rational& eps) { return get(a, eps, all_actions(*inst_)); }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return cache_.size();
    }

private:
    struct Key {
        std::size_t action;
        Rational eps;
        std::vector<std::size_t> set;
        bool operator<(const Key& o) const {
            if (action != o.action) return action < o.action;
            if (eps != o.eps) return eps < o.eps;
            return set < o.set;
        }
    };

    const DelegationInstance* inst_;
    mutable std::mutex mu_;
    std::map<Key, PriceFloor> cache_;
};

/// Largest gain max_{a'} (F_{a'}^T p - c_{a'}) - (F_a^T p - c_a) from deviating, with the deviation.
struct ProviderDeviation {
    Rational gain;
    std::size_t deviation = kOptOut;
};

inline ProviderDeviation provider_deviation(const DelegationInstance& inst, std::size_t a, const Vector& p,
                                            const std::vector<std::size_t>& action_set) {
    const Rational own = inst.expected_payment(a, p) - inst.costs[a];
    ProviderDeviation best{Rational(0), kOptOut};
    for (std::size_t b : action_set) {
        if (b == a) continue;
        Rational gain = inst.expected_payment(b, p) - inst.costs[b] - own;
        if (gain > best.gain) best = {std::move(gain), b};
    }
    return best;
}

inline ProviderDeviation provider_deviation(const DelegationInstance& inst, std::size_t a, const Vector& p) {
    return provider_deviation(inst, a, p, all_actions(inst));
}

/// A payment vector with F_a^T p = q that eps-induces a; minimizes max_w p_w, then sum_w p_w.
inline Vector reconstruct_payment(const DelegationInstance& inst, std::size_t a, const Rational& q,
                                  const Rational& eps, const std::vector<std::size_t>& action_set) {
    detail::check_floor_args(inst, a, eps, action_set);
    const std::size_t m = inst.num_outcomes();
    auto build = [&](const std::optional<Rational>& cap) {
        LinearProgram lp(m + 1);
        std::vector<Term> pay;
        for (std::size_t w = 0; w < m; ++w)
            if (inst.F(w, a) != 0) pay.push_back({w, inst.F(w, a)});
        lp.add_constraint(std::move(pay), Relation::kEqual, q);
        detail::add_provider_ic_rows(lp, inst, a, eps, action_set);
        for (std::size_t w = 0; w < m; ++w)
            lp.add_constraint({{w, Rational(1)}, {m, Rational(-1)}}, Relation::kLessEqual, Rational(0));
        if (cap) {
            lp.add_constraint({{m, Rational(1)}}, Relation::kLessEqual, *cap);
            for (std::size_t w = 0; w < m; ++w) lp.set_objective_coef(w, Rational(-1));
        } else {
            lp.set_objective_coef(m, Rational(-1));
        }
        return solve_lp(lp);
    };
    auto first = build(std::nullopt);
    if (first.status != LpStatus::kOptimal)
        throw InfeasibleError("expected payment " + format_rational(q) + " is below the floor of action " +
                              inst.actions[a]);
    auto second = build(first.x[m]);
    if (second.status != LpStatus::kOptimal) throw std::logic_error("payment refinement LP failed");
    second.x.resize(m);
    return second.x;
}

inline Vector reconstruct_payment(const DelegationInstance& inst, std::size_t a, const Rational& q,
                                  const Rational& eps) {
    return reconstruct_payment(inst, a, q, eps, all_actions(inst));
}

/// Whether q - eps_shift still eps+eps_shift-induces a (always true for valid inputs).
inline bool check_q_shift(const DelegationInstance& inst, std::size_t a, const Rational& q, const Rational& eps,
                          const Rational& eps_shift) {
    if (eps_shift < 0 || eps_shift > q) throw std::invalid_argument("shift must lie in [0, q]");
    auto base = compute_floor(inst, a, eps);
    if (!base.implementable() || q < *base.floor) throw std::invalid_argument("q is not an eps-feasible payment");
    auto shifted = compute_floor(inst, a, eps + eps_shift);
    return shifted.implementable() && q - eps_shift >= *shifted.floor;
}

}  // namespace delegate
