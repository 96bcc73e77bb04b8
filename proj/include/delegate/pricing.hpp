#pragma once

// Menus in pricing form. Each option is an item (action a_i, expected payment
// q_i); a buyer of type t values item i at own(t, i) and compares it against
// the other items at other(t, j). With own == other == F^T R this is plain
// unit-demand pricing with price floors.
//
// solve_menu_k enumerates candidate price vectors at intersections of k
// hyperplanes of the forms q_i - q_j = d and q_i = v. A set of such
// hyperplanes is linearly independent exactly when the pairs (i, j) and
// (ground, i) it uses form a spanning tree on the items plus a ground node,
// so the default strategy walks spanning trees instead of all k-subsets.
// Besides the floor, valuation and difference hyperplanes, q_i = c_{a_i} is a
// candidate too: an optimal menu never needs a negative margin, and the
// zero-margin face is where that restriction can bind.

#include "delegate/floors.hpp"
#include "delegate/instance.hpp"
#include "delegate/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

namespace delegate {

/// Inputs of the pricing problem, indexed by the instance's actions.
struct PricingModel {
    Vector type_dist;
    Vector costs;
    Matrix own_value;    // types x actions
    Matrix other_value;  // types x actions, entrywise <= own_value
    std::vector<std::optional<Rational>> floors;
    Vector eps;

    std::size_t num_types() const noexcept { return type_dist.size(); }
    std::size_t num_actions() const noexcept { return costs.size(); }
};

/// Default model: values F_a^T R_t and floors at relaxation eps over all actions.
inline PricingModel make_pricing_model(const DelegationInstance& inst, FloorCache& cache,
                                       const Rational& eps = Rational(0)) {
    const std::size_t n = inst.num_types(), l = inst.num_actions();
    PricingModel model;
    model.type_dist = inst.type_dist;
    model.costs = inst.costs;
    model.own_value = Matrix(n, l);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t a = 0; a < l; ++a) model.own_value(t, a) = inst.expected_reward(a, t);
    model.other_value = model.own_value;
    for (std::size_t a = 0; a < l; ++a) model.floors.push_back(cache.get(a, eps).floor);
    model.eps.assign(l, eps);
    return model;
}

inline PricingModel make_pricing_model(const DelegationInstance& inst, const Rational& eps = Rational(0)) {
    FloorCache cache(inst);
    return make_pricing_model(inst, cache, eps);
}

struct PricedItem {
    std::size_t action = kOptOut;
    Rational price;
    Rational cost;
    Rational floor;
    Rational eps;

    bool opt_out() const noexcept { return action == kOptOut; }
};

struct PricingSolution {
    std::vector<PricedItem> items;
    Matrix own_value;    // types x items
    Matrix other_value;  // types x items

    std::size_t size() const noexcept { return items.size(); }
};

/// Items for `actions` priced at `prices`; kOptOut entries become empty slots.
inline PricingSolution make_solution(const PricingModel& model, const std::vector<std::size_t>& actions,
                                     const Vector& prices) {
    if (actions.size() != prices.size()) throw std::invalid_argument("one price per action required");
    const std::size_t n = model.num_types(), k = actions.size();
    PricingSolution sol;
    sol.own_value = Matrix(n, k);
    sol.other_value = Matrix(n, k);
    for (std::size_t i = 0; i < k; ++i) {
        PricedItem item;
        item.action = actions[i];
        item.price = prices[i];
        if (!item.opt_out()) {
            const std::size_t a = actions[i];
            if (a >= model.num_actions()) throw std::invalid_argument("unknown action in pricing solution");
            if (!model.floors[a]) throw InfeasibleError("action cannot be induced by any payment vector");
            item.cost = model.costs[a];
            item.floor = *model.floors[a];
            item.eps = model.eps[a];
            for (std::size_t t = 0; t < n; ++t) {
                sol.own_value(t, i) = model.own_value(t, a);
                sol.other_value(t, i) = model.other_value(t, a);
            }
        }
        sol.items.push_back(std::move(item));
    }
    return sol;
}

struct Selection {
    std::size_t item = kOptOut;
    Rational utility;
    Rational margin;
};

namespace detail {

// Buyer choice given per-item own/other utilities: item i is acceptable when
// own_i >= max(0, max_{j != i} other_j); pick the acceptable item with the
// largest margin, lowest index on ties.
template <class Own, class Other, class Margin, class Skip>
std::size_t choose_item(std::size_t k, Own own, Other other, Margin margin, Skip skip) {
    std::size_t top = kOptOut, second = kOptOut;
    for (std::size_t j = 0; j < k; ++j) {
        if (skip(j)) continue;
        if (top == kOptOut || other(j) > other(top)) {
            second = top;
            top = j;
        } else if (second == kOptOut || other(j) > other(second)) {
            second = j;
        }
    }
    std::size_t best = kOptOut;
    for (std::size_t i = 0; i < k; ++i) {
        if (skip(i)) continue;
        const std::size_t rival = i == top ? second : top;
        if (own(i) < 0) continue;
        if (rival != kOptOut && own(i) < other(rival)) continue;
        if (best == kOptOut || margin(i) > margin(best)) best = i;
    }
    return best;
}

}  // namespace detail

inline Selection select(const PricingSolution& sol, std::size_t type) {
    const auto& it = sol.items;
    std::vector<Rational> own(it.size()), other(it.size()), margin(it.size());
    for (std::size_t i = 0; i < it.size(); ++i) {
        if (it[i].opt_out()) continue;
        own[i] = sol.own_value(type, i) - it[i].price;
        other[i] = sol.other_value(type, i) - it[i].price;
        margin[i] = it[i].price - it[i].cost;
    }
    std::size_t i = detail::choose_item(
        it.size(), [&](std::size_t j) -> const Rational& { return own[j]; },
        [&](std::size_t j) -> const Rational& { return other[j]; },
        [&](std::size_t j) -> const Rational& { return margin[j]; }, [&](std::size_t j) { return it[j].opt_out(); });
    if (i == kOptOut) return {};
    return {i, own[i], margin[i]};
}

inline std::vector<Selection> select_all(const PricingSolution& sol, std::size_t num_types) {
    std::vector<Selection> out;
    for (std::size_t t = 0; t < num_types; ++t) out.push_back(select(sol, t));
    return out;
}

/// Expected seller utility; opting out contributes 0.
inline Rational evaluate(const PricingSolution& sol, const Vector& type_dist) {
    Rational v = 0;
    for (std::size_t t = 0; t < type_dist.size(); ++t) v += type_dist[t] * select(sol, t).margin;
    return v;
}

inline Rational evaluate(const DelegationInstance& inst, const PricingSolution& sol) {
    return evaluate(sol, inst.type_dist);
}

/// Ordinary pricing solution for an instance (values F^T R, floors at eps).
inline PricingSolution make_solution(const DelegationInstance& inst, const std::vector<std::size_t>& actions,
                                     const Vector& prices, const Rational& eps = Rational(0)) {
    return make_solution(make_pricing_model(inst, eps), actions, prices);
}

// Menu search over spanning trees -----------------------------------------------------------

enum class EnumerationStrategy { kSpanningTrees, kSubsets };

struct SolveOptions {
    unsigned threads = 1;
    EnumerationStrategy strategy = EnumerationStrategy::kSpanningTrees;
};

struct TupleStat {
    std::vector<std::size_t> actions;
    std::size_t candidates = 0;
    std::optional<Rational> best_value;
};

struct SolveReport {
    PricingSolution solution;
    Rational value;
    std::vector<Selection> selection;
    std::size_t candidates = 0;
    std::vector<TupleStat> tuples;
};

namespace detail {

struct RationalVectorHash {
    std::size_t operator()(const Vector& v) const noexcept {
        std::size_t h = v.size();
        for (const auto& r : v) {
            std::size_t x = mpz_get_ui(r.get_num_mpz_t()) * 1000003u ^ mpz_get_ui(r.get_den_mpz_t());
            if (r < 0) x = ~x;
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

struct SpanningTree {
    std::vector<std::size_t> order;   // non-ground nodes in BFS order from node 0
    std::vector<std::size_t> parent;  // parent[v] for v in 1..k
};

// All labelled spanning trees on nodes {0..k}, via Pruefer sequences.
inline std::vector<SpanningTree> spanning_trees(std::size_t k) {
    const std::size_t nodes = k + 1;
    std::vector<SpanningTree> out;
    std::vector<std::size_t> seq(nodes >= 2 ? nodes - 2 : 0, 0);
    for (;;) {
        std::vector<std::size_t> degree(nodes, 1);
        for (std::size_t s : seq) ++degree[s];
        std::vector<std::vector<std::size_t>> adj(nodes);
        auto link = [&](std::size_t x, std::size_t y) {
            adj[x].push_back(y);
            adj[y].push_back(x);
        };
        for (std::size_t s : seq) {
            std::size_t leaf = 0;
            while (degree[leaf] != 1) ++leaf;
            link(leaf, s);
            --degree[leaf];
            --degree[s];
        }
        std::size_t u = nodes, v = nodes;
        for (std::size_t x = 0; x < nodes; ++x)
            if (degree[x] == 1) (u == nodes ? u : v) = x;
        link(u, v);

        SpanningTree tree;
        tree.parent.assign(nodes, 0);
        std::vector<bool> seen(nodes, false);
        std::vector<std::size_t> queue{0};
        seen[0] = true;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (std::size_t y : adj[queue[h]])
                if (!seen[y]) {
                    seen[y] = true;
                    tree.parent[y] = queue[h];
                    tree.order.push_back(y);
                    queue.push_back(y);
                }
        out.push_back(std::move(tree));

        std::size_t pos = 0;
        while (pos < seq.size() && ++seq[pos] == nodes) seq[pos++] = 0;
        if (pos == seq.size()) break;
    }
    return out;
}

// Per-tuple state: values, labels, and the best candidate so far.
class TupleSearch {
public:
    TupleSearch(const PricingModel& model, std::vector<std::size_t> actions)
        : model_(model), actions_(std::move(actions)), k_(actions_.size()), n_(model.num_types()) {
        own_.resize(n_ * k_);
        other_.resize(n_ * k_);
        for (std::size_t t = 0; t < n_; ++t)
            for (std::size_t i = 0; i < k_; ++i) {
                own_[t * k_ + i] = model.own_value(t, actions_[i]);
                other_[t * k_ + i] = model.other_value(t, actions_[i]);
            }
        for (std::size_t i = 0; i < k_; ++i) {
            floor_.push_back(*model.floors[actions_[i]]);
            cost_.push_back(model.costs[actions_[i]]);
        }
        ground_.resize(k_);
        for (std::size_t i = 0; i < k_; ++i) {
            std::set<Rational> labels{floor_[i], cost_[i]};
            for (std::size_t t = 0; t < n_; ++t) {
                labels.insert(own(t, i));
                labels.insert(other(t, i));
            }
            for (const auto& v : labels)
                if (v >= floor_[i]) ground_[i].push_back(v);
        }
        diff_.assign(k_ * k_, {});
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < k_; ++j) {
                if (i == j) continue;
                std::set<Rational> d;  // values of q_i - q_j
                for (std::size_t t = 0; t < n_; ++t) {
                    d.insert(own(t, i) - other(t, j));
                    d.insert(other(t, i) - own(t, j));
                }
                if (actions_[i] == actions_[j]) d.insert(Rational(0));
                diff_[i * k_ + j].assign(d.begin(), d.end());
            }
        q_.resize(k_);
        util_own_.resize(k_);
        util_other_.resize(k_);
        margin_.resize(k_);
    }

    void run_trees(const std::vector<SpanningTree>& trees) {
        for (const auto& tree : trees) {
            tree_ = &tree;
            descend(0);
        }
    }

    void run_subsets() {
        struct Plane {
            std::size_t i, j;  // j == k_ for q_i = value
            Rational value;
        };
        std::vector<Plane> planes;
        for (std::size_t i = 0; i < k_; ++i)
            for (const auto& v : ground_[i]) planes.push_back({i, k_, v});
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = i + 1; j < k_; ++j)
                for (const auto& d : diff_[i * k_ + j]) planes.push_back({i, j, d});
        if (planes.size() < k_) return;
        std::vector<std::size_t> pick(k_);
        for (std::size_t x = 0; x < k_; ++x) pick[x] = x;
        std::vector<Hyperplane> system(k_);
        for (;;) {
            for (std::size_t x = 0; x < k_; ++x) {
                const Plane& p = planes[pick[x]];
                system[x].normal.assign(k_, Rational(0));
                system[x].normal[p.i] = 1;
                if (p.j < k_) system[x].normal[p.j] = -1;
                system[x].offset = p.value;
            }
            if (auto q = intersect_hyperplanes(system)) {
                bool ok = true;
                for (std::size_t i = 0; i < k_ && ok; ++i) ok = (*q)[i] >= 0 && (*q)[i] >= floor_[i];
                if (ok) {
                    q_ = std::move(*q);
                    consider();
                }
            }
            std::size_t x = k_;
            while (x > 0 && pick[x - 1] == planes.size() - k_ + (x - 1)) --x;
            if (x == 0) break;
            ++pick[x - 1];
            for (std::size_t y = x; y < k_; ++y) pick[y] = pick[y - 1] + 1;
        }
    }

    std::size_t candidates() const { return seen_.size(); }
    const std::optional<Rational>& best_value() const { return best_value_; }
    const Vector& best_prices() const { return best_q_; }
    const std::vector<std::size_t>& actions() const { return actions_; }

private:
    const Rational& own(std::size_t t, std::size_t i) const { return own_[t * k_ + i]; }
    const Rational& other(std::size_t t, std::size_t i) const { return other_[t * k_ + i]; }

    void descend(std::size_t depth) {
        if (depth == k_) {
            consider();
            return;
        }
        const std::size_t node = tree_->order[depth];
        const std::size_t item = node - 1;
        const std::size_t par = tree_->parent[node];
        if (par == 0) {
            for (const auto& v : ground_[item]) {
                q_[item] = v;
                descend(depth + 1);
            }
        } else {
            const std::size_t up = par - 1;
            for (const auto& d : diff_[item * k_ + up]) {
                q_[item] = q_[up] + d;
                if (q_[item] < floor_[item]) continue;
                descend(depth + 1);
            }
        }
    }

    void consider() {
        if (!seen_.insert(q_).second) return;
        Rational value = 0;
        for (std::size_t i = 0; i < k_; ++i) margin_[i] = q_[i] - cost_[i];
        for (std::size_t t = 0; t < n_; ++t) {
            for (std::size_t i = 0; i < k_; ++i) {
                util_own_[i] = own(t, i) - q_[i];
                util_other_[i] = other(t, i) - q_[i];
            }
            std::size_t i = choose_item(
                k_, [&](std::size_t j) -> const Rational& { return util_own_[j]; },
                [&](std::size_t j) -> const Rational& { return util_other_[j]; },
                [&](std::size_t j) -> const Rational& { return margin_[j]; }, [](std::size_t) { return false; });
            if (i != kOptOut) value += model_.type_dist[t] * margin_[i];
        }
        if (!best_value_ || value > *best_value_ || (value == *best_value_ && q_ < best_q_)) {
            best_value_ = std::move(value);
            best_q_ = q_;
        }
    }

    const PricingModel& model_;
    std::vector<std::size_t> actions_;
    std::size_t k_, n_;
    Vector own_, other_, floor_, cost_;
    std::vector<Vector> ground_;
    std::vector<Vector> diff_;
    const SpanningTree* tree_ = nullptr;
    Vector q_, util_own_, util_other_, margin_;
    std::unordered_set<Vector, RationalVectorHash> seen_;
    std::optional<Rational> best_value_;
    Vector best_q_;
};

// Nondecreasing k-tuples over `pool` in lexicographic order.
inline std::vector<std::vector<std::size_t>> multisets(const std::vector<std::size_t>& pool, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (pool.empty()) return out;
    std::vector<std::size_t> idx(k, 0);
    for (;;) {
        std::vector<std::size_t> t(k);
        for (std::size_t x = 0; x < k; ++x) t[x] = pool[idx[x]];
        out.push_back(std::move(t));
        std::size_t x = k;
        while (x > 0 && idx[x - 1] == pool.size() - 1) --x;
        if (x == 0) break;
        ++idx[x - 1];
        for (std::size_t y = x; y < k; ++y) idx[y] = idx[x - 1];
    }
    return out;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mu;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Optimal menu of k items. The all-opt-out menu is the first candidate.
inline SolveReport solve_menu_k(const PricingModel& model, std::size_t k, const SolveOptions& opts = {}) {
    if (k < 1) throw std::invalid_argument("menu size k must be at least 1");
    const std::size_t n = model.num_types();
    std::vector<std::size_t> usable;
    for (std::size_t a = 0; a < model.num_actions(); ++a)
        if (model.floors[a]) usable.push_back(a);
    if (usable.empty()) throw InfeasibleError("no action can be induced");

    auto tuples = detail::multisets(usable, k);
    std::vector<detail::SpanningTree> trees;
    if (opts.strategy == EnumerationStrategy::kSpanningTrees) trees = detail::spanning_trees(k);

    std::vector<TupleStat> stats(tuples.size());
    std::vector<Vector> best_q(tuples.size());
    detail::parallel_for(tuples.size(), opts.threads, [&](std::size_t ix) {
        detail::TupleSearch search(model, tuples[ix]);
        if (opts.strategy == EnumerationStrategy::kSpanningTrees)
            search.run_trees(trees);
        else
            search.run_subsets();
        stats[ix] = {tuples[ix], search.candidates(), search.best_value()};
        best_q[ix] = search.best_prices();
    });

    // All-opt-out: price every item of the first tuple above every valuation.
    std::size_t winner = tuples.size();
    Rational value = 0;
    SolveReport rep;
    rep.candidates = 1;
    for (std::size_t ix = 0; ix < tuples.size(); ++ix) {
        rep.candidates += stats[ix].candidates;
        if (stats[ix].best_value && *stats[ix].best_value > value) {
            value = *stats[ix].best_value;
            winner = ix;
        }
    }
    if (winner == tuples.size()) {
        Vector q(k);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t a = tuples[0][i];
            Rational top = *model.floors[a];
            for (std::size_t t = 0; t < n; ++t)
                if (model.own_value(t, a) + 1 > top) top = model.own_value(t, a) + 1;
            q[i] = top;
        }
        rep.solution = make_solution(model, tuples[0], q);
    } else {
        rep.solution = make_solution(model, tuples[winner], best_q[winner]);
    }
    rep.value = evaluate(rep.solution, model.type_dist);
    rep.selection = select_all(rep.solution, n);
    rep.tuples = std::move(stats);
    return rep;
}

inline SolveReport solve_menu_k(const DelegationInstance& inst, std::size_t k, const SolveOptions& opts = {}) {
    return solve_menu_k(make_pricing_model(inst), k, opts);
}

// Conversions between pricing form and payment menus ----------------------------------------------

/// Scheme index and deviating action for a provider-IC violation.
class NotIcError : public std::runtime_error {
public:
    NotIcError(std::size_t scheme, std::size_t deviation, const std::string& what)
        : std::runtime_error(what), scheme_(scheme), deviation_(deviation) {}
    std::size_t scheme() const noexcept { return scheme_; }
    std::size_t deviation() const noexcept { return deviation_; }

private:
    std::size_t scheme_;
    std::size_t deviation_;
};

/// Payment menu realizing sol. Items no type selects become OPT_OUT slots.
/// A direct menu lists, for each type, the scheme that type selects.
inline DeterministicMenu pricing_to_menu(const DelegationInstance& inst, const PricingSolution& sol,
                                         MenuKind kind = MenuKind::kIndirect) {
    const std::size_t m = inst.num_outcomes();
    auto choice = select_all(sol, inst.num_types());
    std::vector<bool> used(sol.size(), false);
    for (const auto& c : choice)
        if (c.item != kOptOut) used[c.item] = true;
    std::vector<PaymentScheme> schemes(sol.size());
    for (std::size_t i = 0; i < sol.size(); ++i) {
        const auto& it = sol.items[i];
        if (it.opt_out() || !used[i]) {
            schemes[i] = {kOptOut, Vector(m)};
            continue;
        }
        schemes[i] = {it.action, reconstruct_payment(inst, it.action, it.price, it.eps)};
    }
    DeterministicMenu menu;
    menu.kind = kind;
    if (kind == MenuKind::kIndirect) {
        menu.schemes = std::move(schemes);
    } else {
        for (const auto& c : choice)
            menu.schemes.push_back(c.item == kOptOut ? PaymentScheme{kOptOut, Vector(m)} : schemes[c.item]);
    }
    return menu;
}

/// Pricing form of a provider-IC menu: q_i = F_{a_i}^T p_i, OPT_OUT slots kept as empty items.
inline PricingSolution menu_to_pricing(const DelegationInstance& inst, const DeterministicMenu& menu) {
    PricingModel model = make_pricing_model(inst);
    std::vector<std::size_t> actions;
    Vector prices;
    for (std::size_t i = 0; i < menu.schemes.size(); ++i) {
        const auto& s = menu.schemes[i];
        if (s.opt_out()) {
            actions.push_back(kOptOut);
            prices.emplace_back(0);
            continue;
        }
        auto dev = provider_deviation(inst, s.action, s.payments);
        if (dev.gain > 0)
            throw NotIcError(i, dev.deviation,
                             "scheme " + std::to_string(i) + " is not incentive compatible for the provider: action " +
                                 inst.actions[dev.deviation] + " gains " + format_rational(dev.gain));
        actions.push_back(s.action);
        prices.push_back(inst.expected_payment(s.action, s.payments));
    }
    return make_solution(model, actions, prices);
}

class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Indirect menu with one scheme per used action: the cheapest in expectation among that action's types.
inline DeterministicMenu compress_menu(const DelegationInstance& inst, const DeterministicMenu& direct) {
    const std::size_t n = inst.num_types(), m = inst.num_outcomes();
    if (direct.kind != MenuKind::kDirect || direct.schemes.size() != n)
        throw PreconditionError("compress_menu needs a direct menu with one scheme per type");
    auto utility = [&](std::size_t t, const PaymentScheme& s) -> Rational {
        if (s.opt_out()) return 0;
        return inst.expected_reward(s.action, t) - inst.expected_payment(s.action, s.payments);
    };
    for (std::size_t t = 0; t < n; ++t) {
        const auto& own = direct.schemes[t];
        Rational u = utility(t, own);
        if (u < 0) throw PreconditionError("user IR fails for type " + inst.types[t]);
        for (std::size_t s = 0; s < n; ++s)
            if (utility(t, direct.schemes[s]) > u)
                throw PreconditionError("user IC fails: type " + inst.types[t] + " prefers the scheme of " +
                                        inst.types[s]);
        if (!own.opt_out()) {
            auto dev = provider_deviation(inst, own.action, own.payments);
            if (dev.gain > 0)
                throw PreconditionError("provider IC fails for the scheme of " + inst.types[t] + " against " +
                                        inst.actions[dev.deviation]);
        }
    }
    DeterministicMenu out;
    out.kind = MenuKind::kIndirect;
    std::vector<std::size_t> cheapest(inst.num_actions(), kOptOut);
    std::vector<std::size_t> order;
    for (std::size_t t = 0; t < n; ++t) {
        const auto& s = direct.schemes[t];
        if (s.opt_out()) continue;
        std::size_t& c = cheapest[s.action];
        if (c == kOptOut) {
            order.push_back(s.action);
            c = t;
        } else if (inst.expected_payment(s.action, s.payments) <
                   inst.expected_payment(s.action, direct.schemes[c].payments)) {
            c = t;
        }
    }
    for (std::size_t a : order) out.schemes.push_back(direct.schemes[cheapest[a]]);
    if (out.schemes.empty()) out.schemes.push_back({kOptOut, Vector(m)});
    return out;
}

}  // namespace delegate
