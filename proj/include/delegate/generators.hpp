#pragma once

#include "delegate/instance.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace delegate {

/// Undirected graph on vertices 1..vertices.
struct GraphSpec {
    std::size_t vertices = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    void validate() const {
        for (auto [u, v] : edges) {
            if (u == v) throw std::invalid_argument("graph has a self-loop");
            if (u < 1 || v < 1 || u > vertices || v > vertices) throw std::invalid_argument("edge endpoint out of range");
        }
    }
    bool adjacent(std::size_t u, std::size_t v) const {
        for (auto [x, y] : edges)
            if ((x == u && y == v) || (x == v && y == u)) return true;
        return false;
    }
};

/// n types, outcomes and actions; a_i always yields w_i; type t_i values only w_i.
inline DelegationInstance gen_single_bad(std::size_t n) {
    if (n < 1) throw std::invalid_argument("single-bad family needs n >= 1");
    Matrix F(n, n), R(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        F(i, i) = 1;
        R(i, i) = 1;
    }
    Vector xi(n, frac(1, static_cast<long>(n)));
    return make_instance(std::move(xi), std::move(F), std::move(R), Vector(n));
}

/// Family separating randomized from deterministic menus. Indices (i, j), i in 1..n/2, j in 1..2,
/// i-major. Type (i, j) earns 2^-i on outcome (k, z) unless both k != i and z != j.
inline DelegationInstance gen_randomized_gap(std::size_t n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("randomized-gap family needs an even n >= 2");
    const std::size_t half = n / 2;
    auto idx = [](std::size_t i, std::size_t j) { return (i - 1) * 2 + (j - 1); };
    Rational total = 0;
    for (std::size_t k = 1; k <= half; ++k) total += pow_rational(Rational(2), static_cast<long>(k + 1));
    Matrix F(n, n), R(n, n);
    Vector xi(n);
    DelegationInstance inst;
    for (std::size_t i = 1; i <= half; ++i)
        for (std::size_t j = 1; j <= 2; ++j) {
            const std::string tag = std::to_string(i) + "_" + std::to_string(j);
            inst.types.push_back("t" + tag);
            inst.outcomes.push_back("w" + tag);
            inst.actions.push_back("a" + tag);
            F(idx(i, j), idx(i, j)) = 1;
            xi[idx(i, j)] = pow_rational(Rational(2), static_cast<long>(i)) / total;
            const Rational reward = pow_rational(Rational(2), -static_cast<long>(i));
            for (std::size_t k = 1; k <= half; ++k)
                for (std::size_t z = 1; z <= 2; ++z)
                    if (!(k != i && z != j)) R(idx(k, z), idx(i, j)) = reward;
        }
    inst.type_dist = std::move(xi);
    inst.F = std::move(F);
    inst.R = std::move(R);
    inst.costs = Vector(n);
    return inst;
}

struct HardnessInstance {
    DelegationInstance instance;
    Rational beta;
    GraphSpec graph;

    std::size_t copies() const noexcept { return graph.vertices; }
    /// Position of pair (v, i), both 1-based.
    std::size_t index(std::size_t v, std::size_t i) const { return (v - 1) * copies() + (i - 1); }
};

/// Reduction instance from a graph: one action/outcome/type per (v, i) with N = M copies per vertex.
/// Type (v, i) earns M^-(Mv+i) on outcome (v, i) and on every outcome of a lower-numbered neighbour.
inline HardnessInstance gen_hardness(const GraphSpec& graph) {
    graph.validate();
    const std::size_t M = graph.vertices;
    if (M < 1 || M > 4) throw std::invalid_argument("hardness generator supports 1 <= M <= 4");
    const std::size_t N = M, size = M * N;
    HardnessInstance out;
    out.graph = graph;
    auto idx = [&](std::size_t v, std::size_t i) { return (v - 1) * N + (i - 1); };
    const Rational base(static_cast<long>(M));
    Matrix F(size, size), R(size, size);
    Vector xi(size);
    Rational inv_beta = 0;
    DelegationInstance& inst = out.instance;
    for (std::size_t v = 1; v <= M; ++v)
        for (std::size_t i = 1; i <= N; ++i) {
            const std::string tag = std::to_string(v) + "_" + std::to_string(i);
            inst.types.push_back("t" + tag);
            inst.outcomes.push_back("w" + tag);
            inst.actions.push_back("a" + tag);
            const long e = static_cast<long>(M * v + i);
            inv_beta += pow_rational(base, e);
            F(idx(v, i), idx(v, i)) = 1;
            const Rational reward = pow_rational(base, -e);
            for (std::size_t w = 1; w <= M; ++w)
                for (std::size_t j = 1; j <= N; ++j)
                    if ((w == v && i == j) || (w < v && graph.adjacent(v, w))) R(idx(w, j), idx(v, i)) = reward;
        }
    out.beta = Rational(1) / inv_beta;
    for (std::size_t v = 1; v <= M; ++v)
        for (std::size_t i = 1; i <= N; ++i)
            xi[idx(v, i)] = out.beta * pow_rational(base, static_cast<long>(M * v + i));
    inst.type_dist = std::move(xi);
    inst.F = std::move(F);
    inst.R = std::move(R);
    inst.costs = Vector(size);
    return out;
}

/// Direct menu from an independent set: types of chosen vertices pay their reward on their own outcome;
/// every other type takes its favourite among those schemes or opts out (opt-out wins ties, then lowest index).
inline DeterministicMenu gen_soundness_menu(const HardnessInstance& h, const std::vector<std::size_t>& independent_set) {
    const std::size_t M = h.graph.vertices, N = M, m = M * N;
    std::vector<bool> chosen(M + 1, false);
    for (std::size_t v : independent_set) {
        if (v < 1 || v > M) throw std::invalid_argument("independent set vertex out of range");
        chosen[v] = true;
    }
    for (std::size_t u = 1; u <= M; ++u)
        for (std::size_t v = u + 1; v <= M; ++v)
            if (chosen[u] && chosen[v] && h.graph.adjacent(u, v))
                throw std::invalid_argument("vertex set is not independent");
    const DelegationInstance& inst = h.instance;
    DeterministicMenu menu;
    menu.kind = MenuKind::kDirect;
    menu.schemes.assign(m, PaymentScheme{kOptOut, Vector(m)});
    for (std::size_t v = 1; v <= M; ++v) {
        if (!chosen[v]) continue;
        for (std::size_t i = 1; i <= N; ++i) {
            const std::size_t x = h.index(v, i);
            PaymentScheme s{x, Vector(m)};
            s.payments[x] = pow_rational(Rational(static_cast<long>(M)), -static_cast<long>(M * v + i));
            menu.schemes[x] = std::move(s);
        }
    }
    for (std::size_t v = 1; v <= M; ++v) {
        if (chosen[v]) continue;
        for (std::size_t i = 1; i <= N; ++i) {
            const std::size_t t = h.index(v, i);
            Rational best = 0;
            std::size_t pick = kOptOut;
            for (std::size_t x = 0; x < m; ++x) {
                const auto& s = menu.schemes[x];
                if (s.opt_out() || !chosen[x / N + 1]) continue;
                Rational u = inst.expected_reward(s.action, t) - inst.expected_payment(s.action, s.payments);
                if (u > best) {
                    best = std::move(u);
                    pick = x;
                }
            }
            if (pick != kOptOut) menu.schemes[t] = menu.schemes[pick];
        }
    }
    return menu;
}

/// Reproducible random instance. F columns are normalized integer weights; R on a grid of quarters;
/// costs on a grid of tenths up to 1/2; type weights 1..4 normalized.
inline DelegationInstance gen_random(std::size_t n, std::size_t m, std::size_t l, std::uint64_t seed) {
    if (n == 0 || m == 0 || l == 0) throw std::invalid_argument("random instance sizes must be positive");
    std::mt19937_64 rng(seed);
    auto draw = [&](long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
    Matrix F(m, l), R(m, n);
    for (std::size_t a = 0; a < l; ++a) {
        std::vector<long> w(m);
        long sum = 0;
        while (sum == 0) {
            sum = 0;
            for (auto& x : w) sum += (x = draw(0, 4));
        }
        for (std::size_t o = 0; o < m; ++o) F(o, a) = frac(w[o], sum);
    }
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t o = 0; o < m; ++o) R(o, t) = frac(draw(0, 4), 4);
    Vector costs(l), xi(n);
    for (auto& c : costs) c = frac(draw(0, 5), 10);
    std::vector<long> tw(n);
    long tsum = 0;
    for (auto& x : tw) tsum += (x = draw(1, 4));
    for (std::size_t t = 0; t < n; ++t) xi[t] = frac(tw[t], tsum);
    return make_instance(std::move(xi), std::move(F), std::move(R), std::move(costs));
}

}  // namespace delegate
