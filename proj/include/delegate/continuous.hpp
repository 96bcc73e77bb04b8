#pragma once

// Continuous action space [0, 1]: discretize on a uniform grid, solve the relaxed
// program with the generalized pricing solver, then robustify.

#include "delegate/floors.hpp"
#include "delegate/instance.hpp"
#include "delegate/io.hpp"
#include "delegate/pricing.hpp"
#include "delegate/robust.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace delegate {

struct ActionSample {
    Vector F;
    Rational cost;
};

/// Outcome distribution and cost for every a in [0, 1], with declared regularity constants.
struct ContinuousActionFamily {
    std::string name;
    std::vector<std::string> outcomes;
    std::vector<std::string> types;
    Vector type_dist;
    Matrix R;  // outcomes x types
    std::function<ActionSample(const Rational&)> eval;
    Rational lipschitz_F = 1;
    Rational lipschitz_c = 1;
    Rational smoothness;

    std::size_t num_outcomes() const noexcept { return outcomes.size(); }
    std::size_t num_types() const noexcept { return types.size(); }
};

class SmoothnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// F_a = (1/2 + a/2, 1/2 - a/2), c_a = a/2, one type valuing only the first outcome.
inline ContinuousActionFamily toy_family() {
    ContinuousActionFamily f;
    f.name = "toy";
    f.outcomes = {"w1", "w2"};
    f.types = {"t1"};
    f.type_dist = {Rational(1)};
    f.R = Matrix(2, 1);
    f.R(0, 0) = 1;
    f.eval = [](const Rational& a) {
        const Rational half = frac(1, 2);
        return ActionSample{{half + a / 2, half - a / 2}, a / 2};
    };
    f.lipschitz_F = 1;
    f.lipschitz_c = frac(1, 2);
    f.smoothness = frac(1, 2);
    return f;
}

/// F_a = (1/4 + a^2/4, 3/4 - a^2/4), c_a = a^2/2, two equally likely types valuing one outcome each.
inline ContinuousActionFamily quadratic_family() {
    ContinuousActionFamily f;
    f.name = "quadratic";
    f.outcomes = {"w1", "w2"};
    f.types = {"t1", "t2"};
    f.type_dist = {frac(1, 2), frac(1, 2)};
    f.R = Matrix(2, 2);
    f.R(0, 0) = 1;
    f.R(1, 1) = 1;
    f.eval = [](const Rational& a) {
        const Rational sq = a * a;
        return ActionSample{{frac(1, 4) + sq / 4, frac(3, 4) - sq / 4}, sq / 2};
    };
    f.lipschitz_F = 1;
    f.lipschitz_c = 1;
    f.smoothness = frac(1, 2);
    return f;
}

/// Family tabulated at increasing points 0 = a_0 < ... < a_r = 1, linearly interpolated in between.
/// JSON: {"version", "outcomes", "types", "type_dist", "R", "lipschitz_F", "lipschitz_c", "smoothness",
///        "table": [{"a": "0", "F": [...], "cost": "0"}, ...]}
inline ContinuousActionFamily family_from_json(const json& doc, std::string name = "tabulated") {
    using namespace detail;
    check_version(doc);
    ContinuousActionFamily f;
    f.name = std::move(name);
    f.outcomes = ids_from(field(doc, "outcomes", "family"), "outcomes");
    f.types = ids_from(field(doc, "types", "family"), "types");
    const std::size_t m = f.outcomes.size(), n = f.types.size();
    f.type_dist = vector_from(field(doc, "type_dist", "family"), n, "type_dist");
    f.R = columns_from(field(doc, "R", "family"), m, n, "R");
    f.lipschitz_F = rational_from(field(doc, "lipschitz_F", "family"), "lipschitz_F");
    f.lipschitz_c = rational_from(field(doc, "lipschitz_c", "family"), "lipschitz_c");
    f.smoothness = rational_from(field(doc, "smoothness", "family"), "smoothness");
    std::vector<Rational> points;
    std::vector<ActionSample> samples;
    const json& table = field(doc, "table", "family");
    if (!table.is_array()) throw FormatError("field table: expected an array");
    for (std::size_t i = 0; i < table.size(); ++i) {
        const std::string where = "table[" + std::to_string(i) + "]";
        points.push_back(rational_from(field(table[i], "a", where), where + ".a"));
        samples.push_back({vector_from(field(table[i], "F", where), m, where + ".F"),
                           rational_from(field(table[i], "cost", where), where + ".cost")});
    }
    if (points.empty() || points.front() != 0 || points.back() != 1)
        throw FormatError("table must start at a = 0 and end at a = 1");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i] <= points[i - 1]) throw FormatError("table points must be strictly increasing");
    f.eval = [points, samples](const Rational& a) {
        if (a < 0 || a > 1) throw std::out_of_range("action outside [0, 1]");
        std::size_t i = 0;
        while (i + 1 < points.size() && points[i + 1] < a) ++i;
        if (points[i] == a || i + 1 == points.size()) return samples[i];
        const Rational w = (a - points[i]) / (points[i + 1] - points[i]);
        ActionSample s{Vector(samples[i].F.size()), (1 - w) * samples[i].cost + w * samples[i + 1].cost};
        for (std::size_t o = 0; o < s.F.size(); ++o) s.F[o] = (1 - w) * samples[i].F[o] + w * samples[i + 1].F[o];
        return s;
    };
    return f;
}

/// Grid {0, d, 2d, ..., floor(1/d) d} plus 1 when 1/d is not an integer.
inline Vector action_grid(const Rational& delta) {
    if (delta <= 0 || delta > 1) throw std::invalid_argument("delta must lie in (0, 1]");
    Vector grid;
    for (Rational a = 0; a <= 1; a += delta) grid.push_back(a);
    if (grid.back() != 1) grid.push_back(Rational(1));
    return grid;
}

struct DiscretizedProgram {
    Rational delta;
    Vector grid;
    DelegationInstance instance;  // one action per grid point
    Matrix upper;                 // types x grid: F_a^T R_t + delta
    Matrix lower;                 // types x grid: F_a^T R_t - delta
    Rational floor_eps;           // delta (1 + 2/c)
    std::vector<std::optional<Rational>> floors;

    PricingModel model() const {
        PricingModel m;
        m.type_dist = instance.type_dist;
        m.costs = instance.costs;
        m.own_value = upper;
        m.other_value = lower;
        m.floors = floors;
        m.eps.assign(grid.size(), floor_eps);
        return m;
    }
};

inline DiscretizedProgram discretize(const ContinuousActionFamily& family, const Rational& delta) {
    if (family.lipschitz_F > 1 || family.lipschitz_c > 1 || family.lipschitz_F < 0 || family.lipschitz_c < 0)
        throw std::invalid_argument("declared Lipschitz constants must lie in [0, 1]");
    if (family.smoothness <= 0) throw std::invalid_argument("declared smoothness must be positive");
    DiscretizedProgram prog;
    prog.delta = delta;
    prog.grid = action_grid(delta);
    const std::size_t g = prog.grid.size(), m = family.num_outcomes(), n = family.num_types();
    DelegationInstance& inst = prog.instance;
    inst.types = family.types;
    inst.outcomes = family.outcomes;
    inst.type_dist = family.type_dist;
    inst.R = family.R;
    inst.F = Matrix(m, g);
    inst.costs = Vector(g);
    for (std::size_t a = 0; a < g; ++a) {
        inst.actions.push_back("a=" + format_rational(prog.grid[a]));
        ActionSample s = family.eval(prog.grid[a]);
        if (s.F.size() != m) throw std::invalid_argument("family returned a distribution of the wrong length");
        for (std::size_t o = 0; o < m; ++o) inst.F(o, a) = s.F[o];
        inst.costs[a] = s.cost;
    }
    auto report = validate_instance(inst);
    if (!report.ok()) throw std::invalid_argument("family sampled on the grid is invalid: " + report.issues.front());
    for (std::size_t o = 0; o < m; ++o) {
        bool reached = false;
        for (std::size_t a = 0; a < g && !reached; ++a) reached = inst.F(o, a) >= family.smoothness;
        if (!reached)
            throw SmoothnessError("no grid action reaches outcome " + family.outcomes[o] + " with probability " +
                                  format_rational(family.smoothness));
    }
    prog.upper = Matrix(n, g);
    prog.lower = Matrix(n, g);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t a = 0; a < g; ++a) {
            const Rational v = inst.expected_reward(a, t);
            prog.upper(t, a) = v + delta;
            prog.lower(t, a) = v - delta;
        }
    prog.floor_eps = delta * (1 + 2 / family.smoothness);
    FloorCache cache(inst);
    for (std::size_t a = 0; a < g; ++a) prog.floors.push_back(cache.get(a, prog.floor_eps).floor);
    return prog;
}

/// Spot checks of the declared constants on the grid, its midpoints and one step past each point.
/// Returns a description of every failure.
inline std::vector<std::string> spot_check(const ContinuousActionFamily& family, const DiscretizedProgram& prog) {
    std::vector<std::string> issues;
    const std::size_t n = family.num_types(), m = family.num_outcomes();
    auto reward = [&](const Vector& F, std::size_t t) {
        Rational v = 0;
        for (std::size_t o = 0; o < m; ++o) v += F[o] * family.R(o, t);
        return v;
    };
    for (std::size_t a = 0; a < prog.grid.size(); ++a) {
        const Rational& x = prog.grid[a];
        const ActionSample base = family.eval(x);
        const Rational half = prog.delta / 2;
        for (const Rational& y : Vector{x - prog.delta, x - half, x + half, x + prog.delta}) {
            if (y < 0 || y > 1) continue;
            const ActionSample s = family.eval(y);
            Rational l1 = 0;
            for (std::size_t o = 0; o < m; ++o) l1 += abs(s.F[o] - base.F[o]);
            const Rational gap = abs(x - y);
            if (l1 > family.lipschitz_F * gap)
                issues.push_back("F is not " + format_rational(family.lipschitz_F) + "-Lipschitz between a=" +
                                 format_rational(x) + " and a=" + format_rational(y));
            if (abs(s.cost - base.cost) > family.lipschitz_c * gap)
                issues.push_back("cost is not " + format_rational(family.lipschitz_c) + "-Lipschitz between a=" +
                                 format_rational(x) + " and a=" + format_rational(y));
            for (std::size_t t = 0; t < n; ++t) {
                const Rational v = reward(s.F, t);
                if (v > prog.upper(t, a) || v < prog.lower(t, a))
                    issues.push_back("reward of a=" + format_rational(y) + " for type " + family.types[t] +
                                     " leaves the band around a=" + format_rational(x));
            }
        }
    }
    return issues;
}

struct ContinuousResult {
    DiscretizedProgram program;
    SolveReport relaxed;          // optimum of the discretized relaxed program
    RobustifiedMenu robust;
    Rational program_value;
    Rational value;               // robustified menu against true best responses on the grid
    Rational provider_eps;        // 2 delta (1 + 2/c)
    Rational slack_bound;         // provider_eps + sqrt(2 delta), rounded up
    Rational guarantee;           // program_value - 2 sqrt(2 delta) - sqrt(4 delta), rounded down
};

inline ContinuousResult solve_continuous(const ContinuousActionFamily& family, const Rational& delta,
                                         const SolveOptions& opts = {}) {
    ContinuousResult res;
    res.program = discretize(family, delta);
    res.relaxed = solve_menu_k(res.program.model(), std::max<std::size_t>(family.num_types(), 1), opts);
    res.program_value = res.relaxed.value;
    res.provider_eps = 2 * delta * (1 + 2 / family.smoothness);
    // A solution of the relaxed program is 2 delta-IC and 2 delta-IR for the users.
    RobustnessParams params{2 * delta, res.provider_eps};
    res.robust = robustify(res.program.instance, res.relaxed.solution, params);
    res.value = true_response_value(res.program.instance, res.robust.solution);
    res.slack_bound = res.provider_eps + sqrt_upper(2 * delta);
    res.guarantee = res.program_value - 2 * sqrt_upper(2 * delta) - sqrt_upper(4 * delta);
    return res;
}

/// Largest gain any action on a grid `refine` times finer can get over the recommended action,
/// for the payment vectors reconstructed from the robustified menu.
inline Rational measure_provider_slack(const ContinuousActionFamily& family, const ContinuousResult& res,
                                       std::size_t refine = 8) {
    if (refine < 1) throw std::invalid_argument("refinement must be at least 1");
    const DelegationInstance& inst = res.program.instance;
    const Vector fine = action_grid(res.program.delta / static_cast<long>(refine));
    std::vector<ActionSample> samples;
    for (const auto& a : fine) samples.push_back(family.eval(a));
    Rational worst = 0;
    for (const auto& it : res.robust.solution.items) {
        if (it.opt_out()) continue;
        const Vector p = reconstruct_payment(inst, it.action, it.price, it.eps);
        const Rational own = inst.expected_payment(it.action, p) - inst.costs[it.action];
        for (const auto& s : samples) {
            const Rational gain = dot(s.F, p) - s.cost - own;
            if (gain > worst) worst = gain;
        }
    }
    return worst;
}

}  // namespace delegate
