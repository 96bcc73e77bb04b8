#pragma once

// Exact linear programming and linear-system solving over the rationals.
//
// The simplex below is a dense two-phase tableau method. Entering columns are
// chosen by Dantzig's rule and the method falls back to Bland's rule after a
// run of degenerate pivots, so repeated runs always visit the same vertices.

#include "delegate/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace delegate {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Term {
    std::size_t var;
    Rational coef;
};

struct Constraint {
    std::vector<Term> terms;
    Relation relation = Relation::kLessEqual;
    Rational rhs;
};

/// maximize objective^T x subject to rows and per-variable lower bounds.
class LinearProgram {
public:
    explicit LinearProgram(std::size_t num_vars = 0)
        : objective_(num_vars), lower_(num_vars, Rational(0)) {}

    std::size_t num_vars() const noexcept { return objective_.size(); }
    std::size_t num_constraints() const noexcept { return rows_.size(); }

    /// Appends a variable with lower bound 0 and objective coefficient 0; returns its index.
    std::size_t add_variable() {
        objective_.emplace_back(0);
        lower_.emplace_back(Rational(0));
        return objective_.size() - 1;
    }

    void set_objective(Vector c) {
        if (c.size() != num_vars()) throw std::invalid_argument("objective size does not match variable count");
        objective_ = std::move(c);
    }
    void set_objective_coef(std::size_t var, Rational c) {
        check_var(var);
        objective_[var] = std::move(c);
    }

    /// `std::nullopt` makes the variable free below.
    void set_lower_bound(std::size_t var, std::optional<Rational> bound) {
        check_var(var);
        lower_[var] = std::move(bound);
    }

    void add_constraint(std::vector<Term> terms, Relation rel, Rational rhs) {
        for (const auto& t : terms) check_var(t.var);
        rows_.push_back({std::move(terms), rel, std::move(rhs)});
    }

    void add_dense_constraint(const Vector& coeffs, Relation rel, Rational rhs) {
        if (coeffs.size() != num_vars()) throw std::invalid_argument("constraint row size does not match variable count");
        std::vector<Term> terms;
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            if (coeffs[j] != 0) terms.push_back({j, coeffs[j]});
        rows_.push_back({std::move(terms), rel, std::move(rhs)});
    }

    const Vector& objective() const noexcept { return objective_; }
    const std::vector<Constraint>& constraints() const noexcept { return rows_; }
    const std::vector<std::optional<Rational>>& lower_bounds() const noexcept { return lower_; }

private:
    void check_var(std::size_t var) const {
        if (var >= num_vars()) throw std::invalid_argument("variable index out of range");
    }

    Vector objective_;
    std::vector<std::optional<Rational>> lower_;
    std::vector<Constraint> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpOutcome {
    LpStatus status = LpStatus::kInfeasible;
    Rational value;
    Vector x;
    std::size_t pivots = 0;
};

inline const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::kOptimal: return "OPTIMAL";
        case LpStatus::kInfeasible: return "INFEASIBLE";
        case LpStatus::kUnbounded: return "UNBOUNDED";
    }
    return "?";
}

/// True when x satisfies every row and bound of lp exactly.
inline bool is_feasible_point(const LinearProgram& lp, const Vector& x) {
    if (x.size() != lp.num_vars()) return false;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (lp.lower_bounds()[j] && x[j] < *lp.lower_bounds()[j]) return false;
    for (const auto& row : lp.constraints()) {
        Rational lhs = 0;
        for (const auto& t : row.terms) lhs += t.coef * x[t.var];
        switch (row.relation) {
            case Relation::kLessEqual:
                if (lhs > row.rhs) return false;
                break;
            case Relation::kGreaterEqual:
                if (lhs < row.rhs) return false;
                break;
            case Relation::kEqual:
                if (lhs != row.rhs) return false;
                break;
        }
    }
    return true;
}

namespace detail {

class Tableau {
public:
    // rows: coefficient rows over `cols` columns; rhs >= 0; basis gives the initial basic column per row.
    Tableau(std::vector<Vector> rows, std::vector<std::size_t> basis, std::size_t cols)
        : t_(std::move(rows)), basis_(std::move(basis)), cols_(cols), active_(cols) {}

    std::size_t rows() const { return t_.size(); }
    const std::vector<std::size_t>& basis() const { return basis_; }
    const Rational& rhs(std::size_t r) const { return t_[r][cols_]; }
    Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
    std::size_t pivots() const { return pivots_; }

    // Restrict pivoting to columns [0, n).
    void set_active_columns(std::size_t n) { active_ = n; }

    // Installs objective c (maximize) over columns; objective row holds -reduced costs.
    void set_objective(const Vector& c) {
        obj_.assign(cols_ + 1, Rational(0));
        for (std::size_t j = 0; j < active_; ++j) obj_[j] = -c[j];
        for (std::size_t r = 0; r < t_.size(); ++r) {
            const Rational& cb = c[basis_[r]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j < active_; ++j)
                if (t_[r][j] != 0) obj_[j] += cb * t_[r][j];
            obj_[cols_] += cb * t_[r][cols_];
        }
    }

    const Rational& objective_value() const { return obj_[cols_]; }

    // Runs simplex iterations to optimality. Returns false when unbounded.
    bool optimize() {
        bool bland = false;
        std::size_t degenerate_run = 0;
        for (;;) {
            std::size_t enter = cols_;
            if (bland) {
                for (std::size_t j = 0; j < active_; ++j)
                    if (obj_[j] < 0) {
                        enter = j;
                        break;
                    }
            } else {
                for (std::size_t j = 0; j < active_; ++j)
                    if (obj_[j] < 0 && (enter == cols_ || obj_[j] < obj_[enter])) enter = j;
            }
            if (enter == cols_) return true;
            std::size_t leave = t_.size();
            Rational best_ratio;
            for (std::size_t r = 0; r < t_.size(); ++r) {
                if (t_[r][enter] <= 0) continue;
                Rational ratio = t_[r][cols_] / t_[r][enter];
                if (leave == t_.size() || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[r] < basis_[leave])) {
                    leave = r;
                    best_ratio = std::move(ratio);
                }
            }
            if (leave == t_.size()) return false;
            if (best_ratio == 0) {
                if (++degenerate_run > 50) bland = true;
            } else {
                degenerate_run = 0;
            }
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t pr, std::size_t pc) {
        ++pivots_;
        Vector& prow = t_[pr];
        const Rational piv = prow[pc];
        std::vector<std::size_t> nz;
        nz.reserve(active_ + 1);
        for (std::size_t j = 0; j < active_; ++j) {
            if (prow[j] == 0) continue;
            prow[j] /= piv;
            nz.push_back(j);
        }
        if (prow[cols_] != 0) {
            prow[cols_] /= piv;
            nz.push_back(cols_);
        }
        auto eliminate = [&](Vector& row) {
            if (row[pc] == 0) return;
            const Rational f = row[pc];
            for (std::size_t j : nz) row[j] -= f * prow[j];
        };
        for (std::size_t r = 0; r < t_.size(); ++r)
            if (r != pr) eliminate(t_[r]);
        if (!obj_.empty()) eliminate(obj_);
        basis_[pr] = pc;
    }

    void drop_row(std::size_t r) {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

private:
    std::vector<Vector> t_;
    std::vector<std::size_t> basis_;
    Vector obj_;
    std::size_t cols_;
    std::size_t active_;
    std::size_t pivots_ = 0;
};

}  // namespace detail

/// Exact optimum of lp over the rationals, or INFEASIBLE / UNBOUNDED.
inline LpOutcome solve_lp(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars();
    if (lp.objective().size() != n || lp.lower_bounds().size() != n)
        throw std::invalid_argument("linear program dimensions are inconsistent");

    // Column map: shifted variable (x = lb + y) or split free variable (x = y+ - y-).
    std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
    std::size_t structural = 0;
    for (std::size_t j = 0; j < n; ++j) {
        pos_col[j] = structural++;
        if (!lp.lower_bounds()[j]) neg_col[j] = structural++;
    }

    struct Row {
        std::vector<std::pair<std::size_t, Rational>> coeffs;
        Relation rel;
        Rational rhs;
    };
    std::vector<Row> rows;
    rows.reserve(lp.num_constraints());
    LpOutcome out;
    for (const auto& c : lp.constraints()) {
        Vector dense(structural);
        Rational rhs = c.rhs;
        for (const auto& t : c.terms) {
            if (t.var >= n) throw std::invalid_argument("constraint references unknown variable");
            dense[pos_col[t.var]] += t.coef;
            if (neg_col[t.var] != SIZE_MAX) dense[neg_col[t.var]] -= t.coef;
            if (lp.lower_bounds()[t.var]) rhs -= t.coef * *lp.lower_bounds()[t.var];
        }
        Row row{{}, c.relation, std::move(rhs)};
        bool any_pos = false, any_neg = false;
        for (std::size_t j = 0; j < structural; ++j) {
            if (dense[j] == 0) continue;
            (dense[j] > 0 ? any_pos : any_neg) = true;
            row.coeffs.emplace_back(j, std::move(dense[j]));
        }
        // Rows implied by y >= 0 are dropped; empty rows are checked directly.
        if (row.coeffs.empty()) {
            bool ok = (row.rel == Relation::kLessEqual && row.rhs >= 0) ||
                      (row.rel == Relation::kGreaterEqual && row.rhs <= 0) ||
                      (row.rel == Relation::kEqual && row.rhs == 0);
            if (!ok) {
                out.status = LpStatus::kInfeasible;
                return out;
            }
            continue;
        }
        if (row.rel == Relation::kLessEqual && !any_pos && row.rhs >= 0) continue;
        if (row.rel == Relation::kGreaterEqual && !any_neg && row.rhs <= 0) continue;
        if (row.rhs < 0) {
            for (auto& [j, v] : row.coeffs) v = -v;
            row.rhs = -row.rhs;
            if (row.rel == Relation::kLessEqual)
                row.rel = Relation::kGreaterEqual;
            else if (row.rel == Relation::kGreaterEqual)
                row.rel = Relation::kLessEqual;
        }
        rows.push_back(std::move(row));
    }

    const std::size_t m = rows.size();
    std::size_t slack_count = 0, art_count = 0;
    for (const auto& r : rows) {
        if (r.rel != Relation::kEqual) ++slack_count;
        if (r.rel != Relation::kLessEqual) ++art_count;
    }
    const std::size_t first_slack = structural;
    const std::size_t first_art = structural + slack_count;
    const std::size_t cols = first_art + art_count;

    std::vector<Vector> tab(m, Vector(cols + 1));
    std::vector<std::size_t> basis(m);
    std::size_t s = first_slack, a = first_art;
    for (std::size_t r = 0; r < m; ++r) {
        for (auto& [j, v] : rows[r].coeffs) tab[r][j] = v;
        tab[r][cols] = rows[r].rhs;
        switch (rows[r].rel) {
            case Relation::kLessEqual:
                tab[r][s] = 1;
                basis[r] = s++;
                break;
            case Relation::kGreaterEqual:
                tab[r][s++] = -1;
                tab[r][a] = 1;
                basis[r] = a++;
                break;
            case Relation::kEqual:
                tab[r][a] = 1;
                basis[r] = a++;
                break;
        }
    }

    detail::Tableau tableau(std::move(tab), std::move(basis), cols);

    if (art_count > 0) {
        Vector phase1(cols);
        for (std::size_t j = first_art; j < cols; ++j) phase1[j] = -1;
        tableau.set_objective(phase1);
        tableau.optimize();
        if (tableau.objective_value() < 0) {
            out.status = LpStatus::kInfeasible;
            out.pivots = tableau.pivots();
            return out;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        for (std::size_t r = 0; r < tableau.rows();) {
            if (tableau.basis()[r] < first_art) {
                ++r;
                continue;
            }
            std::size_t col = first_art;
            for (std::size_t j = 0; j < first_art; ++j)
                if (tableau.at(r, j) != 0) {
                    col = j;
                    break;
                }
            if (col == first_art) {
                tableau.drop_row(r);
            } else {
                tableau.pivot(r, col);
                ++r;
            }
        }
    }
    tableau.set_active_columns(first_art);

    Vector phase2(cols);
    for (std::size_t j = 0; j < n; ++j) {
        phase2[pos_col[j]] = lp.objective()[j];
        if (neg_col[j] != SIZE_MAX) phase2[neg_col[j]] = -lp.objective()[j];
    }
    tableau.set_objective(phase2);
    bool bounded = tableau.optimize();
    out.pivots = tableau.pivots();
    if (!bounded) {
        out.status = LpStatus::kUnbounded;
        return out;
    }

    Vector y(cols + 1);
    for (std::size_t r = 0; r < tableau.rows(); ++r) y[tableau.basis()[r]] = tableau.rhs(r);
    out.x.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        out.x[j] = y[pos_col[j]];
        if (neg_col[j] != SIZE_MAX) out.x[j] -= y[neg_col[j]];
        if (lp.lower_bounds()[j]) out.x[j] += *lp.lower_bounds()[j];
    }
    out.value = dot(lp.objective(), out.x);
    out.status = LpStatus::kOptimal;
    return out;
}

/// Affine equation normal . q = offset.
struct Hyperplane {
    Vector normal;
    Rational offset;

    friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

/// Unique intersection point of k hyperplanes in k unknowns, or nullopt when the system is singular.
inline std::optional<Vector> intersect_hyperplanes(const std::vector<Hyperplane>& planes) {
    const std::size_t k = planes.size();
    for (const auto& h : planes)
        if (h.normal.size() != k) throw std::invalid_argument("intersect_hyperplanes needs k equations in k unknowns");
    std::vector<Vector> a(k, Vector(k + 1));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) a[r][c] = planes[r].normal[c];
        a[r][k] = planes[r].offset;
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        while (p < k && a[p][c] == 0) ++p;
        if (p == k) return std::nullopt;
        std::swap(a[p], a[c]);
        const Rational piv = a[c][c];
        for (std::size_t j = c; j <= k; ++j) a[c][j] /= piv;
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c];
            for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
        }
    }
    Vector q(k);
    for (std::size_t r = 0; r < k; ++r) q[r] = a[r][k];
    return q;
}

}  // namespace delegate
