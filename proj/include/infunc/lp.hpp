#pragma once

// Small dense two-phase simplex over exact rationals with Bland's rule.
// Minimizes c^T x subject to rows of the form a^T x {<=, >=, =} b and x >= 0.

#include "infunc/numeric.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace infunc {

enum class Relation { LessEqual, GreaterEqual, Equal };
enum class LpStatus { Optimal, Infeasible, Unbounded };

inline std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

struct LinearProgram {
    struct Row {
        std::vector<Rational> coeffs;
        Relation relation = Relation::LessEqual;
        Rational rhs;
    };

    std::size_t variables = 0;
    std::vector<Rational> objective;  // minimized
    std::vector<Row> rows;

    explicit LinearProgram(std::size_t n = 0) : variables(n), objective(n, Rational(0)) {}

    void add_row(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
        if (coeffs.size() != variables) throw Error("LP row has wrong number of coefficients");
        rows.push_back({std::move(coeffs), rel, std::move(rhs)});
    }

    /// Exact check of every constraint and non-negativity at x.
    bool satisfied_by(const std::vector<Rational>& x) const {
        if (x.size() != variables) return false;
        for (const auto& v : x)
            if (v < 0) return false;
        for (const auto& r : rows) {
            Rational lhs = 0;
            for (std::size_t j = 0; j < variables; ++j) lhs += r.coeffs[j] * x[j];
            if (r.relation == Relation::LessEqual && lhs > r.rhs) return false;
            if (r.relation == Relation::GreaterEqual && lhs < r.rhs) return false;
            if (r.relation == Relation::Equal && lhs != r.rhs) return false;
        }
        return true;
    }
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational objective;
    std::vector<Rational> x;
    std::size_t pivots = 0;
};

namespace detail {

class Tableau {
public:
    // rows_: m constraint rows followed by the objective row; last column is the rhs.
    std::vector<std::vector<Rational>> rows;
    std::vector<std::size_t> basis;
    std::size_t pivots = 0;

    std::size_t m() const { return basis.size(); }
    std::size_t cols() const { return rows.front().size() - 1; }

    void pivot(std::size_t r, std::size_t c) {
        ++pivots;
        const Rational piv = rows[r][c];
        for (auto& v : rows[r]) v /= piv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const Rational factor = rows[i][c];
            for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= factor * rows[r][j];
        }
        basis[r] = c;
    }

    /// Runs Bland's rule on columns [0, usable). Returns false when unbounded.
    bool optimize(std::size_t usable) {
        auto& obj = rows.back();
        for (;;) {
            std::size_t enter = usable;
            for (std::size_t j = 0; j < usable; ++j) {
                if (obj[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == usable) return true;
            std::size_t leave = m();
            Rational best;
            for (std::size_t i = 0; i < m(); ++i) {
                if (rows[i][enter] <= 0) continue;
                Rational ratio = rows[i].back() / rows[i][enter];
                if (leave == m() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m()) return false;
            pivot(leave, enter);
        }
    }

    void set_objective(const std::vector<Rational>& cost) {
        auto& obj = rows.back();
        for (std::size_t j = 0; j < obj.size(); ++j) obj[j] = j < cost.size() ? cost[j] : Rational(0);
        for (std::size_t i = 0; i < m(); ++i) {
            const Rational cb = obj[basis[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j < obj.size(); ++j) obj[j] -= cb * rows[i][j];
        }
    }
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
    const std::size_t n = lp.variables;
    const std::size_t m = lp.rows.size();
    if (lp.objective.size() != n) throw Error("LP objective has wrong size");

    // Column layout: original | slack/surplus | artificial | rhs
    std::size_t slack_count = 0, art_count = 0;
    for (const auto& r : lp.rows) {
        const bool flip = r.rhs < 0;
        Relation rel = r.relation;
        if (flip && rel != Relation::Equal)
            rel = rel == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
        if (rel != Relation::Equal) ++slack_count;
        if (rel != Relation::LessEqual) ++art_count;
    }
    const std::size_t total = n + slack_count + art_count;
    detail::Tableau t;
    t.rows.assign(m + 1, std::vector<Rational>(total + 1, Rational(0)));
    t.basis.assign(m, 0);

    std::size_t next_slack = n, next_art = n + slack_count;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& r = lp.rows[i];
        const bool flip = r.rhs < 0;
        const Rational sign = flip ? Rational(-1) : Rational(1);
        Relation rel = r.relation;
        if (flip && rel != Relation::Equal)
            rel = rel == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
        for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = sign * r.coeffs[j];
        t.rows[i][total] = sign * r.rhs;
        if (rel == Relation::LessEqual) {
            t.rows[i][next_slack] = 1;
            t.basis[i] = next_slack++;
        } else {
            if (rel == Relation::GreaterEqual) t.rows[i][next_slack++] = -1;
            t.rows[i][next_art] = 1;
            t.basis[i] = next_art++;
        }
    }

    LpSolution sol;
    const std::size_t art_begin = n + slack_count;
    if (art_count > 0) {
        std::vector<Rational> phase1(total, Rational(0));
        for (std::size_t j = art_begin; j < total; ++j) phase1[j] = 1;
        t.set_objective(phase1);
        t.optimize(total);
        if (-t.rows.back()[total] != 0) {
            sol.status = LpStatus::Infeasible;
            sol.pivots = t.pivots;
            return sol;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        for (std::size_t i = 0; i < t.m();) {
            if (t.basis[i] < art_begin) {
                ++i;
                continue;
            }
            std::size_t col = art_begin;
            for (std::size_t j = 0; j < art_begin; ++j) {
                if (t.rows[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col < art_begin) {
                t.pivot(i, col);
                ++i;
            } else {
                t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
        for (auto& row : t.rows)
            for (std::size_t j = art_begin; j < total; ++j) row[j] = 0;
    }

    t.set_objective(lp.objective);
    if (!t.optimize(art_begin)) {
        sol.status = LpStatus::Unbounded;
        sol.pivots = t.pivots;
        return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < t.m(); ++i)
        if (t.basis[i] < n) sol.x[t.basis[i]] = t.rows[i][total];
    sol.objective = 0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];
    sol.pivots = t.pivots;
    return sol;
}

}  // namespace infunc
