#pragma once

// Self-contained exact LP solver: dense two-phase simplex over rationals
// with Bland's anti-cycling pivot rule. Identical inputs produce identical
// outcomes, including the dual.
//
// Dual sign convention (documented here once, verified by
// verify_lp_certificate):
//   minimize:  y_i >= 0 for '>=' rows, y_i <= 0 for '<=' rows, free for '='
//              reduced costs c_j - y'A_j >= 0 (== 0 for free variables)
//   maximize:  y_i >= 0 for '<=' rows, y_i <= 0 for '>=' rows, free for '='
//              reduced costs c_j - y'A_j <= 0 (== 0 for free variables)
// At optimality  c'x = b'y + sum_j rc_j * lb_j  holds exactly.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tcs/error.hpp"
#include "tcs/rational.hpp"

namespace tcs {

enum class Sense { Minimize, Maximize };
enum class Rel { LessEq, Eq, GreaterEq };

struct LinearConstraint {
    std::vector<Rational> coeffs;
    Rel rel = Rel::LessEq;
    Rational rhs;
};

/// Lower bound of a single variable: x >= value, or free.
struct VarBound {
    bool free = false;
    Rational lower; // ignored when free
};

struct LinearProgram {
    Sense sense = Sense::Minimize;
    std::vector<Rational> objective;
    std::vector<LinearConstraint> constraints;
    std::vector<VarBound> bounds; // empty means every variable has lb 0

    std::size_t num_vars() const { return objective.size(); }

    VarBound bound(std::size_t j) const {
        return bounds.empty() ? VarBound{} : bounds.at(j);
    }

    void check_shape() const {
        for (const auto& c : constraints)
            if (c.coeffs.size() != num_vars())
                throw TcsError(ErrorCode::DimensionMismatch,
                               "constraint row length != variable count");
        if (!bounds.empty() && bounds.size() != num_vars())
            throw TcsError(ErrorCode::DimensionMismatch,
                           "bounds length != variable count");
    }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPOutcome {
    LPStatus status = LPStatus::Infeasible;
    std::vector<Rational> primal; // per original variable
    std::vector<Rational> dual;   // per original constraint
    Rational objective;           // in the original sense
};

struct LPCheckReport {
    bool ok = true;
    std::vector<std::string> violations;
    void fail(std::string msg) {
        ok = false;
        violations.push_back(std::move(msg));
    }
};

namespace lp_detail {

// Equality-form working problem: min c'z s.t. Az = b, z >= 0.
struct Tableau {
    std::size_t rows = 0, cols = 0;     // cols excludes the rhs column
    std::vector<std::vector<Rational>> a; // rows x (cols + 1); last entry = rhs
    std::vector<int> basis;               // basic column per row
    std::vector<char> frozen;             // columns barred from entering

    Rational& rhs(std::size_t r) { return a[r][cols]; }
    const Rational& rhs(std::size_t r) const { return a[r][cols]; }

    void pivot(std::size_t r, std::size_t s) {
        const Rational p = a[r][s];
        for (auto& v : a[r]) v /= p;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r) continue;
            const Rational f = a[i][s];
            if (f == 0) continue;
            auto& row = a[i];
            const auto& prow = a[r];
            for (std::size_t j = 0; j <= cols; ++j) {
                if (prow[j] != 0) row[j] -= f * prow[j];
            }
        }
        if (r < basis.size()) basis[r] = static_cast<int>(s);
    }
};

// Bland's rule: entering = smallest eligible column with negative reduced
// cost; leaving = minimum ratio, ties by smallest basic variable index.
// Cannot cycle, and every choice is a deterministic function of the
// tableau. The cost row is a.back(). Returns false if unbounded.
inline bool run_simplex(Tableau& t) {
    const std::size_t m = t.basis.size();
    auto& cost = t.a[m];
    for (;;) {
        std::size_t enter = t.cols;
        for (std::size_t j = 0; j < t.cols; ++j) {
            if (t.frozen[j]) continue;
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == t.cols) return true; // optimal
        std::size_t leave = m;
        Rational best_ratio;
        for (std::size_t r = 0; r < m; ++r) {
            if (t.a[r][enter] <= 0) continue;
            Rational ratio = t.rhs(r) / t.a[r][enter];
            if (leave == m || ratio < best_ratio ||
                (ratio == best_ratio && t.basis[r] < t.basis[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave == m) return false; // unbounded
        t.pivot(leave, enter);
    }
}

} // namespace lp_detail

/// Exact primal/dual solve. When status is Optimal the primal is a basic
/// solution (a vertex) and the dual certifies it with zero gap.
inline LPOutcome solve_lp(const LinearProgram& lp) {
    lp.check_shape();
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.constraints.size();
    const bool maximize = lp.sense == Sense::Maximize;

    // Transformed objective: minimize, variables shifted to lb 0,
    // free variables split into a difference of two nonnegative parts.
    std::vector<Rational> shift(n, Rational(0));
    std::vector<char> is_free(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        VarBound b = lp.bound(j);
        if (b.free)
            is_free[j] = 1;
        else
            shift[j] = b.lower;
    }

    // Column layout: [plus part of x_j | minus parts of free x_j | slacks].
    std::vector<std::size_t> minus_col(n, 0);
    std::size_t next_col = n;
    for (std::size_t j = 0; j < n; ++j)
        if (is_free[j]) minus_col[j] = next_col++;
    const std::size_t num_struct = next_col;

    std::vector<int> slack_col(m, -1);   // +/-1 unit column per inequality row
    std::vector<int> slack_sign(m, 0);
    std::vector<char> row_negated(m, 0);
    std::vector<Rational> b(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        Rational rhs = c.rhs;
        for (std::size_t j = 0; j < n; ++j)
            if (shift[j] != 0) rhs -= c.coeffs[j] * shift[j];
        Rel rel = c.rel;
        if (rhs < 0) {
            row_negated[i] = 1;
            rhs = -rhs;
            if (rel == Rel::LessEq)
                rel = Rel::GreaterEq;
            else if (rel == Rel::GreaterEq)
                rel = Rel::LessEq;
        }
        b[i] = rhs;
        if (rel == Rel::LessEq) {
            slack_col[i] = static_cast<int>(next_col++);
            slack_sign[i] = 1;
        } else if (rel == Rel::GreaterEq) {
            slack_col[i] = static_cast<int>(next_col++);
            slack_sign[i] = -1;
        }
    }
    // Artificial columns: one per row that cannot seat a slack in the basis.
    std::vector<int> artificial_col(m, -1);
    for (std::size_t i = 0; i < m; ++i)
        if (slack_sign[i] != 1) artificial_col[i] = static_cast<int>(next_col++);
    const std::size_t total_cols = next_col;

    lp_detail::Tableau t;
    t.rows = m;
    t.cols = total_cols;
    t.a.assign(m + 1, std::vector<Rational>(total_cols + 1, Rational(0)));
    t.basis.assign(m, -1);
    t.frozen.assign(total_cols, 0);

    auto row_coeff = [&](std::size_t i, std::size_t j) -> Rational {
        Rational v = lp.constraints[i].coeffs[j];
        return row_negated[i] ? Rational(-v) : v;
    };
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Rational v = row_coeff(i, j);
            if (v == 0) continue;
            t.a[i][j] = v;
            if (is_free[j]) t.a[i][minus_col[j]] = -v;
        }
        if (slack_col[i] >= 0) t.a[i][slack_col[i]] = slack_sign[i];
        if (artificial_col[i] >= 0) t.a[i][artificial_col[i]] = 1;
        t.rhs(i) = b[i];
        t.basis[i] = artificial_col[i] >= 0 ? artificial_col[i] : slack_col[i];
    }

    // Phase 1: minimize the sum of artificials.
    std::vector<char> is_artificial(total_cols, 0);
    for (std::size_t i = 0; i < m; ++i)
        if (artificial_col[i] >= 0) is_artificial[artificial_col[i]] = 1;
    bool need_phase1 = false;
    for (std::size_t i = 0; i < m; ++i)
        if (artificial_col[i] >= 0) need_phase1 = true;
    std::vector<char> row_active(m, 1);
    if (need_phase1) {
        auto& cost = t.a[m];
        for (std::size_t i = 0; i < m; ++i)
            if (artificial_col[i] >= 0) cost[artificial_col[i]] = 1;
        // Price out the basic artificials.
        for (std::size_t i = 0; i < m; ++i)
            if (artificial_col[i] >= 0)
                for (std::size_t j = 0; j <= t.cols; ++j) cost[j] -= t.a[i][j];
        if (!lp_detail::run_simplex(t))
            throw TcsError(ErrorCode::Internal, "phase 1 unbounded");
        if (t.rhs(m) != 0) // cost row rhs = -objective; nonzero => infeasible
            return LPOutcome{LPStatus::Infeasible, {}, {}, Rational(0)};
        // Drive leftover basic artificials out, or retire their rows.
        // A retired row is all zero outside frozen artificial columns (its
        // rhs is 0 after a successful phase 1), so phase 2 never touches it.
        for (std::size_t r = 0; r < m; ++r) {
            if (!is_artificial[t.basis[r]]) continue;
            std::size_t s = t.cols;
            for (std::size_t j = 0; j < t.cols; ++j) {
                if (!is_artificial[j] && t.a[r][j] != 0) {
                    s = j;
                    break;
                }
            }
            if (s == t.cols) {
                row_active[r] = 0; // redundant row
            } else {
                t.pivot(r, s);
            }
        }
        // Artificials never re-enter.
        for (std::size_t j = 0; j < total_cols; ++j)
            if (is_artificial[j]) t.frozen[j] = 1;
    }

    // Phase 2 objective over the equality-form columns.
    std::vector<Rational> cost2(total_cols, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        Rational c = lp.objective[j];
        if (maximize) c = -c;
        cost2[j] = c;
        if (is_free[j]) cost2[minus_col[j]] = -c;
    }
    {
        auto& cost = t.a[m];
        for (std::size_t j = 0; j < total_cols; ++j) cost[j] = cost2[j];
        t.rhs(m) = 0;
        for (std::size_t r = 0; r < m; ++r) {
            if (!row_active[r]) continue;
            const Rational f = cost[t.basis[r]];
            if (f == 0) continue;
            for (std::size_t j = 0; j <= t.cols; ++j)
                if (t.a[r][j] != 0) cost[j] -= f * t.a[r][j];
        }
    }
    if (!lp_detail::run_simplex(t))
        return LPOutcome{LPStatus::Unbounded, {}, {}, Rational(0)};

    // Primal in original variable space.
    std::vector<Rational> z(total_cols, Rational(0));
    for (std::size_t r = 0; r < m; ++r) z[t.basis[r]] = t.rhs(r);
    std::vector<Rational> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = z[j];
        if (is_free[j]) x[j] -= z[minus_col[j]];
        x[j] += shift[j];
    }
    Rational obj(0);
    for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * x[j];

    // Dual from the final reduced costs of the rows' unit columns:
    // a slack/surplus/artificial column of row i is +/- e_i with zero
    // phase-2 cost, so its reduced cost there equals -/+ y_i.
    std::vector<Rational> dual(m, Rational(0));
    const auto& cost = t.a[m];
    for (std::size_t i = 0; i < m; ++i) {
        if (!row_active[i]) continue; // redundant row: dual 0 is valid
        Rational y;
        if (slack_col[i] >= 0)
            y = slack_sign[i] > 0 ? Rational(-cost[slack_col[i]])
                                  : Rational(cost[slack_col[i]]);
        else
            y = -cost[artificial_col[i]];
        if (row_negated[i]) y = -y;
        if (maximize) y = -y;
        dual[i] = y;
    }

    return LPOutcome{LPStatus::Optimal, std::move(x), std::move(dual), obj};
}

/// Independent exact re-check of an optimal outcome: primal feasibility,
/// dual sign pattern + feasibility, and zero duality gap. Never consults
/// solver internals.
inline LPCheckReport verify_lp_certificate(const LinearProgram& lp,
                                           const LPOutcome& out) {
    lp.check_shape();
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.constraints.size();
    if (out.status != LPStatus::Optimal)
        throw TcsError(ErrorCode::InvalidSpec, "certificate requires optimal status");
    if (out.primal.size() != n || out.dual.size() != m)
        throw TcsError(ErrorCode::DimensionMismatch, "primal/dual length mismatch");

    LPCheckReport rep;
    const bool maximize = lp.sense == Sense::Maximize;

    for (std::size_t j = 0; j < n; ++j) {
        VarBound bd = lp.bound(j);
        if (!bd.free && out.primal[j] < bd.lower)
            rep.fail("primal bound violated at variable " + std::to_string(j));
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        Rational lhs(0);
        for (std::size_t j = 0; j < n; ++j) lhs += c.coeffs[j] * out.primal[j];
        bool ok = c.rel == Rel::LessEq ? lhs <= c.rhs
                  : c.rel == Rel::Eq  ? lhs == c.rhs
                                      : lhs >= c.rhs;
        if (!ok) rep.fail("primal infeasible at row " + std::to_string(i));

        // Dual sign pattern.
        const Rational& y = out.dual[i];
        bool sign_ok = true;
        if (c.rel == Rel::LessEq) sign_ok = maximize ? y >= 0 : y <= 0;
        if (c.rel == Rel::GreaterEq) sign_ok = maximize ? y <= 0 : y >= 0;
        if (!sign_ok) rep.fail("dual sign violated at row " + std::to_string(i));
    }

    // Reduced costs and the gap identity c'x = b'y + rc'lb.
    Rational primal_obj(0);
    for (std::size_t j = 0; j < n; ++j) primal_obj += lp.objective[j] * out.primal[j];
    Rational dual_obj(0);
    for (std::size_t i = 0; i < m; ++i) dual_obj += lp.constraints[i].rhs * out.dual[i];
    for (std::size_t j = 0; j < n; ++j) {
        Rational rc = lp.objective[j];
        for (std::size_t i = 0; i < m; ++i)
            rc -= out.dual[i] * lp.constraints[i].coeffs[j];
        VarBound bd = lp.bound(j);
        if (bd.free) {
            if (rc != 0)
                rep.fail("nonzero reduced cost on free variable " + std::to_string(j));
        } else {
            bool ok = maximize ? rc <= 0 : rc >= 0;
            if (!ok)
                rep.fail("reduced cost sign violated at variable " + std::to_string(j));
            dual_obj += rc * bd.lower;
        }
    }
    if (primal_obj != out.objective)
        rep.fail("stated objective differs from c'x");
    if (primal_obj != dual_obj) rep.fail("nonzero duality gap");
    return rep;
}

} // namespace tcs
