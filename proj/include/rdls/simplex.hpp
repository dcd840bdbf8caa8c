#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rdls/matrix.hpp"

namespace rdls {

// Equality-constrained LP: minimize objective . x subject to
// eq_coeffs[r] . x = eq_rhs[r] for all rows and x[i] >= 0 wherever
// nonneg[i] is set (other variables are free).
struct LpProblem {
    std::size_t num_vars = 0;
    std::vector<Vector> eq_coeffs;
    Vector eq_rhs;
    std::vector<bool> nonneg;
    Vector objective;
};

enum class LpStatus { feasible, infeasible };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Vector x;
    double objective_value = 0.0;
};

// Two-phase dense simplex with Bland's anti-cycling rule. Free variables are
// split into positive/negative parts; the phase-1 basis is the artificial
// identity in row order. Identical inputs give identical outputs.
inline LpSolution lp_solve(const LpProblem& p) {
    const std::size_t m = p.eq_coeffs.size();
    if (p.eq_rhs.size() != m) throw InvalidInputError("lp_solve: rhs length != row count");
    if (p.nonneg.size() != p.num_vars) throw InvalidInputError("lp_solve: nonneg mask size");
    if (p.objective.size() != p.num_vars) throw InvalidInputError("lp_solve: objective size");
    for (const Vector& row : p.eq_coeffs) {
        if (row.size() != p.num_vars) throw InvalidInputError("lp_solve: row length != num_vars");
        if (!all_finite(row)) throw InvalidInputError("lp_solve: non-finite row");
    }
    if (!all_finite(p.eq_rhs) || !all_finite(p.objective))
        throw InvalidInputError("lp_solve: non-finite input");

    // Column mapping after splitting free variables: x[var] = sum sign * col.
    struct Col {
        std::size_t var;
        double sign;
    };
    std::vector<Col> cols;
    cols.reserve(p.num_vars * 2);
    for (std::size_t i = 0; i < p.num_vars; ++i) {
        cols.push_back({i, 1.0});
        if (!p.nonneg[i]) cols.push_back({i, -1.0});
    }
    const std::size_t n = cols.size();

    // Tableau rows kept in canonical form wrt the current basis:
    // columns [0, n) real, [n, n+m) artificial, column n+m the rhs.
    std::vector<Vector> t(m, Vector(n + m + 1, 0.0));
    double rhs_scale = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
        const double flip = p.eq_rhs[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < n; ++c)
            t[r][c] = flip * cols[c].sign * p.eq_coeffs[r][cols[c].var];
        t[r][n + m] = flip * p.eq_rhs[r];
        t[r][n + r] = 1.0;
        rhs_scale = std::max(rhs_scale, std::abs(p.eq_rhs[r]));
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

    const double pivot_tol = 1e-9;
    const double rc_tol = 1e-9;
    const std::size_t max_iters = 20000 + 200 * (m + n);

    const auto pivot = [&](std::size_t row, std::size_t col) {
        const double pv = t[row][col];
        for (double& v : t[row]) v /= pv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row) continue;
            const double f = t[r][col];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < t[r].size(); ++c) t[r][c] -= f * t[row][c];
        }
        basis[row] = col;
    };

    // Runs Bland-rule iterations for the given cost vector over the columns
    // in [0, limit). Returns false on unboundedness.
    const auto iterate = [&](const Vector& cost, std::size_t limit) {
        for (std::size_t iter = 0; iter < max_iters; ++iter) {
            // reduced cost z_j = c_j - c_B . column_j; Bland: first negative
            std::size_t entering = limit;
            for (std::size_t j = 0; j < limit; ++j) {
                double z = cost[j];
                for (std::size_t r = 0; r < m; ++r)
                    if (cost[basis[r]] != 0.0) z -= cost[basis[r]] * t[r][j];
                if (z < -rc_tol) {
                    entering = j;
                    break;
                }
            }
            if (entering == limit) return true;  // optimal
            std::size_t leave_row = m;
            double best_ratio = 0.0;
            for (std::size_t r = 0; r < m; ++r) {
                if (t[r][entering] <= pivot_tol) continue;
                const double ratio = t[r][n + m] / t[r][entering];
                if (leave_row == m || ratio < best_ratio - 1e-12 ||
                    (std::abs(ratio - best_ratio) <= 1e-12 && basis[r] < basis[leave_row])) {
                    leave_row = r;
                    best_ratio = ratio;
                }
            }
            if (leave_row == m) return false;  // unbounded direction
            pivot(leave_row, entering);
        }
        throw SolverFailureError("lp_solve: iteration cap hit");
    };

    // Phase 1: minimize the sum of artificials.
    Vector phase1_cost(n + m, 0.0);
    for (std::size_t r = 0; r < m; ++r) phase1_cost[n + r] = 1.0;
    if (!iterate(phase1_cost, n + m))
        throw SolverFailureError("lp_solve: phase 1 unbounded (should be impossible)");
    double artificial_sum = 0.0;
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] >= n) artificial_sum += t[r][n + m];
    if (artificial_sum > 1e-8 * rhs_scale) return LpSolution{LpStatus::infeasible, {}, 0.0};

    // Drive remaining artificials out of the basis; rows with no real pivot
    // are redundant and stay parked at zero.
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(t[r][j]) > pivot_tol) {
                pivot(r, j);
                break;
            }
        }
    }

    // Phase 2 over real columns only (artificials barred from entering).
    Vector phase2_cost(n + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = cols[j].sign * p.objective[cols[j].var];
    if (!iterate(phase2_cost, n)) throw UnboundedError("lp_solve: objective unbounded below");

    LpSolution sol;
    sol.status = LpStatus::feasible;
    sol.x.assign(p.num_vars, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) {
            const Col& c = cols[basis[r]];
            sol.x[c.var] += c.sign * t[r][n + m];
        }
    }
    sol.objective_value = dot(sol.x, p.objective);
    return sol;
}

}  // namespace rdls
