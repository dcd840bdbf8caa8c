#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "rdls/combinatorics.hpp"
#include "rdls/simplex.hpp"

namespace rdls {

// Parameters of the multi-dimensional resilient consensus step. With state
// dimension d and at most beta Byzantine neighbors per agent, the outer
// subsets have size (d+1)*beta + 1 and the inner ones d*beta + 1.
struct FilterParams {
    std::size_t d = 1;
    int beta = 0;
    std::uint64_t cap = 100000;  // max per-agent subset work

    std::size_t outer_subset_size() const {
        return (d + 1) * static_cast<std::size_t>(beta) + 1;
    }
    std::size_t inner_subset_size() const { return d * static_cast<std::size_t>(beta) + 1; }
};

// What one agent sees at one tick: its own state and the value each
// in-neighbor sent it (Byzantine senders may put anything here).
struct InboxView {
    Vector self_state;
    std::map<int, Vector> messages;  // neighbor id -> received value
};

// a_i: the number of neighbor subsets of size (d+1)*beta + 1.
inline std::uint64_t count_A_subsets(std::size_t neighbor_count, const FilterParams& params) {
    if (neighbor_count < params.outer_subset_size())
        throw InsufficientNeighborsError(
            "count_A_subsets: need at least " + std::to_string(params.outer_subset_size()) +
            " neighbors, have " + std::to_string(neighbor_count));
    return binomial(neighbor_count, params.outer_subset_size());
}

namespace detail {

// L1 distance from q to the convex hull of the given points, via an LP that
// is always feasible (slack variables absorb any violation).
inline double hull_l1_distance(const std::vector<Vector>& points, const Vector& q) {
    const std::size_t k = points.size();
    const std::size_t d = q.size();
    LpProblem lp;
    lp.num_vars = k + 2 * d;  // lambda, e+, e-
    lp.nonneg.assign(lp.num_vars, true);
    lp.objective.assign(lp.num_vars, 0.0);
    for (std::size_t c = 0; c < 2 * d; ++c) lp.objective[k + c] = 1.0;
    for (std::size_t c = 0; c < d; ++c) {
        Vector row(lp.num_vars, 0.0);
        for (std::size_t j = 0; j < k; ++j) row[j] = points[j][c];
        row[k + c] = -1.0;
        row[k + d + c] = 1.0;
        lp.eq_coeffs.push_back(std::move(row));
        lp.eq_rhs.push_back(q[c]);
    }
    Vector sum_row(lp.num_vars, 0.0);
    for (std::size_t j = 0; j < k; ++j) sum_row[j] = 1.0;
    lp.eq_coeffs.push_back(std::move(sum_row));
    lp.eq_rhs.push_back(1.0);

    const LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::feasible)
        throw SolverFailureError("hull_l1_distance: slack LP reported infeasible");
    return sol.objective_value;
}

// General-dimension route for the hull-intersection point: one LP whose
// feasible set is the intersection of the inner-subset hulls, minimizing the
// 1-norm distance to the anchor.
inline Vector hull_intersection_point_lp(const std::vector<Vector>& points,
                                         const FilterParams& params, const Vector& anchor) {
    const std::size_t d = params.d;
    const std::size_t outer = points.size();
    const std::size_t inner = params.inner_subset_size();

    std::vector<std::vector<int>> subsets;
    for_each_combination(static_cast<int>(outer), static_cast<int>(inner),
                         [&](const std::vector<int>& idx) {
                             subsets.push_back(idx);
                             return true;
                         });

    // variables: y (d, free) | lambda blocks (inner each, nonneg) | u, w (d each, nonneg)
    LpProblem lp;
    const std::size_t lambda_base = d;
    const std::size_t u_base = d + subsets.size() * inner;
    const std::size_t w_base = u_base + d;
    lp.num_vars = w_base + d;
    lp.nonneg.assign(lp.num_vars, true);
    for (std::size_t c = 0; c < d; ++c) lp.nonneg[c] = false;
    lp.objective.assign(lp.num_vars, 0.0);
    for (std::size_t c = 0; c < 2 * d; ++c) lp.objective[u_base + c] = 1.0;

    for (std::size_t si = 0; si < subsets.size(); ++si) {
        const std::size_t base = lambda_base + si * inner;
        for (std::size_t c = 0; c < d; ++c) {
            Vector row(lp.num_vars, 0.0);
            for (std::size_t j = 0; j < inner; ++j)
                row[base + j] = points[static_cast<std::size_t>(subsets[si][j])][c];
            row[c] = -1.0;
            lp.eq_coeffs.push_back(std::move(row));
            lp.eq_rhs.push_back(0.0);
        }
        Vector sum_row(lp.num_vars, 0.0);
        for (std::size_t j = 0; j < inner; ++j) sum_row[base + j] = 1.0;
        lp.eq_coeffs.push_back(std::move(sum_row));
        lp.eq_rhs.push_back(1.0);
    }
    for (std::size_t c = 0; c < d; ++c) {
        Vector row(lp.num_vars, 0.0);
        row[c] = 1.0;
        row[u_base + c] = -1.0;
        row[w_base + c] = 1.0;
        lp.eq_coeffs.push_back(std::move(row));
        lp.eq_rhs.push_back(anchor[c]);
    }

    const LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::feasible)
        throw NoIntersectionError(
            "hull_intersection_point: subset hulls have empty intersection (Byzantine bound "
            "violated or existence hypothesis failed)");
    return Vector(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(d));
}

}  // namespace detail

// A point lying in the convex hull of every (d*beta + 1)-subset of the given
// (d+1)*beta + 1 points. Among feasible points the deterministic choice
// minimizes the 1-norm distance to the anchor (the caller's own state).
inline Vector hull_intersection_point(const std::vector<Vector>& points,
                                      const FilterParams& params, const Vector& anchor) {
    if (points.size() != params.outer_subset_size())
        throw InvalidInputError("hull_intersection_point: expected " +
                                std::to_string(params.outer_subset_size()) + " points, got " +
                                std::to_string(points.size()));
    if (anchor.size() != params.d)
        throw InvalidInputError("hull_intersection_point: anchor dimension mismatch");
    for (const Vector& p : points)
        if (p.size() != params.d || !all_finite(p))
            throw InvalidInputError("hull_intersection_point: bad point");

    if (points.size() == 1) return points[0];  // beta = 0: the hull is the point itself

    if (params.d == 1) {
        // Interval route: the feasible set is [max of subset minima, min of
        // subset maxima]; with subsets of size beta+1 out of 2*beta+1 values
        // both ends land on the median. Clamp the anchor into it.
        std::vector<double> vals(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) vals[i] = points[i][0];
        std::sort(vals.begin(), vals.end());
        const std::size_t m = params.inner_subset_size();
        const double lo = vals[vals.size() - m];
        const double hi = vals[m - 1];
        return {std::clamp(anchor[0], std::min(lo, hi), std::max(lo, hi))};
    }
    return detail::hull_intersection_point_lp(points, params, anchor);
}

// One resilient consensus step: v = (x_i + sum of the a_i hull-intersection
// points) / (1 + a_i), subsets in lexicographic order over sorted neighbor ids.
inline Vector filter_step(const InboxView& inbox, const FilterParams& params) {
    if (inbox.self_state.size() != params.d || !all_finite(inbox.self_state))
        throw InvalidInputError("filter_step: bad self state");
    std::vector<int> ids;
    std::vector<const Vector*> values;
    ids.reserve(inbox.messages.size());
    for (const auto& [id, value] : inbox.messages) {
        if (value.size() != params.d || !all_finite(value))
            throw InvalidInputError("filter_step: bad message from neighbor " + std::to_string(id));
        ids.push_back(id);
        values.push_back(&value);
    }

    const std::uint64_t a_i = count_A_subsets(ids.size(), params);
    const std::uint64_t inner_count =
        binomial(params.outer_subset_size(), params.inner_subset_size());
    std::uint64_t work;
    if (__builtin_mul_overflow(a_i, inner_count, &work) || work > params.cap)
        throw CapExceededError("filter_step: subset work " + std::to_string(a_i) + " x " +
                               std::to_string(inner_count) + " exceeds cap " +
                               std::to_string(params.cap));

    Vector acc = inbox.self_state;
    const std::size_t outer = params.outer_subset_size();
    for_each_combination(static_cast<int>(ids.size()), static_cast<int>(outer),
                         [&](const std::vector<int>& idx) {
                             std::vector<Vector> pts;
                             pts.reserve(outer);
                             for (int k : idx) pts.push_back(*values[static_cast<std::size_t>(k)]);
                             const Vector y =
                                 hull_intersection_point(pts, params, inbox.self_state);
                             for (std::size_t c = 0; c < params.d; ++c) acc[c] += y[c];
                             return true;
                         });
    return scaled(acc, 1.0 / (1.0 + static_cast<double>(a_i)));
}

// The uniform positive lower bound on effective consensus weights:
// eta = min_i 1 / ((d*beta + 1)(1 + a_i) C((d+1)*beta + 1, d*beta + 1)).
inline double eta_bound(const std::vector<std::size_t>& neighbor_counts,
                        const FilterParams& params) {
    if (neighbor_counts.empty()) throw InvalidInputError("eta_bound: no agents");
    const double inner = static_cast<double>(params.inner_subset_size());
    const double choose =
        static_cast<double>(binomial(params.outer_subset_size(), params.inner_subset_size()));
    double eta = 1.0;
    for (std::size_t count : neighbor_counts) {
        const double a_i = static_cast<double>(count_A_subsets(count, params));
        eta = std::min(eta, 1.0 / (inner * (1.0 + a_i) * choose));
    }
    return eta;
}

// Lemma-level runtime check: is v within tol of the convex hull of the given
// honest values (self state included by the caller)?
inline bool verify_hull_membership(const Vector& v, const std::vector<Vector>& honest_points,
                                   double tol = 1e-8) {
    if (honest_points.empty()) throw InvalidInputError("verify_hull_membership: no honest points");
    return detail::hull_l1_distance(honest_points, v) <= tol;
}

}  // namespace rdls
