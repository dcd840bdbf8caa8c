#pragma once

#include <numeric>
#include <utility>
#include <vector>

#include "rdls/combinatorics.hpp"
#include "rdls/linalg.hpp"

namespace rdls {

// One agent's private data (A_i, b_i) with the derived quantities the update
// rule needs at every step: the kernel projector P_i and the min-norm local
// solution (A_i'A_i)^+ A_i'b_i.
struct AgentData {
    int id = 0;
    Matrix A;
    Vector b;
    Matrix projector;
    Vector local_solve;

    static AgentData make(int id, Matrix a, Vector b) {
        if (a.rows() != b.size()) throw InvalidInputError("AgentData: row counts of A and b differ");
        if (!a.all_finite() || !all_finite(b)) throw InvalidInputError("AgentData: non-finite data");
        AgentData agent;
        agent.id = id;
        agent.projector = kernel_projector(a);
        agent.local_solve = min_norm_ls_solve(a, b);
        agent.A = std::move(a);
        agent.b = std::move(b);
        return agent;
    }

    bool operator==(const AgentData& other) const {
        return id == other.id && A == other.A && b == other.b;
    }
};

// The n-agent problem data. Immutable after construction; the largest
// singular value of the stacked Gram matrix is cached as the scale that
// normalizes all set-equality tolerances.
class Network {
public:
    Network() = default;

    Network(std::size_t d, std::vector<AgentData> agents) : d_(d), agents_(std::move(agents)) {
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            if (agents_[i].id != static_cast<int>(i))
                throw InvalidInputError("Network: agent ids must be 0..n-1 in order");
            if (agents_[i].A.cols() != d_)
                throw InvalidInputError("Network: agent column dimension != d");
        }
        gram_ = Matrix(d_, d_);
        rhs_.assign(d_, 0.0);
        for (const AgentData& agent : agents_) accumulate_normal_eqs(agent, gram_, rhs_);
        const RankFactorization f = rank_factor(gram_);
        scale_ = f.singular_values.empty() ? 0.0 : f.singular_values[0];
    }

    static Network from_data(std::size_t d, const std::vector<std::pair<Matrix, Vector>>& data) {
        std::vector<AgentData> agents;
        agents.reserve(data.size());
        for (std::size_t i = 0; i < data.size(); ++i)
            agents.push_back(AgentData::make(static_cast<int>(i), data[i].first, data[i].second));
        return Network(d, std::move(agents));
    }

    std::size_t n() const { return agents_.size(); }
    std::size_t d() const { return d_; }
    const AgentData& agent(std::size_t i) const { return agents_[i]; }
    const std::vector<AgentData>& agents() const { return agents_; }
    const Matrix& stacked_gram() const { return gram_; }
    const Vector& stacked_rhs() const { return rhs_; }
    double system_scale() const { return scale_; }

    std::vector<int> all_ids() const {
        std::vector<int> ids(agents_.size());
        std::iota(ids.begin(), ids.end(), 0);
        return ids;
    }

    bool operator==(const Network& other) const {
        return d_ == other.d_ && agents_ == other.agents_;
    }

private:
    static void accumulate_normal_eqs(const AgentData& agent, Matrix& gram, Vector& rhs) {
        const std::size_t d = agent.A.cols();
        for (std::size_t r = 0; r < agent.A.rows(); ++r) {
            for (std::size_t i = 0; i < d; ++i) {
                const double ari = agent.A(r, i);
                if (ari == 0.0) continue;
                for (std::size_t j = 0; j < d; ++j) gram(i, j) += ari * agent.A(r, j);
                rhs[i] += ari * agent.b[r];
            }
        }
    }

    std::size_t d_ = 0;
    std::vector<AgentData> agents_;
    Matrix gram_;
    Vector rhs_;
    double scale_ = 0.0;

    friend AffineSet subset_solution_set(const Network&, const std::vector<int>&);
};

namespace detail {

inline double set_tolerance(const Network& net, double tol) {
    return tol * std::max(1.0, net.system_scale());
}

}  // namespace detail

// Least-squares solution set of the subsystem stacked over the given agents:
// {x : (sum A_i'A_i) x = sum A_i'b_i}.
inline AffineSet subset_solution_set(const Network& net, const std::vector<int>& subset) {
    if (subset.empty()) throw InvalidInputError("subset_solution_set: empty subset");
    Matrix gram(net.d(), net.d());
    Vector rhs(net.d(), 0.0);
    std::vector<char> seen(net.n(), 0);
    for (int id : subset) {
        if (id < 0 || static_cast<std::size_t>(id) >= net.n())
            throw InvalidInputError("subset_solution_set: agent id out of range");
        if (seen[static_cast<std::size_t>(id)])
            throw InvalidInputError("subset_solution_set: duplicate agent id");
        seen[static_cast<std::size_t>(id)] = 1;
        Network::accumulate_normal_eqs(net.agent(static_cast<std::size_t>(id)), gram, rhs);
    }
    // Normal equations are consistent by construction; the tolerance only
    // guards against numerical surprises.
    return affine_set_from_normal_eqs(gram, rhs, 1e-7);
}

// True iff every size-(n-k) subset of agents yields the same solution set.
// Each subset is compared against the lexicographically first one.
inline bool is_k_redundant(const Network& net, int k, double tol = 1e-8) {
    const int n = static_cast<int>(net.n());
    if (k < 0 || k > n - 1) throw InvalidInputError("is_k_redundant: k must lie in [0, n-1]");
    const double eff_tol = detail::set_tolerance(net, tol);
    const int size = n - k;
    bool first = true;
    AffineSet anchor;
    bool equal = true;
    for_each_combination(n, size, [&](const std::vector<int>& subset) {
        const AffineSet s = subset_solution_set(net, subset);
        if (first) {
            anchor = s;
            first = false;
            return true;
        }
        if (!affine_sets_equal(anchor, s, eff_tol)) {
            equal = false;
            return false;
        }
        return true;
    });
    return equal;
}

// Largest k for which the network is k-redundant; 0 is vacuously true.
inline int max_redundancy(const Network& net, double tol = 1e-8) {
    const int n = static_cast<int>(net.n());
    for (int k = n - 1; k >= 1; --k)
        if (is_k_redundant(net, k, tol)) return k;
    return 0;
}

// Checks the intersection characterization: the global least-squares set
// must equal the intersection of all per-agent solution sets. The
// intersection is computed by stacking every agent's normal-equation system
// as hard constraints; an empty intersection counts as a violation.
inline bool verify_intersection_characterization(const Network& net, double tol = 1e-8) {
    const std::size_t d = net.d();
    const AffineSet global = subset_solution_set(net, net.all_ids());

    Matrix stacked(net.n() * d, d);
    Vector stacked_rhs(net.n() * d, 0.0);
    for (std::size_t i = 0; i < net.n(); ++i) {
        const AgentData& agent = net.agent(i);
        const Matrix gram_i = agent.A.transposed() * agent.A;
        const Vector rhs_i = agent.A.transposed().apply(agent.b);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) stacked(i * d + r, c) = gram_i(r, c);
            stacked_rhs[i * d + r] = rhs_i[r];
        }
    }

    const RankFactorization f = rank_factor(stacked);
    const Vector x = pinv_apply(f, stacked_rhs);
    const double eff_tol = detail::set_tolerance(net, tol);
    if (norm2(stacked.apply(x) - stacked_rhs) > eff_tol) return false;  // empty intersection

    AffineSet intersection;
    intersection.dim = d;
    intersection.point = x;
    intersection.kernel_basis = f.kernel_basis;
    return affine_sets_equal(global, intersection, eff_tol);
}

}  // namespace rdls
