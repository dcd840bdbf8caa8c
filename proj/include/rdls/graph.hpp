#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "rdls/combinatorics.hpp"
#include "rdls/errors.hpp"

namespace rdls {

// Directed multi-agent neighbor graph. An arc (i, j) means information flows
// from i to j; the neighbors of j are its in-neighbors. No self-loops.
class DirectedGraph {
public:
    DirectedGraph() = default;

    DirectedGraph(int n, std::vector<std::pair<int, int>> arcs) : n_(n), arcs_(std::move(arcs)) {
        if (n_ < 0) throw InvalidInputError("DirectedGraph: negative vertex count");
        std::sort(arcs_.begin(), arcs_.end());
        for (std::size_t i = 0; i < arcs_.size(); ++i) {
            const auto [a, b] = arcs_[i];
            if (a < 0 || a >= n_ || b < 0 || b >= n_)
                throw InvalidInputError("DirectedGraph: arc endpoint out of range");
            if (a == b) throw InvalidInputError("DirectedGraph: self-loop");
            if (i > 0 && arcs_[i] == arcs_[i - 1]) throw InvalidInputError("DirectedGraph: duplicate arc");
        }
        in_.assign(static_cast<std::size_t>(n_), {});
        out_.assign(static_cast<std::size_t>(n_), {});
        for (const auto& [a, b] : arcs_) {
            out_[static_cast<std::size_t>(a)].push_back(b);
            in_[static_cast<std::size_t>(b)].push_back(a);
        }
        for (auto& v : in_) std::sort(v.begin(), v.end());
        for (auto& v : out_) std::sort(v.begin(), v.end());
    }

    static DirectedGraph complete_bidirectional(int n) {
        std::vector<std::pair<int, int>> arcs;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) arcs.emplace_back(i, j);
        return DirectedGraph(n, std::move(arcs));
    }

    static DirectedGraph cycle(int n) {
        std::vector<std::pair<int, int>> arcs;
        for (int i = 0; i < n; ++i) arcs.emplace_back(i, (i + 1) % n);
        return DirectedGraph(n, std::move(arcs));
    }

    int n() const { return n_; }
    const std::vector<std::pair<int, int>>& arcs() const { return arcs_; }
    const std::vector<int>& in_neighbors(int v) const { return in_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& out_neighbors(int v) const { return out_[static_cast<std::size_t>(v)]; }
    int in_degree(int v) const { return static_cast<int>(in_[static_cast<std::size_t>(v)].size()); }
    int min_in_degree() const {
        int d = n_ == 0 ? 0 : in_degree(0);
        for (int v = 1; v < n_; ++v) d = std::min(d, in_degree(v));
        return d;
    }

    bool operator==(const DirectedGraph& other) const {
        return n_ == other.n_ && arcs_ == other.arcs_;
    }

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> arcs_;
    std::vector<std::vector<int>> in_;
    std::vector<std::vector<int>> out_;
};

struct SccResult {
    std::vector<int> component_of;             // vertex -> component id
    std::vector<std::vector<int>> components;  // members, each sorted
    DirectedGraph condensation;                // acyclic, component ids topological
};

// Kosaraju condensation; component ids come out in topological order of the
// condensation (sources first).
inline SccResult scc_condensation(const DirectedGraph& g) {
    const int n = g.n();
    std::vector<int> finish_order;
    finish_order.reserve(static_cast<std::size_t>(n));
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int start = 0; start < n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        // iterative DFS recording finish times
        std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
        seen[static_cast<std::size_t>(start)] = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            const auto& outs = g.out_neighbors(v);
            if (next < outs.size()) {
                const int w = outs[next++];
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.emplace_back(w, 0);
                }
            } else {
                finish_order.push_back(v);
                stack.pop_back();
            }
        }
    }

    SccResult res;
    res.component_of.assign(static_cast<std::size_t>(n), -1);
    int comp = 0;
    for (auto it = finish_order.rbegin(); it != finish_order.rend(); ++it) {
        if (res.component_of[static_cast<std::size_t>(*it)] != -1) continue;
        std::vector<int> stack{*it};
        res.component_of[static_cast<std::size_t>(*it)] = comp;
        std::vector<int> members;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (int w : g.in_neighbors(v)) {  // reverse-graph edges
                if (res.component_of[static_cast<std::size_t>(w)] == -1) {
                    res.component_of[static_cast<std::size_t>(w)] = comp;
                    stack.push_back(w);
                }
            }
        }
        std::sort(members.begin(), members.end());
        res.components.push_back(std::move(members));
        ++comp;
    }

    std::set<std::pair<int, int>> cond_arcs;
    for (const auto& [a, b] : g.arcs()) {
        const int ca = res.component_of[static_cast<std::size_t>(a)];
        const int cb = res.component_of[static_cast<std::size_t>(b)];
        if (ca != cb) cond_arcs.emplace(ca, cb);
    }
    res.condensation =
        DirectedGraph(comp, std::vector<std::pair<int, int>>(cond_arcs.begin(), cond_arcs.end()));
    return res;
}

// Vertices from which every vertex is reachable; empty iff the graph is not
// rooted. When nonempty this is exactly the unique source component of the
// condensation.
inline std::vector<int> roots(const DirectedGraph& g) {
    if (g.n() == 0) return {};
    const SccResult scc = scc_condensation(g);
    int source = -1;
    int source_count = 0;
    for (int c = 0; c < scc.condensation.n(); ++c) {
        if (scc.condensation.in_degree(c) == 0) {
            source = c;
            ++source_count;
        }
    }
    if (source_count != 1) return {};
    return scc.components[static_cast<std::size_t>(source)];
}

// Number of roots of a rooted graph.
inline int kappa_of(const DirectedGraph& g) {
    const std::vector<int> r = roots(g);
    if (r.empty()) throw NotRootedError("kappa_of: graph is not rooted");
    return static_cast<int>(r.size());
}

constexpr std::uint64_t kDefaultReducedGraphCap = 10'000'000;

namespace detail {

inline void check_reduction_params(const DirectedGraph& g, int r, int s) {
    if (r < 0 || s < 0) throw InvalidInputError("reduced graphs: r and s must be nonnegative");
    if (r + s > g.n() - 1) throw InvalidInputError("reduced graphs: r + s must be at most n - 1");
}

}  // namespace detail

// Number of (r, s)-reduced graphs: sum over kept-vertex subsets S of the
// product over v in S of C(indeg_S(v), min(s, indeg_S(v))). Vertices with
// in-degree below s lose all incoming arcs (the conservative reading).
inline std::uint64_t count_reduced_graphs(const DirectedGraph& g, int r, int s) {
    detail::check_reduction_params(g, r, s);
    const int keep = g.n() - r;
    std::uint64_t total = 0;
    for_each_combination(g.n(), keep, [&](const std::vector<int>& kept) {
        std::vector<char> in_s(static_cast<std::size_t>(g.n()), 0);
        for (int v : kept) in_s[static_cast<std::size_t>(v)] = 1;
        std::uint64_t ways = 1;
        for (int v : kept) {
            int indeg = 0;
            for (int u : g.in_neighbors(v))
                if (in_s[static_cast<std::size_t>(u)]) ++indeg;
            const int remove = std::min(s, indeg);
            std::uint64_t prod;
            if (__builtin_mul_overflow(ways, binomial(static_cast<std::uint64_t>(indeg),
                                                      static_cast<std::uint64_t>(remove)),
                                       &prod))
                throw CapExceededError("count_reduced_graphs: count overflows 64 bits");
            ways = prod;
        }
        std::uint64_t next;
        if (__builtin_add_overflow(total, ways, &next))
            throw CapExceededError("count_reduced_graphs: count overflows 64 bits");
        total = next;
        return true;
    });
    return total;
}

// Streams every (r, s)-reduced graph of g, reindexed onto 0..|S|-1 with kept
// vertices in ascending order. Kept-vertex subsets are visited
// lexicographically, per-vertex arc removals likewise. The visitor returns
// bool; false stops early. Throws CapExceededError before visiting anything
// if the enumeration is larger than cap. Returns false iff stopped early.
template <class Fn>
bool for_each_reduced_graph(const DirectedGraph& g, int r, int s, std::uint64_t cap, Fn&& fn) {
    detail::check_reduction_params(g, r, s);
    if (count_reduced_graphs(g, r, s) > cap)
        throw CapExceededError("for_each_reduced_graph: enumeration exceeds cap");

    const int keep = g.n() - r;
    bool completed = true;
    for_each_combination(g.n(), keep, [&](const std::vector<int>& kept) {
        std::vector<int> new_index(static_cast<std::size_t>(g.n()), -1);
        for (std::size_t i = 0; i < kept.size(); ++i)
            new_index[static_cast<std::size_t>(kept[i])] = static_cast<int>(i);

        // induced in-arc lists, already reindexed
        std::vector<std::vector<int>> in_lists(kept.size());
        for (std::size_t i = 0; i < kept.size(); ++i)
            for (int u : g.in_neighbors(kept[i]))
                if (new_index[static_cast<std::size_t>(u)] >= 0)
                    in_lists[i].push_back(new_index[static_cast<std::size_t>(u)]);

        // per-vertex choice of which min(s, indeg) in-arcs to drop
        std::vector<std::vector<int>> dropped(kept.size());
        const auto recurse = [&](auto&& self, std::size_t v) -> bool {
            if (v == kept.size()) {
                std::vector<std::pair<int, int>> arcs;
                for (std::size_t i = 0; i < kept.size(); ++i) {
                    std::size_t di = 0;
                    for (std::size_t a = 0; a < in_lists[i].size(); ++a) {
                        if (di < dropped[i].size() &&
                            dropped[i][di] == static_cast<int>(a)) {
                            ++di;
                            continue;
                        }
                        arcs.emplace_back(in_lists[i][a], static_cast<int>(i));
                    }
                }
                return fn(DirectedGraph(keep, std::move(arcs)));
            }
            const int indeg = static_cast<int>(in_lists[v].size());
            const int remove = std::min(s, indeg);
            return for_each_combination(indeg, remove, [&](const std::vector<int>& choice) {
                dropped[v] = choice;
                return self(self, v + 1);
            });
        };
        if (!recurse(recurse, 0)) {
            completed = false;
            return false;
        }
        return true;
    });
    return completed;
}

// True iff every (r, s)-reduced graph of g is rooted. The in-degree >=
// r+s+1 necessary condition is used as a short-circuit only for s >= 1,
// where it is sound; for s = 0 enumeration decides (a rooted graph may have
// an in-degree-0 root).
inline bool is_resilient(const DirectedGraph& g, int r, int s,
                         std::uint64_t cap = kDefaultReducedGraphCap) {
    detail::check_reduction_params(g, r, s);
    if (s >= 1 && g.min_in_degree() < r + s + 1) return false;
    bool all_rooted = true;
    for_each_reduced_graph(g, r, s, cap, [&](const DirectedGraph& h) {
        if (roots(h).empty()) {
            all_rooted = false;
            return false;
        }
        return true;
    });
    return all_rooted;
}

// Smallest number of roots over all (r, s)-reduced graphs. Requires g to be
// (r, s)-resilient; a non-rooted reduction raises NotResilientError.
inline int kappa_min(const DirectedGraph& g, int r, int s,
                     std::uint64_t cap = kDefaultReducedGraphCap) {
    detail::check_reduction_params(g, r, s);
    int best = g.n() + 1;
    for_each_reduced_graph(g, r, s, cap, [&](const DirectedGraph& h) {
        const std::vector<int> rts = roots(h);
        if (rts.empty()) throw NotResilientError("kappa_min: graph is not (r,s)-resilient");
        best = std::min(best, static_cast<int>(rts.size()));
        return true;
    });
    return best;
}

}  // namespace rdls
