#pragma once
/// @file mincost.hpp
/// @brief Exact transport solver: successive shortest paths with node
///        potentials on the residual form (Q_mn) — excesses pi_i^m - pi_i^n
///        at i <= m feed the demands pi_j^n at j > m; arcs between all node
///        pairs cost d_{i-1,j-1}.  The potentials fall out of the algorithm
///        as complementary duals, normalized here to u_0 = 0.  Works over
///        exact rationals or binary64 through the shared scalar parameter.

#include <map>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kmsharp/transport.hpp"

namespace kmsharp {

template <class T>
struct SolveResult {
    TransportPlan<T> plan;
    DualPotentials<T> duals;
    T cost;
};

/// Cost-minimal plan over F^mn plus complementary dual potentials.
/// Deterministic: Dijkstra orders by (distance, node index) and relaxes
/// strictly, so ties always resolve the same way.
template <class T>
SolveResult<T> solve_exact(const TransportProblem<T>& p) {
    const int m = p.m, n = p.n, V = n + 1;

    SolveResult<T> res{TransportPlan<T>{m, n, {}}, DualPotentials<T>{n, std::vector<T>(size_t(V), T(0))},
                       T(0)};
    for (int i = 0; i <= m; ++i) res.plan.add(i, i, p.demands[size_t(i)]);
    if (m == n) {
        res.plan.sort_lex();
        return res;  // diagonal plan, zero cost, zero duals
    }

    if constexpr (std::is_same_v<T, double>) {
        // Successive shortest paths needs residual masses that reach exact
        // zero; binary64 subtraction leaves dust that never drains, so the
        // float facade lifts the problem exactly (every double is a
        // rational), solves it there, and rounds the answer once.
        TriTable<Rat> costs(n - 1, "lifted");
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) costs.set(a, b, Rat(p.costs->at(a, b)));
        TransportProblem<Rat> q{m, n, {}, {}, &costs, p.min_alpha};
        q.supplies.reserve(size_t(m) + 1);
        q.demands.reserve(size_t(V));
        for (const double x : p.supplies) q.supplies.emplace_back(x);
        for (const double x : p.demands) q.demands.emplace_back(x);

        const SolveResult<Rat> er = solve_exact<Rat>(q);
        res.plan.entries.clear();
        for (const auto& e : er.plan.entries) res.plan.add(e.i, e.j, to_float(e.value));
        res.plan.sort_lex();
        for (int j = 0; j <= n; ++j) res.duals.u[size_t(j)] = to_float(er.duals.u[size_t(j)]);
        res.cost = to_float(er.cost);
        return res;
    }

    // signed imbalance: excess[i] > 0 must flow out, deficit[j] > 0 must arrive
    std::vector<T> excess(size_t(V), T(0)), deficit(size_t(V), T(0));
    for (int i = 0; i <= m; ++i) excess[size_t(i)] = p.supplies[size_t(i)] - p.demands[size_t(i)];
    for (int j = m + 1; j <= n; ++j) deficit[size_t(j)] = p.demands[size_t(j)];

    std::map<std::pair<int, int>, T> flow;  // shipped mass per directed arc
    std::vector<T> pot(size_t(V), T(0));
    auto arc_cost = [&](int u, int v) { return p.costs->at(u - 1, v - 1); };

    const T none(-1);
    std::vector<T> dist(static_cast<size_t>(V));
    std::vector<char> seen(static_cast<size_t>(V));
    std::vector<std::pair<int, char>> parent(static_cast<size_t>(V));  // (prev node, used residual arc)

    auto next_excess = [&]() {
        for (int i = 0; i < V; ++i)
            if (excess[size_t(i)] > T(0)) return i;
        return -1;
    };

    for (int src = next_excess(); src >= 0; src = next_excess()) {
        // Dijkstra over reduced costs rc(u,v) = cost(u,v) + pot[u] - pot[v] >= 0
        std::fill(dist.begin(), dist.end(), none);
        std::fill(seen.begin(), seen.end(), 0);
        dist[size_t(src)] = T(0);
        parent[size_t(src)] = {src, 0};
        using Item = std::pair<T, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        heap.push({T(0), src});
        while (!heap.empty()) {
            auto [du, u] = heap.top();
            heap.pop();
            if (seen[size_t(u)]) continue;
            seen[size_t(u)] = 1;
            for (int v = 0; v < V; ++v) {
                if (v == u) continue;
                // forward arc u -> v
                {
                    T nd = du + arc_cost(u, v) + pot[size_t(u)] - pot[size_t(v)];
                    if (dist[size_t(v)] == none || nd < dist[size_t(v)]) {
                        dist[size_t(v)] = nd;
                        parent[size_t(v)] = {u, 0};
                        heap.push({nd, v});
                    }
                }
                // residual arc u -> v (undo shipped v -> u)
                if (auto it = flow.find({v, u}); it != flow.end() && it->second > T(0)) {
                    T nd = du - arc_cost(v, u) + pot[size_t(u)] - pot[size_t(v)];
                    if (dist[size_t(v)] == none || nd < dist[size_t(v)]) {
                        dist[size_t(v)] = nd;
                        parent[size_t(v)] = {u, 1};
                        heap.push({nd, v});
                    }
                }
            }
        }

        int sink = -1;
        for (int j = 0; j < V; ++j)
            if (deficit[size_t(j)] > T(0) && (sink < 0 || dist[size_t(j)] < dist[size_t(sink)]))
                sink = j;
        if (sink < 0) throw std::logic_error("unbalanced transport problem (no deficit left)");

        for (int v = 0; v < V; ++v) pot[size_t(v)] += dist[size_t(v)];

        // bottleneck along src -> ... -> sink
        T delta = std::min(excess[size_t(src)], deficit[size_t(sink)]);
        for (int v = sink; v != src;) {
            auto [u, residual] = parent[size_t(v)];
            if (residual) delta = std::min(delta, flow.at({v, u}));
            v = u;
        }
        for (int v = sink; v != src;) {
            auto [u, residual] = parent[size_t(v)];
            if (residual) {
                flow.at({v, u}) -= delta;
            } else {
                flow[{u, v}] += delta;
            }
            v = u;
        }
        excess[size_t(src)] -= delta;
        deficit[size_t(sink)] -= delta;
    }

    for (const auto& [arc, f] : flow) {
        if (!(f >= T(0))) throw std::logic_error("negative residual flow (internal error)");
        if (f > T(0)) {
            // triangle-inequality costs keep every shipped arc source -> demand
            if (arc.first > m || arc.second <= m)
                throw std::logic_error("transshipment arc in final flow (internal error)");
            res.plan.add(arc.first, arc.second, f);
            res.cost += f * arc_cost(arc.first, arc.second);
        }
    }
    res.plan.sort_lex();

    for (int j = 0; j <= n; ++j) res.duals.u[size_t(j)] = pot[size_t(j)] - pot[size_t(0)];
    return res;
}

}  // namespace kmsharp
