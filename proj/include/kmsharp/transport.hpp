#pragma once
/// @file transport.hpp
/// @brief The bipartite transport problems behind each table cell: supplies
///        pi^m, demands pi^n, costs d_{i-1,j-1}.  Implements the inside-out
///        greedy algorithm, the closed-form plan valid for alpha_k >= 1/2,
///        plan cost/feasibility utilities, the no-crossing predicate, and the
///        epsilon-transfer simplification that pins the diagonal.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmsharp/scalar.hpp"
#include "kmsharp/schedule.hpp"
#include "kmsharp/table.hpp"

namespace kmsharp {

/// One transport problem (P_mn): ship row masses pi^m onto column masses
/// pi^n, paying d_{i-1,j-1} per unit on arc (i,j).
template <class T>
struct TransportProblem {
    int m, n;
    std::vector<T> supplies;  // pi^m, size m+1
    std::vector<T> demands;   // pi^n, size n+1
    const DistanceTable<T>* costs;
    Rat min_alpha = Rat(1);  // min over alpha_1..alpha_n; gates the closed form

    /// Cost accessor with the index shift: arc (i,j) pays d_{i-1,j-1}.
    const T& cost(int i, int j) const { return costs->at(i - 1, j - 1); }
};

template <class T>
TransportProblem<T> make_problem(const StepSchedule& s, int m, int n,
                                 const DistanceTable<T>& d) {
    if (!(0 <= m && m <= n)) throw std::domain_error("transport problem needs 0 <= m <= n");
    if (n - 1 > d.horizon() && n > 0)
        throw std::out_of_range("cost table horizon too small for pair (" + std::to_string(m) +
                                "," + std::to_string(n) + ")");
    return TransportProblem<T>{m, n, weights<T>(s, m), weights<T>(s, n), &d,
                               n >= 1 ? s.min_alpha(n) : Rat(1)};
}

/// Sparse nonnegative plan; entries kept in (i,j)-lexicographic order.
template <class T>
struct PlanEntry {
    int i, j;
    T value;
};

template <class T>
struct TransportPlan {
    int m = 0, n = 0;
    std::vector<PlanEntry<T>> entries;

    void add(int i, int j, const T& v) {
        if (v > T(0)) entries.push_back({i, j, v});
    }
    void sort_lex() {
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return a.i != b.i ? a.i < b.i : a.j < b.j;
        });
    }
    T value_at(int i, int j) const {
        for (const auto& e : entries)
            if (e.i == i && e.j == j) return e.value;
        return T(0);
    }
    T total_mass() const {
        T s(0);
        for (const auto& e : entries) s += e.value;
        return s;
    }
};

/// C^mn(z) = sum z_ij d_{i-1,j-1}.
template <class T>
T plan_cost(const TransportPlan<T>& z, const DistanceTable<T>& d) {
    T c(0);
    for (const auto& e : z.entries) c += e.value * d.at(e.i - 1, e.j - 1);
    return c;
}

/// Row sums == supplies, column sums == demands, entries >= 0.
template <class T>
bool is_feasible(const TransportPlan<T>& z, const TransportProblem<T>& p,
                 double tol = kFloatEqTol) {
    std::vector<T> row(size_t(p.m) + 1, T(0)), col(size_t(p.n) + 1, T(0));
    for (const auto& e : z.entries) {
        if (e.i < 0 || e.i > p.m || e.j < 0 || e.j > p.n || e.value < T(0)) return false;
        row[size_t(e.i)] += e.value;
        col[size_t(e.j)] += e.value;
    }
    auto eq = [&](const T& a, const T& b) {
        if constexpr (std::is_same_v<T, double>)
            return near(a, b, tol);
        else
            return a == b;
    };
    for (int i = 0; i <= p.m; ++i)
        if (!eq(row[size_t(i)], p.supplies[size_t(i)])) return false;
    for (int j = 0; j <= p.n; ++j)
        if (!eq(col[size_t(j)], p.demands[size_t(j)])) return false;
    return true;
}

namespace detail {

/// Shared inside-out engine: pins the diagonal, then fills each demand
/// j = m+1..n from sources i = m, m-1, ..., 0 using the residuals
/// pi_i^m - pi_i^n.  Emits entries through the callback; returns the cost.
template <class T, class Emit>
T inside_out_engine(const TransportProblem<T>& p, Emit&& emit) {
    const int m = p.m, n = p.n;
    T cost(0);
    for (int i = 0; i <= m; ++i) emit(i, i, p.demands[size_t(i)]);  // z_ii = pi_i^n, cost 0
    if (m == n) return cost;

    std::vector<T> residual(size_t(m) + 1);
    for (int i = 0; i <= m; ++i) residual[size_t(i)] = p.supplies[size_t(i)] - p.demands[size_t(i)];

    int src = m;
    for (int j = m + 1; j <= n; ++j) {
        T need = p.demands[size_t(j)];
        while (need > T(0)) {
            if (residual[size_t(src)] > T(0)) {
                T take = std::min(residual[size_t(src)], need);
                emit(src, j, take);
                cost += take * p.cost(src, j);
                residual[size_t(src)] -= take;
                need -= take;
            }
            if (need > T(0)) {
                if (src == 0) {
                    // Exact balance is an invariant; in float mode the
                    // residuals can undershoot the demands by rounding, so a
                    // shortfall at noise scale is drained from source 0.
                    if constexpr (!std::is_same_v<T, Rat>) {
                        if (need < T(1e-9)) {
                            emit(0, j, need);
                            cost += need * p.cost(0, j);
                            residual[0] -= need;
                            break;
                        }
                    }
                    throw std::logic_error("inside-out fill exhausted sources (unbalanced problem)");
                }
                --src;
            }
        }
    }
    return cost;
}

}  // namespace detail

/// The greedy inside-out plan (simple by construction).
template <class T>
TransportPlan<T> inside_out(const TransportProblem<T>& p) {
    TransportPlan<T> z{p.m, p.n, {}};
    detail::inside_out_engine(p, [&](int i, int j, const T& v) { z.add(i, j, v); });
    z.sort_lex();
    return z;
}

/// Cost of the inside-out plan without materializing entries (table builds).
template <class T>
T inside_out_cost(const TransportProblem<T>& p) {
    return detail::inside_out_engine(p, [](int, int, const T&) {});
}

/// The explicit plan of the closed form valid when every alpha_k >= 1/2:
///   z_ii = pi_i^n (i<=m);  z_mj = pi_j^n (m<j<n);
///   z_in = pi_i^m - pi_i^n (i<m);  z_mn = pi_m^m - sum_{j=m}^{n-1} pi_j^n.
/// The last entry goes negative for small steps, which is exactly why the
/// precondition exists; a negative value raises a domain error.
template <class T>
TransportPlan<T> closed_form_plan(const TransportProblem<T>& p) {
    const int m = p.m, n = p.n;
    if (p.min_alpha < Rat(1, 2))
        throw std::domain_error("closed-form plan requires every alpha_k >= 1/2");
    TransportPlan<T> z{m, n, {}};
    for (int i = 0; i <= m; ++i) z.add(i, i, p.demands[size_t(i)]);
    if (m == n) return z;
    for (int j = m + 1; j < n; ++j) z.add(m, j, p.demands[size_t(j)]);
    for (int i = 0; i < m; ++i) z.add(i, n, p.supplies[size_t(i)] - p.demands[size_t(i)]);
    T zmn = p.supplies[size_t(m)];
    for (int j = m; j < n; ++j) zmn -= p.demands[size_t(j)];
    if (zmn < T(0))
        throw std::domain_error("closed-form plan infeasible here (needs all alpha_k >= 1/2)");
    z.add(m, n, zmn);
    z.sort_lex();
    return z;
}

/// True iff no positive entries z_ij, z_kl exist with i < k < j < l.
template <class T>
bool verify_no_crossing(const TransportPlan<T>& z) {
    for (const auto& a : z.entries)
        for (const auto& b : z.entries)
            if (a.i < b.i && b.i < a.j && a.j < b.j) return false;
    return true;
}

/// Epsilon-transfer simplification: raises every diagonal entry to
/// z_ii = pi_i^n by the moves z_ii += eps, z_jk += eps, z_ji -= eps,
/// z_ik -= eps with eps = min{z_ji, z_ik}, scanning (i,k) lexicographically.
/// Each transfer changes the cost by eps*(d_{j-1,k-1} - d_{j-1,i-1} -
/// d_{i-1,k-1}) <= 0 (triangle inequality), so cost never increases; for an
/// optimal input it is unchanged and the output is a simple optimal plan.
template <class T>
TransportPlan<T> simplify_plan(const TransportPlan<T>& z, const TransportProblem<T>& p) {
    const int m = p.m, n = p.n;
    const T cost_before = plan_cost(z, *p.costs);

    std::vector<std::vector<T>> a(size_t(m) + 1, std::vector<T>(size_t(n) + 1, T(0)));
    for (const auto& e : z.entries) a[size_t(e.i)][size_t(e.j)] += e.value;

    for (int i = 0; i <= m; ++i) {
        for (int k = 0; k <= n && a[size_t(i)][size_t(i)] < p.demands[size_t(i)]; ++k) {
            if (k == i) continue;
            while (a[size_t(i)][size_t(k)] > T(0) &&
                   a[size_t(i)][size_t(i)] < p.demands[size_t(i)]) {
                int j = -1;
                for (int r = 0; r <= m; ++r)
                    if (r != i && a[size_t(r)][size_t(i)] > T(0)) {
                        j = r;
                        break;
                    }
                if (j < 0) break;  // column i already at its target
                T eps = std::min(a[size_t(j)][size_t(i)], a[size_t(i)][size_t(k)]);
                a[size_t(i)][size_t(i)] += eps;
                a[size_t(j)][size_t(k)] += eps;
                a[size_t(j)][size_t(i)] -= eps;
                a[size_t(i)][size_t(k)] -= eps;
            }
        }
    }

    TransportPlan<T> out{m, n, {}};
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= n; ++j) out.add(i, j, a[size_t(i)][size_t(j)]);
    out.sort_lex();

    const T cost_after = plan_cost(out, *p.costs);
    if (cost_after > cost_before)
        throw std::logic_error("simplify_plan increased the cost (internal error)");
    return out;
}

/// Dual variables of (D_mn), normalized to u_0 = 0.
template <class T>
struct DualPotentials {
    int n = 0;
    std::vector<T> u;  // size n+1
};

}  // namespace kmsharp
