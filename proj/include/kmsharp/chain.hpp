#pragma once
/// @file chain.hpp
/// @brief The fox-and-hare absorbing Markov chains over the states
///        {(m,n): 0 <= m < n} plus {h, f}: chain D moves by optimal simple
///        plans and escapes with probability d_mn, chain C moves by the
///        product plans ztilde and escapes with probability c_mn.  Provides
///        transition rows, exact absorption probabilities, deterministic
///        Monte Carlo estimation, and the row-difference quantity Gamma(mn)
///        with its 4m(1-alpha)^2 coupling bound.
///
///        Absorbing states keep their whole mass on themselves; the row API
///        below covers transient states only and rejects anything else.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmsharp/mincost.hpp"
#include "kmsharp/rng.hpp"
#include "kmsharp/scalar.hpp"
#include "kmsharp/schedule.hpp"
#include "kmsharp/table.hpp"
#include "kmsharp/transport.hpp"

namespace kmsharp {

enum class ChainKind { C, D };

inline const char* kind_name(ChainKind k) { return k == ChainKind::C ? "C" : "D"; }

inline ChainKind parse_kind(const std::string& s) {
    if (s == "C") return ChainKind::C;
    if (s == "D") return ChainKind::D;
    throw std::invalid_argument("chain kind must be 'C' or 'D', got '" + s + "'");
}

/// One transition row at transient state (m,n): plan mass z_ij moves the
/// token to (i-1,j-1), with every (k,k) collapsing to the capture state f
/// and every (-1,k), k >= 0, to the escape state h.
template <class T>
struct TransitionRow {
    int m = 0, n = 0;
    ChainKind kind = ChainKind::D;
    std::vector<std::pair<std::pair<int, int>, T>> to_pairs;  // lex-ordered transient targets
    T to_f{0};
    T to_h{0};

    T total_mass() const {
        T s = to_f + to_h;
        for (const auto& e : to_pairs) s += e.second;
        return s;
    }
};

/// The D-row is built from a simple optimal plan: inside-out when every step
/// is >= 1/2, otherwise the epsilon-simplified solver plan.  The C-row uses
/// the product plan ztilde_ij = pi_i^m pi_j^n off the diagonal (and the same
/// diagonal pins z_ii = pi_i^n, which all collapse into f anyway).
template <class T>
TransitionRow<T> transition_row(ChainKind kind, int m, int n, const StepSchedule& s,
                                const DistanceTable<T>& d) {
    if (!(0 <= m && m < n))
        throw std::domain_error("transition rows exist only at transient states 0 <= m < n");
    TransportProblem<T> p = make_problem(s, m, n, d);

    TransportPlan<T> plan;
    if (kind == ChainKind::D) {
        plan = p.min_alpha >= Rat(1, 2) ? inside_out(p) : simplify_plan(solve_exact(p).plan, p);
    } else {
        plan = TransportPlan<T>{m, n, {}};
        for (int i = 0; i <= m; ++i) plan.add(i, i, p.demands[size_t(i)]);
        for (int i = 0; i <= m; ++i)
            for (int j = m + 1; j <= n; ++j) {
                T v = p.supplies[size_t(i)] * p.demands[size_t(j)];
                plan.add(i, j, v);
            }
        plan.sort_lex();
    }

    TransitionRow<T> row{m, n, kind, {}, T(0), T(0)};
    for (const auto& e : plan.entries) {
        if (e.i == e.j)
            row.to_f += e.value;  // target (i-1,i-1) is a capture
        else if (e.i == 0)
            row.to_h += e.value;  // target (-1,j-1) is an escape
        else
            row.to_pairs.push_back({{e.i - 1, e.j - 1}, e.value});
    }
    return row;  // plan entries were lex-sorted, so the targets are too
}

/// Escape probabilities for every state up to horizon N via the backward
/// recursion the chain defines; kind D reproduces the d-table and kind C the
/// c-table.  Boundary row (-1,k) |-> 1 and diagonal |-> 0 carry the
/// absorbing semantics.
template <class T>
TriTable<T> absorption_table(ChainKind kind, const StepSchedule& s, const DistanceTable<T>& d,
                             int N) {
    if (N > d.horizon())
        throw std::out_of_range("absorption table horizon exceeds the cost table's");
    TriTable<T> out(N, std::string("absorption_") + kind_name(kind));
    for (int n = 1; n <= N; ++n)
        for (int m = 0; m < n; ++m) {
            TransitionRow<T> row = transition_row(kind, m, n, s, d);
            T acc = row.to_h;  // escapes score 1 each
            for (const auto& e : row.to_pairs) acc += e.second * out.at(e.first.first, e.first.second);
            out.set(m, n, acc);
        }
    return out;
}

/// P(chain attains h | start at (m,n)); the diagonal starts captured.
template <class T>
T absorption_h(ChainKind kind, int m, int n, const StepSchedule& s, const DistanceTable<T>& d) {
    if (!(0 <= m && m <= n)) throw std::domain_error("absorption_h needs 0 <= m <= n");
    if (m == n) return T(0);
    return absorption_table(kind, s, d, n).at(m, n);
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

inline constexpr long long kSimulationShard = 65536;
inline constexpr const char* kSimulationGenerator = "splitmix64";

struct SimulationResult {
    long long samples = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Empirical escape frequency over independent trajectories.  Deterministic
/// given the seed: samples run in shards of 65536 with shard seed
/// seed + shard index, and each step draws its target by inverse CDF over
/// the row in the order [transient targets (lex) ..., f, h], h being the
/// catch-all tail bucket.
template <class T>
SimulationResult simulate(ChainKind kind, int m, int n, const StepSchedule& s,
                          const DistanceTable<T>& d, long long samples, std::uint64_t seed) {
    if (samples < 1) throw std::domain_error("simulate needs samples >= 1");
    if (!(0 <= m && m <= n)) throw std::domain_error("simulate needs 0 <= m <= n");

    // Compile every reachable row once, as binary64 cumulative weights.
    struct Row {
        std::vector<std::pair<int, int>> targets;
        std::vector<double> cum;  // targets..., then f; mass beyond is h
    };
    std::map<std::pair<int, int>, Row> rows;
    std::vector<std::pair<int, int>> pending;
    if (m < n) pending.push_back({m, n});
    while (!pending.empty()) {
        auto state = pending.back();
        pending.pop_back();
        if (rows.count(state)) continue;
        TransitionRow<T> tr = transition_row(kind, state.first, state.second, s, d);
        Row r;
        double acc = 0.0;
        for (const auto& e : tr.to_pairs) {
            acc += to_float(e.second);
            r.targets.push_back(e.first);
            r.cum.push_back(acc);
            pending.push_back(e.first);
        }
        r.cum.push_back(acc + to_float(tr.to_f));
        rows.emplace(state, std::move(r));
    }

    long long hits = 0, done = 0;
    for (std::uint64_t shard = 0; done < samples; ++shard) {
        SplitMix64 rng(seed + shard);
        const long long count = std::min(kSimulationShard, samples - done);
        for (long long t = 0; t < count; ++t) {
            int a = m, b = n, steps = 0;
            while (a != b) {
                // each move lowers the first coordinate, so (m+1) moves suffice
                if (++steps > m + 2)
                    throw std::logic_error("trajectory exceeded the stage bound (internal error)");
                const Row& r = rows.at({a, b});
                const double u = rng.next_double();
                size_t k = 0;
                while (k < r.cum.size() && u >= r.cum[k]) ++k;
                if (k < r.targets.size()) {
                    a = r.targets[k].first;
                    b = r.targets[k].second;
                } else {
                    if (k > r.targets.size()) ++hits;  // beyond the f bucket: escape
                    break;
                }
            }
        }
        done += count;
    }

    SimulationResult res;
    res.samples = samples;
    res.seed = seed;
    res.estimate = double(hits) / double(samples);
    res.std_error = std::sqrt(res.estimate * (1.0 - res.estimate) / double(samples));
    return res;
}

// ---------------------------------------------------------------------------
// row difference Gamma(mn) and the coupling bound
// ---------------------------------------------------------------------------

/// |z - ztilde| over the entries 1 <= i <= m < j <= n (the only places the
/// collapsed D- and C-rows can differ), with Gamma = the row sum.  Entries
/// are kept for the whole index range, zeros included, in lex order.
template <class T>
struct PlanDifference {
    int m = 0, n = 0;
    std::vector<PlanEntry<T>> entries;
    T gamma{0};
};

namespace detail {
inline void check_difference_domain(int m, int n, const Rat& alpha) {
    if (!(0 <= m && m < n)) throw std::domain_error("plan difference needs 0 <= m < n");
    if (!(alpha >= Rat(1, 2) && alpha < Rat(1)))
        throw std::domain_error("plan difference requires constant alpha >= 1/2");
}
}  // namespace detail

/// Closed-form route: the explicit case formula for |z_ij - ztilde_ij| under
/// a constant step alpha >= 1/2 (beta = 1-alpha),
///   alpha^2 beta^{m-i+n-j}                 for i < m, j < n
///   alpha beta^{m-i+1} (1 - beta^{n-m-1})  for i < m, j = n
///   alpha beta^{n-j+1}                     for i = m, j < n
///   beta^2 (1 - beta^{n-m-1})              for i = m, j = n.
template <class T>
PlanDifference<T> plan_difference_row(int m, int n, const Rat& alpha) {
    detail::check_difference_domain(m, n, alpha);
    const T a = scalar_cast<T>(alpha);
    const T b = T(1) - a;
    auto bpow = [&](int e) {
        T r(1);
        for (int t = 0; t < e; ++t) r *= b;
        return r;
    };
    PlanDifference<T> out{m, n, {}, T(0)};
    for (int i = 1; i <= m; ++i)
        for (int j = m + 1; j <= n; ++j) {
            T v(0);
            if (i < m && j < n)
                v = a * a * bpow(m - i + n - j);
            else if (i < m)
                v = a * bpow(m - i + 1) * (T(1) - bpow(n - m - 1));
            else if (j < n)
                v = a * bpow(n - j + 1);
            else
                v = b * b * (T(1) - bpow(n - m - 1));
            out.entries.push_back({i, j, v});
            out.gamma += v;
        }
    return out;
}

/// Direct route: materialize the two plans and subtract.  Kept separate from
/// the formula route on purpose so the two can be compared entry by entry.
template <class T>
PlanDifference<T> plan_difference_direct(int m, int n, const Rat& alpha) {
    detail::check_difference_domain(m, n, alpha);
    StepSchedule s = StepSchedule::constant(alpha);
    TransportProblem<T> p{m, n, weights<T>(s, m), weights<T>(s, n), nullptr, alpha};
    TransportPlan<T> z = closed_form_plan(p);  // never reads costs
    PlanDifference<T> out{m, n, {}, T(0)};
    for (int i = 1; i <= m; ++i)
        for (int j = m + 1; j <= n; ++j) {
            T ztilde = p.supplies[size_t(i)] * p.demands[size_t(j)];
            T diff = z.value_at(i, j) - ztilde;
            T v = abs_val(diff);
            out.entries.push_back({i, j, v});
            out.gamma += v;
        }
    return out;
}

/// The certified gap 4m(1-alpha)^2 between c_mn and d_mn (any n).
template <class T>
T coupling_bound(const Rat& alpha, int m) {
    if (m < 0) throw std::domain_error("coupling_bound needs m >= 0");
    if (!(alpha >= Rat(1, 2) && alpha < Rat(1)))
        throw std::domain_error("coupling bound requires constant alpha >= 1/2");
    const T b = scalar_cast<T>(Rat(1) - alpha);
    return T(4) * T(m) * b * b;
}

}  // namespace kmsharp
