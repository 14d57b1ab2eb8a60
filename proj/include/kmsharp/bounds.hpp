#pragma once
/// @file bounds.hpp
/// @brief Builds the triangular sharp-bound table d_mn (three agreeing
///        methods plus a validated O(N^2) recurrence for constant steps
///        >= 1/2) and the relaxed table c_mn, and runs the structural
///        property checks: metric axioms, row monotonicity, the 4-point
///        inequality, and the c-d gap bound.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmsharp/mincost.hpp"
#include "kmsharp/scalar.hpp"
#include "kmsharp/schedule.hpp"
#include "kmsharp/table.hpp"
#include "kmsharp/transport.hpp"

namespace kmsharp {

enum class BuildMethod { lp, inside_out, closed_form };

inline const char* method_name(BuildMethod m) {
    switch (m) {
        case BuildMethod::lp: return "lp";
        case BuildMethod::inside_out: return "inside_out";
        case BuildMethod::closed_form: return "closed_form";
    }
    return "?";
}

inline BuildMethod parse_method(const std::string& s) {
    if (s == "lp") return BuildMethod::lp;
    if (s == "inside_out") return BuildMethod::inside_out;
    if (s == "closed_form") return BuildMethod::closed_form;
    throw std::invalid_argument("unknown build method '" + s + "'");
}

namespace detail {
/// pi^k for k = 0..N, built incrementally (shared denominators in exact mode).
template <class T>
std::vector<std::vector<T>> all_weights(const StepSchedule& s, int N) {
    std::vector<std::vector<T>> ws;
    ws.reserve(size_t(N) + 1);
    std::vector<T> cur{T(1)};
    ws.push_back(cur);
    for (int k = 1; k <= N; ++k) {
        extend_weights(cur, scalar_cast<T>(s.alpha(k)));
        ws.push_back(cur);
    }
    return ws;
}
}  // namespace detail

/// d_mn for -1 <= m <= n <= N, filled column-by-column so that every cell
/// only reads entries with both indices strictly smaller.
template <class T>
DistanceTable<T> build_d_table(const StepSchedule& s, int N,
                               BuildMethod method = BuildMethod::inside_out) {
    s.require(N);
    const Rat min_alpha = N >= 1 ? s.min_alpha(N) : Rat(1);
    if (method == BuildMethod::closed_form && min_alpha < Rat(1, 2))
        throw std::domain_error("closed_form build requires every alpha_k >= 1/2");

    auto ws = detail::all_weights<T>(s, N);
    DistanceTable<T> d(N, method_name(method));
    for (int n = 1; n <= N; ++n) {
        for (int m = 0; m < n; ++m) {
            TransportProblem<T> prob{m, n, ws[size_t(m)], ws[size_t(n)], &d, min_alpha};
            T value;
            switch (method) {
                case BuildMethod::inside_out: value = inside_out_cost(prob); break;
                case BuildMethod::lp: value = solve_exact(prob).cost; break;
                case BuildMethod::closed_form:
                    value = plan_cost(closed_form_plan(prob), d);
                    break;
                default: throw std::logic_error("unhandled method");
            }
            d.set(m, n, value);
        }
    }
    return d;
}

/// O(N^2) prefix recurrence for constant alpha >= 1/2 (float only):
///   d_mn = a*P(m,n) + (1-b^{n-m})*Q(m,n) + (a-b+b^{n-m+1})*d_{m-1,n-1}
///   P(m,n+1) = b*(P(m,n) + d_{m-1,n-1}),   P(m,m+1) = 0
///   Q(m+1,n) = b*Q(m,n) + a*b*d_{m-1,n-1}, Q(1,n)   = b
/// Validated cell-by-cell against the direct build for N <= 200 in the test
/// suite; it does NOT hold below alpha = 1/2, hence the precondition.
inline DistanceTable<double> build_d_table_fast(double alpha, int N) {
    if (!(alpha >= 0.5 && alpha < 1.0))
        throw std::domain_error("recurrence build requires constant alpha in [1/2, 1)");
    const double b = 1.0 - alpha;
    DistanceTable<double> d(N, "recurrence");
    for (int n = 1; n <= N; ++n) d.set(0, n, 1.0 - std::pow(b, n));
    std::vector<double> P(size_t(N) + 1, 0.0);  // P[m] == P(m, n+1) after column n
    for (int n = 1; n <= N; ++n) {
        double Q = b;  // Q(1, n)
        for (int m = 1; m < n; ++m) {
            double prev = d.at(m - 1, n - 1);
            d.set(m, n, alpha * P[size_t(m)] + (1.0 - std::pow(b, n - m)) * Q +
                            (alpha - b + std::pow(b, n - m + 1)) * prev);
            Q = b * Q + alpha * b * prev;  // -> Q(m+1, n)
        }
        for (int m = 1; m <= n; ++m) P[size_t(m)] = b * (P[size_t(m)] + d.at(m - 1, n - 1));
    }
    return d;
}

/// c_mn = sum_{i<=m} sum_{j=m+1..n} pi_i^m pi_j^n c_{i-1,j-1} (product plans).
template <class T>
CTable<T> build_c_table(const StepSchedule& s, int N) {
    s.require(N);
    auto ws = detail::all_weights<T>(s, N);
    CTable<T> c(N, "relaxed");
    for (int n = 1; n <= N; ++n) {
        const auto& pin = ws[size_t(n)];
        for (int m = 0; m < n; ++m) {
            const auto& pim = ws[size_t(m)];
            T acc(0);
            for (int i = 0; i <= m; ++i) {
                T inner(0);
                for (int j = m + 1; j <= n; ++j) inner += pin[size_t(j)] * c.at(i - 1, j - 1);
                acc += pim[size_t(i)] * inner;
            }
            c.set(m, n, acc);
        }
    }
    return c;
}

/// Signed residual vector of (Q_mn): pi_j^n - pi_j^m for j = 0..n
/// (negative on j <= m, positive beyond, zero sum).
template <class T>
std::vector<T> residual_demands(const StepSchedule& s, int m, int n) {
    if (!(0 <= m && m <= n)) throw std::domain_error("residual_demands needs 0 <= m <= n");
    auto pin = weights<T>(s, n);
    auto pim = weights<T>(s, m);
    for (int j = 0; j <= m; ++j) pin[size_t(j)] -= pim[size_t(j)];
    return pin;
}

// ---------------------------------------------------------------------------
// property checks
// ---------------------------------------------------------------------------

/// Scan outcome: empty violation list <=> pass.  Keeps at most a handful of
/// witness tuples; worst violation magnitude is reported as binary64.
struct PropertyReport {
    std::string property;
    int horizon = 0;
    long long checked = 0;
    long long violation_count = 0;
    double worst = 0.0;
    std::vector<std::vector<int>> violations;  // first few witness index tuples

    PropertyReport() = default;
    PropertyReport(std::string prop, int h) : property(std::move(prop)), horizon(h) {}

    bool pass() const { return violation_count == 0; }

    void record(std::initializer_list<int> tuple, double magnitude) {
        ++violation_count;
        if (magnitude > worst) worst = magnitude;
        if (violations.size() < 8) violations.emplace_back(tuple);
    }
};

namespace detail {
/// Positive part of (x - slack) treating exact mode strictly and float mode
/// with the documented noise threshold.
template <class T>
double violation_excess(const T& x, double noise) {
    if constexpr (std::is_same_v<T, Rat>) {
        (void)noise;
        return x > 0 ? to_float(x) : 0.0;
    } else {
        return x > noise ? x : 0.0;
    }
}
}  // namespace detail

/// Metric axioms over the stored range [-1, N]: zero diagonal, positivity
/// off the diagonal, range [0,1], and the triangle inequality on all triples.
template <class T>
PropertyReport check_metric(const TriTable<T>& t, double noise = kPropertyNoise) {
    PropertyReport r{"metric", t.horizon()};
    const int N = t.horizon();
    for (int a = -1; a <= N; ++a) {
        ++r.checked;
        if (double e = detail::violation_excess<T>(abs_val(t.at(a, a)), noise); e > 0)
            r.record({a, a}, e);
        for (int b2 = a + 1; b2 <= N; ++b2) {
            ++r.checked;
            const T& v = t.at(a, b2);
            if (double e = detail::violation_excess<T>(T(0) - v, noise); e > 0)  // v < 0
                r.record({a, b2}, e);
            if (double e = detail::violation_excess<T>(v - T(1), noise); e > 0)  // v > 1
                r.record({a, b2}, e);
            bool positive = std::is_same_v<T, Rat> ? v > T(0) : to_float(v) > noise;
            if (!positive) r.record({a, b2}, 0.0);  // indiscernible pair
        }
    }
    for (int a = -1; a <= N; ++a)
        for (int b2 = -1; b2 <= N; ++b2)
            for (int c = -1; c <= N; ++c) {
                ++r.checked;
                T slack = t.at(a, b2) - t.at(a, c) - t.at(c, b2);
                if (double e = detail::violation_excess<T>(slack, noise); e > 0)
                    r.record({a, b2, c}, e);
            }
    return r;
}

/// n |-> d_mn is decreasing for n <= m and increasing for n >= m, per row m.
template <class T>
PropertyReport check_monotone(const TriTable<T>& t, double noise = kPropertyNoise) {
    PropertyReport r{"monotone", t.horizon()};
    const int N = t.horizon();
    for (int m = -1; m <= N; ++m)
        for (int n = -1; n < N; ++n) {
            ++r.checked;
            // decreasing side: d_{m,n} >= d_{m,n+1} while n+1 <= m
            T diff = n + 1 <= m ? t.at(m, n + 1) - t.at(m, n) : t.at(m, n) - t.at(m, n + 1);
            if (double e = detail::violation_excess<T>(diff, noise); e > 0) r.record({m, n}, e);
        }
    return r;
}

/// 4-point inequality d_il + d_kj <= d_ij + d_kl on all -1 <= i<=k<=j<=l <= N,
/// plus the equivalent pairwise form d_{m,n+1} + d_{m+1,n} <= d_{m,n} + d_{m+1,n+1}.
template <class T>
PropertyReport check_four_point(const TriTable<T>& t, double noise = kPropertyNoise) {
    PropertyReport r{"four_point", t.horizon()};
    const int N = t.horizon();
    for (int i = -1; i <= N; ++i)
        for (int k = i; k <= N; ++k)
            for (int j = k; j <= N; ++j)
                for (int l = j; l <= N; ++l) {
                    ++r.checked;
                    T slack = t.at(i, l) + t.at(k, j) - t.at(i, j) - t.at(k, l);
                    if (double e = detail::violation_excess<T>(slack, noise); e > 0)
                        r.record({i, k, j, l}, e);
                }
    for (int m = -1; m < N; ++m)
        for (int n = m + 1; n < N; ++n) {  // the form needs m+1 <= n
            ++r.checked;
            T slack = t.at(m, n + 1) + t.at(m + 1, n) - t.at(m, n) - t.at(m + 1, n + 1);
            if (double e = detail::violation_excess<T>(slack, noise); e > 0)
                r.record({m, n}, e);
        }
    return r;
}

/// 0 <= c_mn - d_mn <= 4m(1-alpha)^2 for all 0 <= m <= n <= N; the bound
/// holds for a constant schedule with alpha >= 1/2, so that is required.
template <class T>
PropertyReport check_cd_gap(const DistanceTable<T>& d, const CTable<T>& c,
                            const StepSchedule& s, double noise = kPropertyNoise) {
    if (!s.is_constant() || s.constant_alpha() < Rat(1, 2))
        throw std::domain_error("c-d gap bound requires a constant schedule with alpha >= 1/2");
    if (d.horizon() != c.horizon())
        throw std::invalid_argument("tables have different horizons");
    PropertyReport r{"cd_gap", d.horizon()};
    const int N = d.horizon();
    const T beta = scalar_cast<T>(Rat(1) - s.constant_alpha());
    for (int m = 0; m <= N; ++m) {
        T bound = T(4) * T(m) * beta * beta;
        for (int n = m; n <= N; ++n) {
            ++r.checked;
            T gap = c.at(m, n) - d.at(m, n);
            if (double e = detail::violation_excess<T>(T(0) - gap, noise); e > 0)
                r.record({m, n}, e);
            if (double e = detail::violation_excess<T>(gap - bound, noise); e > 0)
                r.record({m, n}, e);
        }
    }
    return r;
}

}  // namespace kmsharp
