#pragma once
/// @file rates.hpp
/// @brief Rate quantities on top of the tables: kappa_n = sqrt(n a(1-a))
///        d_{n,n+1}/a and its c-analog kappa~_n, the per-alpha rate constant
///        gamma(a) = sup_n sqrt(n) d_{n,n+1}/a (truncated, with a saturation
///        flag), the integral form of kappa~_n, the theta_n = 1 - ln n/n
///        diagnostics approaching 1/sqrt(pi), and the degree-28 polynomial
///        identity for d_{8,9}(a)/a.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kmsharp/bounds.hpp"
#include "kmsharp/scalar.hpp"
#include "kmsharp/schedule.hpp"
#include "kmsharp/table.hpp"

namespace kmsharp {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrtPi = 0.5641895835477563;  // 1/sqrt(pi)
inline constexpr int kGammaDefaultNmax = 512;

/// kappa_n(alpha) = sqrt(n alpha (1-alpha)) d_{n,n+1}(alpha) / alpha, read
/// off a table built for the constant schedule alpha.
template <class T>
double kappa_n(const TriTable<T>& d, const Rat& alpha, int n) {
    if (n < 1) throw std::domain_error("kappa_n needs n >= 1");
    if (n + 1 > d.horizon())
        throw std::domain_error("table horizon " + std::to_string(d.horizon()) +
                                " too small for kappa_" + std::to_string(n));
    const double a = to_float(alpha);
    return std::sqrt(double(n) * a * (1.0 - a)) * to_float(d.at(n, n + 1)) / a;
}

/// Same scaling on the relaxed table.
template <class T>
double kappa_tilde_n(const CTable<T>& c, const Rat& alpha, int n) {
    return kappa_n(c, alpha, n);
}

struct RatePoint {
    int n = 0;
    double alpha = 0.0;
    double kappa = 0.0;
    double kappa_tilde = 0.0;
};

/// Both curves for n = 1..N at a constant step (float tables; the sharp one
/// through the O(N^2) recurrence when alpha >= 1/2).
inline std::vector<RatePoint> rate_curve(const Rat& alpha, int N) {
    if (N < 1) throw std::domain_error("rate curve needs N >= 1");
    const StepSchedule s = StepSchedule::constant(alpha);
    const double a = to_float(alpha);
    const DistanceTable<double> d = alpha >= Rat(1, 2)
                                        ? build_d_table_fast(a, N + 1)
                                        : build_d_table<double>(s, N + 1, BuildMethod::inside_out);
    const CTable<double> c = build_c_table<double>(s, N + 1);
    std::vector<RatePoint> out;
    out.reserve(size_t(N));
    for (int n = 1; n <= N; ++n)
        out.push_back({n, a, kappa_n(d, alpha, n), kappa_tilde_n(c, alpha, n)});
    return out;
}

// ---------------------------------------------------------------------------
// gamma(alpha)
// ---------------------------------------------------------------------------

struct GammaResult {
    double alpha = 0.0;
    double value = 0.0;  // max over 1 <= n <= n_max of sqrt(n) d_{n,n+1}/alpha
    int argmax_n = 0;
    int n_max = 0;
    bool saturated = false;  // argmax hit the truncation: supremum untrusted
};

inline GammaResult gamma(const Rat& alpha, int n_max = kGammaDefaultNmax) {
    if (n_max < 1) throw std::domain_error("gamma needs n_max >= 1");
    const StepSchedule s = StepSchedule::constant(alpha);
    const double a = to_float(alpha);
    const DistanceTable<double> d =
        alpha >= Rat(1, 2) ? build_d_table_fast(a, n_max + 1)
                           : build_d_table<double>(s, n_max + 1, BuildMethod::inside_out);
    GammaResult g{a, 0.0, 0, n_max, false};
    for (int n = 1; n <= n_max; ++n) {
        const double v = std::sqrt(double(n)) * d.at(n, n + 1) / a;
        if (v > g.value) {
            g.value = v;
            g.argmax_n = n;
        }
    }
    g.saturated = g.argmax_n == n_max;
    return g;
}

inline std::vector<GammaResult> gamma_sweep(const std::vector<Rat>& grid,
                                            int n_max = kGammaDefaultNmax) {
    std::vector<GammaResult> out;
    out.reserve(grid.size());
    for (const Rat& a : grid) out.push_back(gamma(a, n_max));
    return out;
}

// ---------------------------------------------------------------------------
// integral form of kappa~_n
// ---------------------------------------------------------------------------

/// kappa~_n(alpha) = (1/pi) integral_0^L sqrt(1/s - 1/L) (1-s/n)^n ds with
/// L = 4 n alpha (1-alpha).  The substitution s = L sin^2(u) removes both
/// square-root endpoint singularities at once:
///   kappa~_n = (2 sqrt(L) / pi) integral_0^{pi/2} cos^2(u) (1 - L sin^2(u)/n)^n du
/// which is analytic on the whole interval; the power term goes through
/// exp(n log1p(.)) for stability (L <= n always, so its argument stays in
/// [-1, 0]).  Adaptive Gauss-Kronrod, absolute error checked against 1e-10.
inline double kappa_tilde_integral(double alpha, long long n) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("kappa_tilde_integral needs alpha in (0,1)");
    if (n < 1) throw std::domain_error("kappa_tilde_integral needs n >= 1");

    const double nn = double(n);
    const double L = 4.0 * nn * alpha * (1.0 - alpha);
    auto f = [&](double u) {
        const double c = std::cos(u);
        const double s = std::sin(u);
        const double base = -L * s * s / nn;
        const double pw = base <= -1.0 ? 0.0 : std::exp(nn * std::log1p(base));
        return c * c * pw;
    };

    double err = 0.0;
    const double raw = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, 0.0, kPi / 2.0, 15, 1e-11, &err);
    if (!(err <= 1e-10))
        throw std::runtime_error("kappa_tilde_integral did not converge: error bound " +
                                 format_value(err) + " at alpha=" + format_value(alpha) +
                                 ", n=" + std::to_string(n));
    return 2.0 * std::sqrt(L) / kPi * raw;
}

// ---------------------------------------------------------------------------
// theta_n diagnostics
// ---------------------------------------------------------------------------

struct ThetaDiagnostic {
    long long n = 0;
    double theta = 0.0;        // 1 - ln n / n
    double kappa_tilde = 0.0;  // kappa~_n(theta_n), integral route
    double gap = 0.0;          // |kappa_tilde - 1/sqrt(pi)|
    double gap_bound = 0.0;    // 4 n^{3/2} (1-theta)^{5/2} / sqrt(theta)
};

inline std::vector<ThetaDiagnostic> limit_diagnostics(const std::vector<long long>& ns) {
    std::vector<ThetaDiagnostic> out;
    out.reserve(ns.size());
    for (long long n : ns) {
        if (n < 2) throw std::domain_error("limit diagnostics need n >= 2");
        const double nn = double(n);
        const double theta = 1.0 - std::log(nn) / nn;
        const double kt = kappa_tilde_integral(theta, n);
        const double bound = 4.0 * std::pow(nn, 1.5) * std::pow(1.0 - theta, 2.5) /
                             std::sqrt(theta);
        out.push_back({n, theta, kt, std::fabs(kt - kInvSqrtPi), bound});
    }
    return out;
}

// ---------------------------------------------------------------------------
// the d_{8,9} polynomial
// ---------------------------------------------------------------------------

/// d_{8,9}(alpha)/alpha for alpha >= 1/2 as the degree-28 polynomial with the
/// integer coefficients below (ascending powers), evaluated by Horner.
template <class T>
T poly_d89(const T& alpha) {
    static constexpr std::int64_t kCoeffs[29] = {
        1,         -8,        64,        -448,      2835,      -16008,    79034,
        -334908,   1201873,   -3622324,  9129380,   -19214722, 33796129,  -49776610,
        61566687,  -64152608, 56488500,  -42133404, 26651679,  -14288252, 6472429,
        -2462126,  778478,    -201354,   41584,     -6604,     758,       -56,
        2};
    if (!(alpha >= T(1) / T(2)))
        throw std::domain_error("poly_d89 is the d_{8,9}/alpha form for alpha >= 1/2 only");
    T acc(0);
    for (int k = 28; k >= 0; --k) acc = acc * alpha + T(long(kCoeffs[k]));
    return acc;
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

inline void write_rates_csv(std::ostream& os, const std::vector<RatePoint>& rows,
                            const std::vector<std::string>& comments = {}) {
    for (const auto& c : comments) os << "# " << c << "\n";
    os << "n,alpha,kappa,kappa_tilde\n";
    for (const auto& r : rows)
        os << r.n << "," << format_g7(r.alpha) << "," << format_g7(r.kappa) << ","
           << format_g7(r.kappa_tilde) << "\n";
}

inline void write_gamma_csv(std::ostream& os, const std::vector<GammaResult>& rows,
                            const std::vector<std::string>& comments = {}) {
    for (const auto& c : comments) os << "# " << c << "\n";
    os << "alpha,gamma,argmax_n,saturated\n";
    for (const auto& r : rows)
        os << format_g7(r.alpha) << "," << format_g7(r.value) << "," << r.argmax_n << ","
           << (r.saturated ? "true" : "false") << "\n";
}

inline void write_limit_csv(std::ostream& os, const std::vector<ThetaDiagnostic>& rows,
                            const std::vector<std::string>& comments = {}) {
    for (const auto& c : comments) os << "# " << c << "\n";
    os << "n,theta,kappa_tilde,gap,gap_bound\n";
    for (const auto& r : rows)
        os << r.n << "," << format_value(r.theta) << "," << format_value(r.kappa_tilde) << ","
           << format_value(r.gap) << "," << format_value(r.gap_bound) << "\n";
}

}  // namespace kmsharp
