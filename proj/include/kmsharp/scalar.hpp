#pragma once
/// @file scalar.hpp
/// @brief Scalar abstraction: every quantity (alpha, pi_i^n, d_mn, c_mn, z_ij,
///        u_j, ...) is computed either over exact rationals (GMP mpq_class)
///        or over IEEE-754 binary64, selected per run.  Also houses parsing
///        and the deterministic text formatting used by the CSV/JSON emitters.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace kmsharp {

/// Exact rational scalar; arithmetic keeps the canonical reduced form.
using Rat = mpq_class;

enum class NumericMode { exact, floating };

inline const char* mode_name(NumericMode m) {
    return m == NumericMode::exact ? "exact" : "float";
}

/// Equality tests in float mode use this relative tolerance unless an
/// operation specifies otherwise.
inline constexpr double kFloatEqTol = 1e-12;

/// Property scans in float mode report violations below this absolute
/// magnitude as accumulated-rounding noise, not failures.
inline constexpr double kPropertyNoise = 1e-12;

/// Nearest binary64 to the exact rational, round-to-nearest-even.
/// (mpq_get_d truncates, so the conversion goes through MPFR.)
inline double to_float(const Rat& x) {
    mpfr_t t;
    mpfr_init2(t, 53);
    mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDN);
    double d = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return d;
}
inline double to_float(double x) { return x; }

/// Convert an exact rational into the scalar type of a computation.
template <class T>
T scalar_cast(const Rat& x);
template <>
inline Rat scalar_cast<Rat>(const Rat& x) { return x; }
template <>
inline double scalar_cast<double>(const Rat& x) { return to_float(x); }

template <class T>
T abs_val(const T& x) { return x < T(0) ? T(-x) : x; }

/// |a - b| <= tol * max(1, |a|, |b|); used for float-mode equality.
inline bool near(double a, double b, double tol = kFloatEqTol) {
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= tol * scale;
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace detail {
inline bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}
}  // namespace detail

/// Parse "p/q" or a finite decimal ("0.48121", "1", "9.5e-1") into the exact
/// rational it denotes.  Throws std::invalid_argument on malformed text.
inline Rat parse_rational(const std::string& text) {
    auto fail = [&]() -> Rat {
        throw std::invalid_argument("not a rational literal: '" + text + "'");
    };
    if (text.empty()) return fail();

    if (auto slash = text.find('/'); slash != std::string::npos) {
        std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
        bool neg = !ns.empty() && (ns[0] == '-' || ns[0] == '+') && (ns[0] == '-');
        if (!ns.empty() && (ns[0] == '-' || ns[0] == '+')) ns = ns.substr(1);
        if (!detail::all_digits(ns) || !detail::all_digits(ds)) return fail();
        mpz_class num(ns, 10), den(ds, 10);
        if (den == 0) return fail();
        Rat r(neg ? mpz_class(-num) : num, den);
        r.canonicalize();
        return r;
    }

    std::string s = text;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        std::string es = s.substr(e + 1);
        s = s.substr(0, e);
        bool eneg = !es.empty() && (es[0] == '-' || es[0] == '+') && (es[0] == '-');
        if (!es.empty() && (es[0] == '-' || es[0] == '+')) es = es.substr(1);
        if (!detail::all_digits(es) || es.size() > 6) return fail();
        exp10 = std::stol(es) * (eneg ? -1 : 1);
    }
    std::string digits = s;
    if (auto dot = s.find('.'); dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exp10 -= static_cast<long>(s.size() - dot - 1);
    }
    if (!detail::all_digits(digits)) return fail();

    mpz_class mant(digits, 10);
    if (neg) mant = -mant;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    Rat r = exp10 >= 0 ? Rat(mant * pow10) : Rat(mant, pow10);
    r.canonicalize();
    return r;
}

/// parse_rational followed by conversion into the run's scalar type.
template <class T>
T parse_scalar(const std::string& text) {
    return scalar_cast<T>(parse_rational(text));
}

// ---------------------------------------------------------------------------
// deterministic formatting
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal form of a binary64 (the table/orbit CSV format).
inline std::string format_value(double x) {
    if (x == 0.0) return "0";
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, end);
}

/// Canonical "p/q" (or plain integer) form of an exact rational.
inline std::string format_value(const Rat& x) {
    return x.get_str();
}

/// 7-significant-digit form used by the derived-rate CSV emitters.
inline std::string format_g7(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.7g", x);
    return std::string(buf);
}

}  // namespace kmsharp
