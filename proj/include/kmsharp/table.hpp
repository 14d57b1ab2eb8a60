#pragma once
/// @file table.hpp
/// @brief Triangular tables indexed by -1 <= m <= n <= N with the boundary
///        convention d_{-1,-1} = 0, d_{-1,k} = d_{k,-1} = 1 (k >= 0) and
///        symmetric access d_nm = d_mn.  Used for both the sharp table d and
///        the relaxed table c, with CSV persistence.

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmsharp/scalar.hpp"

namespace kmsharp {

template <class T>
class TriTable {
  public:
    explicit TriTable(int N, std::string method = "") : N_(N), method_(std::move(method)) {
        if (N < 0) throw std::out_of_range("table horizon must be >= 0");
        v_.assign(size_t((N + 2) * (N + 3) / 2), T(0));
        // boundary row: distance 1 from the virtual index -1 to every k >= 0
        for (int k = 0; k <= N; ++k) set(-1, k, T(1));
        // diagonal (including (-1,-1)) stays 0
    }

    int horizon() const { return N_; }
    const std::string& method() const { return method_; }
    void set_method(std::string m) { method_ = std::move(m); }

    /// Symmetric accessor over -1 <= a,b <= N.
    const T& at(int a, int b) const {
        if (a > b) std::swap(a, b);
        return v_[idx(a, b)];
    }

    void set(int a, int b, const T& val) {
        if (a > b) std::swap(a, b);
        v_[idx(a, b)] = val;
    }

    bool operator==(const TriTable& o) const { return N_ == o.N_ && v_ == o.v_; }

    /// One row per stored cell (m <= n, boundary row m=-1 included), preceded
    /// by caller-supplied '#' provenance comments.  Deterministic bytes.
    void write_csv(std::ostream& os, const std::vector<std::string>& comments = {}) const {
        for (const auto& c : comments) os << "# " << c << "\n";
        os << "m,n,value\n";
        for (int m = -1; m <= N_; ++m)
            for (int n = m; n <= N_; ++n)
                os << m << "," << n << "," << format_value(at(m, n)) << "\n";
    }

    static TriTable read_csv(std::istream& is) {
        std::string line;
        bool saw_header = false;
        std::vector<std::tuple<int, int, std::string>> rows;
        int N = -1;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!saw_header) {
                if (line != "m,n,value")
                    throw std::invalid_argument("table CSV must start with header 'm,n,value'");
                saw_header = true;
                continue;
            }
            std::stringstream ss(line);
            std::string ms, ns, vs;
            if (!std::getline(ss, ms, ',') || !std::getline(ss, ns, ',') ||
                !std::getline(ss, vs))
                throw std::invalid_argument("bad table CSV row: '" + line + "'");
            int m = std::stoi(ms), n = std::stoi(ns);
            rows.emplace_back(m, n, vs);
            if (n > N) N = n;
        }
        if (!saw_header || N < 0) throw std::invalid_argument("empty table CSV");
        TriTable t(N, "loaded");
        for (auto& [m, n, vs] : rows) t.set(m, n, parse_scalar<T>(vs));
        return t;
    }

  private:
    size_t idx(int a, int b) const {
        if (a < -1 || b > N_)
            throw std::out_of_range("table index (" + std::to_string(a) + "," +
                                    std::to_string(b) + ") outside [-1," + std::to_string(N_) +
                                    "]");
        // packed rows M = a+1 in 0..N+1, columns b+1 in M..N+1
        size_t M = size_t(a + 1), C = size_t(b + 1), W = size_t(N_) + 2;
        return M * W - M * (M - 1) / 2 + (C - M);
    }

    int N_;
    std::string method_;
    std::vector<T> v_;
};

/// Sharp-bound table d_mn (optimal transport costs).
template <class T>
using DistanceTable = TriTable<T>;

/// Relaxed-bound table c_mn (product-plan costs); same shape and boundary.
template <class T>
using CTable = TriTable<T>;

}  // namespace kmsharp
