#pragma once
/// @file schedule.hpp
/// @brief Step sequences alpha_n in (0,1) (with the convention alpha_0 = 1)
///        and the averaging weights pi_i^n = alpha_i * prod_{k=i+1}^n (1-alpha_k)
///        that define every transport problem downstream.

#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmsharp/scalar.hpp"

namespace kmsharp {

/// A constant or explicitly listed step sequence.  alpha(k) is defined for
/// k >= 1; alpha_0 = 1 is implicit and never stored.  Explicit schedules have
/// a finite horizon and queries beyond it are errors.
class StepSchedule {
  public:
    static StepSchedule constant(const Rat& alpha) {
        check_open_unit(alpha);
        StepSchedule s;
        s.constant_ = alpha;
        s.literal_ = "const:" + alpha.get_str();
        return s;
    }

    static StepSchedule explicit_list(std::vector<Rat> alphas) {
        if (alphas.empty())
            throw std::invalid_argument("explicit schedule needs at least one step");
        std::string lit = "list:";
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            check_open_unit(alphas[i]);
            lit += (i ? "," : "") + alphas[i].get_str();
        }
        StepSchedule s;
        s.steps_ = std::move(alphas);
        s.literal_ = std::move(lit);
        return s;
    }

    /// CLI literal syntax: "const:0.5" or "list:0.5,0.6,0.7".
    static StepSchedule from_string(const std::string& text) {
        if (text.rfind("const:", 0) == 0) {
            StepSchedule s = constant(parse_rational(text.substr(6)));
            s.literal_ = text;
            return s;
        }
        if (text.rfind("list:", 0) == 0) {
            std::vector<Rat> alphas;
            std::stringstream ss(text.substr(5));
            std::string item;
            while (std::getline(ss, item, ','))
                alphas.push_back(parse_rational(item));
            StepSchedule s = explicit_list(std::move(alphas));
            s.literal_ = text;
            return s;
        }
        throw std::invalid_argument("schedule literal must start with 'const:' or 'list:': '" +
                                    text + "'");
    }

    bool is_constant() const { return constant_.has_value(); }

    /// The constant step value; only meaningful for constant schedules.
    const Rat& constant_alpha() const {
        if (!constant_) throw std::logic_error("schedule is not constant");
        return *constant_;
    }

    /// Steps available: unbounded for constant schedules.
    bool has_horizon() const { return !constant_.has_value(); }
    int horizon() const {
        return constant_ ? std::numeric_limits<int>::max() : static_cast<int>(steps_.size());
    }

    /// alpha_k for k >= 1; throws beyond an explicit schedule's horizon.
    const Rat& alpha(int k) const {
        if (k < 1) throw std::out_of_range("alpha(k) needs k >= 1");
        if (constant_) return *constant_;
        if (k > static_cast<int>(steps_.size()))
            throw std::out_of_range("schedule horizon " + std::to_string(steps_.size()) +
                                    " exceeded by k=" + std::to_string(k));
        return steps_[static_cast<std::size_t>(k - 1)];
    }

    /// min over alpha_1..alpha_n (gates the closed-form / recurrence paths).
    Rat min_alpha(int n) const {
        if (constant_) return *constant_;
        require(n);
        Rat m = steps_[0];
        for (int k = 2; k <= n; ++k)
            if (alpha(k) < m) m = alpha(k);
        return m;
    }

    void require(int n) const {
        if (n > horizon())
            throw std::out_of_range("schedule horizon " + std::to_string(horizon()) +
                                    " too small for n=" + std::to_string(n));
    }

    const std::string& literal() const { return literal_; }

  private:
    static void check_open_unit(const Rat& a) {
        if (!(a > 0 && a < 1))
            throw std::domain_error("step alpha must lie strictly in (0,1), got " + a.get_str());
    }

    std::optional<Rat> constant_;
    std::vector<Rat> steps_;
    std::string literal_;
};

/// pi^n per the product formula, computed in the run's scalar type.
/// pi_i^n = alpha_i * prod_{k=i+1}^n (1 - alpha_k), with alpha_0 = 1.
template <class T>
std::vector<T> weights(const StepSchedule& s, int n) {
    if (n < 0) throw std::out_of_range("weights(n) needs n >= 0");
    s.require(n);
    std::vector<T> pi(static_cast<std::size_t>(n) + 1);
    T tail(1);  // prod_{k=i+1}^n (1 - alpha_k), maintained while i descends
    for (int i = n; i >= 0; --i) {
        T ai = i > 0 ? scalar_cast<T>(s.alpha(i)) : T(1);
        pi[static_cast<std::size_t>(i)] = ai * tail;
        if (i > 0) tail *= T(1) - ai;
    }
    return pi;
}

/// Incremental step pi^n -> pi^{n+1}: scale by (1-alpha_next), append alpha_next.
template <class T>
void extend_weights(std::vector<T>& pi, const T& alpha_next) {
    if (!(alpha_next > T(0) && alpha_next < T(1)))
        throw std::domain_error("extend_weights needs alpha in (0,1)");
    for (T& p : pi) p *= T(1) - alpha_next;
    pi.push_back(alpha_next);
}

}  // namespace kmsharp
