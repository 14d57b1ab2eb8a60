// Library walkthrough: build both bound tables at a constant step, print the
// first few rate curve points, and evaluate gamma(alpha) — the pieces most
// callers want before reaching for the CLI.

#include <cstdio>

#include "kmsharp/kmsharp.hpp"

int main() {
    using kmsharp::Rat;

    const Rat alpha(1, 2);
    const kmsharp::StepSchedule s = kmsharp::StepSchedule::constant(alpha);
    const int N = 16;

    // Sharp table twice: greedy plan construction and the O(N^2) recurrence
    // agree to rounding, which is itself a useful smoke test.
    auto d_greedy = kmsharp::build_d_table<double>(s, N, kmsharp::BuildMethod::inside_out);
    auto d_fast = kmsharp::build_d_table_fast(0.5, N);
    auto c = kmsharp::build_c_table<double>(s, N);

    std::printf("d_{3,4} = %.17g (greedy) vs %.17g (recurrence)\n", d_greedy.at(3, 4),
                d_fast.at(3, 4));
    std::printf("c_{3,4} = %.17g (relaxed bound, strictly above)\n", c.at(3, 4));

    std::printf("\n n   kappa_n      kappa~_n\n");
    for (const auto& row : kmsharp::rate_curve(alpha, 8))
        std::printf("%2d   %.7f    %.7f\n", row.n, row.kappa, row.kappa_tilde);

    const kmsharp::GammaResult g = kmsharp::gamma(alpha);
    std::printf("\ngamma(%.2f) = %.7f at n = %d (n_max %d%s)\n", g.alpha, g.value, g.argmax_n,
                g.n_max, g.saturated ? ", saturated" : "");

    // Exact arithmetic is one template argument away when rounding matters.
    auto d_exact = kmsharp::build_d_table<Rat>(s, 9, kmsharp::BuildMethod::inside_out);
    std::printf("exact d_{8,9} = %s\n", kmsharp::format_value(d_exact.at(8, 9)).c_str());
    return 0;
}
