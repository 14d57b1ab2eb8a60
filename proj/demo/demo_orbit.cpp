// Library walkthrough: construct the worst-case orbit whose iterates realize
// every table entry as a sup-norm distance, then check the isometry and the
// absorption view of the same numbers.

#include <cstdio>

#include "kmsharp/kmsharp.hpp"

int main() {
    using kmsharp::Rat;

    const kmsharp::StepSchedule s = kmsharp::StepSchedule::constant(Rat(1, 2));
    const int N = 10;

    auto d = kmsharp::build_d_table<Rat>(s, N, kmsharp::BuildMethod::inside_out);
    auto potentials = kmsharp::build_potentials(s, d, N);
    auto orbit = kmsharp::build_orbit(s, potentials, N);

    kmsharp::PropertyReport iso = kmsharp::verify_isometry(orbit, d);
    std::printf("isometry over %d pairs: %s (checked %lld coordinates)\n",
                kmsharp::PairIndex(N).size(), iso.pass() ? "holds" : "VIOLATED",
                iso.checked);

    // ||x^m - x^n||_inf equals the table entry; show one pair explicitly.
    const kmsharp::PairIndex idx(N);
    const auto [m, n] = idx.pair_at(idx.index_of(2, 7));
    Rat best(0);
    const auto& xm = orbit.x[size_t(m)];
    const auto& xn = orbit.x[size_t(n)];
    for (size_t q = 0; q < xm.size(); ++q) {
        Rat diff = xn[q] - xm[q];
        Rat mag = kmsharp::abs_val(diff);
        if (mag > best) best = mag;
    }
    std::printf("||x^%d - x^%d||_inf = %s, table says %s\n", m, n,
                kmsharp::format_value(best).c_str(), kmsharp::format_value(d.at(m, n)).c_str());

    // The same entries appear as escape frequencies of the absorbing chain.
    Rat h = kmsharp::absorption_h(kmsharp::ChainKind::D, 2, 7, s, d);
    std::printf("chain escape frequency h(2,7) = %s\n", kmsharp::format_value(h).c_str());

    kmsharp::SimulationResult mc =
        kmsharp::simulate(kmsharp::ChainKind::D, 2, 7, s, d, 200000, 7);
    std::printf("Monte Carlo with %lld samples: %.5f +/- %.5f\n", mc.samples, mc.estimate,
                mc.std_error);
    return 0;
}
