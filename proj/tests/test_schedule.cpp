// Step schedules and the weight vectors pi^n they induce: construction,
// parsing, domain errors, and the incremental identities the tables build on.

#include <catch2/catch_amalgamated.hpp>

#include "kmsharp/schedule.hpp"

using kmsharp::Rat;
using kmsharp::StepSchedule;

TEST_CASE("constant schedule basics") {
    const StepSchedule s = StepSchedule::constant(Rat(1, 2));
    CHECK(s.is_constant());
    CHECK(s.constant_alpha() == Rat(1, 2));
    CHECK(s.alpha(1) == Rat(1, 2));
    CHECK(s.alpha(1000) == Rat(1, 2));
    CHECK(s.min_alpha(64) == Rat(1, 2));
    CHECK(s.literal() == "const:1/2");
}

TEST_CASE("list schedule basics") {
    const StepSchedule s = StepSchedule::from_string("list:0.5,0.6,0.7");
    CHECK_FALSE(s.is_constant());
    CHECK(s.has_horizon());
    CHECK(s.horizon() == 3);
    CHECK(s.alpha(1) == Rat(1, 2));
    CHECK(s.alpha(2) == Rat(3, 5));
    CHECK(s.alpha(3) == Rat(7, 10));
    CHECK(s.min_alpha(3) == Rat(1, 2));
    CHECK_THROWS_AS(s.alpha(4), std::out_of_range);
    CHECK_THROWS_AS(s.constant_alpha(), std::logic_error);
}

TEST_CASE("from_string round-trips the literal") {
    // the literal echoes what the caller wrote; factory-built schedules
    // normalize to exact rationals instead
    CHECK(StepSchedule::from_string("const:0.5").literal() == "const:0.5");
    const std::string list = "list:1/2,3/5";
    CHECK(StepSchedule::from_string(list).literal() == "list:1/2,3/5");
    CHECK_THROWS_AS(StepSchedule::from_string("ramp:0.5"), std::invalid_argument);
    CHECK_THROWS_AS(StepSchedule::from_string(""), std::invalid_argument);
}

TEST_CASE("steps must lie in the open unit interval") {
    CHECK_THROWS_AS(StepSchedule::constant(Rat(0)), std::domain_error);
    CHECK_THROWS_AS(StepSchedule::constant(Rat(1)), std::domain_error);
    CHECK_THROWS_AS(StepSchedule::constant(Rat(-1, 2)), std::domain_error);
    CHECK_THROWS_AS(StepSchedule::from_string("list:0.5,1"), std::domain_error);
}

TEST_CASE("weights: alpha_0 = 1 and the telescoping tail products") {
    const StepSchedule s = StepSchedule::constant(Rat(1, 2));

    const auto w0 = kmsharp::weights<Rat>(s, 0);
    REQUIRE(w0.size() == 1);
    CHECK(w0[0] == Rat(1));

    const auto w2 = kmsharp::weights<Rat>(s, 2);
    REQUIRE(w2.size() == 3);
    CHECK(w2[0] == Rat(1, 4));  // pi_0^2 = (1-a)^2
    CHECK(w2[1] == Rat(1, 4));  // pi_1^2 = a(1-a)
    CHECK(w2[2] == Rat(1, 2));  // pi_2^2 = a
    CHECK(w2[0] + w2[1] + w2[2] == Rat(1));
}

TEST_CASE("weights sum to one for mixed schedules") {
    const StepSchedule s = StepSchedule::from_string("list:0.5,0.6,0.7,0.4,0.9");
    for (int n = 0; n <= 5; ++n) {
        const auto w = kmsharp::weights<Rat>(s, n);
        Rat sum(0);
        for (const Rat& x : w) {
            CHECK(x > 0);
            sum += x;
        }
        CHECK(sum == Rat(1));
    }
}

TEST_CASE("extend_weights matches a fresh build") {
    const StepSchedule s = StepSchedule::from_string("list:0.5,0.6,0.7,0.4");
    std::vector<Rat> w = kmsharp::weights<Rat>(s, 0);
    for (int n = 1; n <= 4; ++n) {
        const Rat a = s.alpha(n);
        kmsharp::extend_weights(w, a);
        CHECK(w == kmsharp::weights<Rat>(s, n));
    }
}

TEST_CASE("float weights agree with exact weights to rounding") {
    const StepSchedule s = StepSchedule::constant(Rat(13, 20));
    const auto exact = kmsharp::weights<Rat>(s, 20);
    const auto fl = kmsharp::weights<double>(s, 20);
    REQUIRE(exact.size() == fl.size());
    for (size_t i = 0; i < fl.size(); ++i)
        CHECK(fl[i] == Catch::Approx(kmsharp::to_float(exact[i])).margin(1e-14));
}
