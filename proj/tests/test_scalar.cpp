// Exact/float scalar plumbing: rational parsing (including the decimal and
// exponent forms the CLI accepts), round-to-nearest float conversion, and the
// shortest-round-trip formatting the CSV writers rely on.

#include <catch2/catch_amalgamated.hpp>

#include "kmsharp/scalar.hpp"

using kmsharp::Rat;

TEST_CASE("parse_rational handles p/q forms") {
    CHECK(kmsharp::parse_rational("3/8") == Rat(3, 8));
    CHECK(kmsharp::parse_rational("6/16") == Rat(3, 8));  // canonicalized
    CHECK(kmsharp::parse_rational("-3/8") == Rat(-3, 8));
    CHECK(kmsharp::parse_rational("46302245/134217728") == Rat(46302245, 134217728));
}

TEST_CASE("parse_rational handles decimal forms exactly") {
    CHECK(kmsharp::parse_rational("0.5") == Rat(1, 2));
    CHECK(kmsharp::parse_rational("1") == Rat(1));
    CHECK(kmsharp::parse_rational("0.48121") == Rat(48121, 100000));
    CHECK(kmsharp::parse_rational("9.5e-1") == Rat(19, 20));
    CHECK(kmsharp::parse_rational("2E2") == Rat(200));
    CHECK(kmsharp::parse_rational("-0.25") == Rat(-1, 4));
}

TEST_CASE("decimal digits after a leading zero are never read as octal") {
    // "0.45" strips to the digit string "045"; a base-sensitive integer
    // parse would return 37 (octal) and "09" would be rejected outright.
    CHECK(kmsharp::parse_rational("0.45") == Rat(9, 20));
    CHECK(kmsharp::parse_rational("0.9") == Rat(9, 10));
    CHECK(kmsharp::parse_rational("0.07") == Rat(7, 100));
}

TEST_CASE("parse_rational rejects malformed text") {
    CHECK_THROWS_AS(kmsharp::parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(kmsharp::parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(kmsharp::parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(kmsharp::parse_rational("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(kmsharp::parse_rational("1e"), std::invalid_argument);
    CHECK_THROWS_AS(kmsharp::parse_rational("0x10"), std::invalid_argument);
}

TEST_CASE("to_float rounds to nearest") {
    CHECK(kmsharp::to_float(Rat(3, 8)) == 0.375);
    CHECK(kmsharp::to_float(Rat(1, 3)) == Catch::Approx(1.0 / 3.0).epsilon(0));
    // 1/3 is not a binary64 value; nearest rounding must match the literal
    CHECK(kmsharp::to_float(Rat(1, 3)) == 0.33333333333333331);
}

TEST_CASE("format_value round-trips doubles and prints exact rationals") {
    CHECK(kmsharp::format_value(0.375) == "0.375");
    CHECK(kmsharp::format_value(Rat(3, 8)) == "3/8");
    CHECK(kmsharp::format_value(Rat(5)) == "5");
    const double g = 0.97574685286465031;
    CHECK(std::stod(kmsharp::format_value(g)) == g);
}

TEST_CASE("format_g7 prints seven significant digits") {
    CHECK(kmsharp::format_g7(0.375) == "0.375");
    CHECK(kmsharp::format_g7(0.9757468528646503) == "0.9757469");
    CHECK(kmsharp::format_g7(0.44194173824159222) == "0.4419417");
    CHECK(kmsharp::format_g7(1.0) == "1");
}

TEST_CASE("abs_val and near work in both modes") {
    Rat a(-3, 8);
    CHECK(kmsharp::abs_val(a) == Rat(3, 8));
    CHECK(kmsharp::abs_val(-0.25) == 0.25);
    CHECK(kmsharp::near(0.25, 0.25 + 1e-13));
    CHECK_FALSE(kmsharp::near(0.25, 0.2501));
}

TEST_CASE("scalar_cast reaches both scalar types") {
    CHECK(kmsharp::scalar_cast<double>(Rat(1, 4)) == 0.25);
    CHECK(kmsharp::scalar_cast<Rat>(Rat(1, 4)) == Rat(1, 4));
    CHECK(kmsharp::parse_scalar<double>("3/4") == 0.75);
    CHECK(kmsharp::parse_scalar<Rat>("0.75") == Rat(3, 4));
}
