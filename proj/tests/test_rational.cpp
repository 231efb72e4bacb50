#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "forma/rational.hpp"

#include <random>

using forma::BigInt;
using forma::Rational;

TEST_CASE("construction reduces and normalizes sign") {
    CHECK(Rational(BigInt(2), BigInt(4)) == Rational(BigInt(1), BigInt(2)));
    CHECK(Rational(BigInt(-2), BigInt(-4)) == Rational(BigInt(1), BigInt(2)));
    CHECK(Rational(BigInt(2), BigInt(-4)).num() == BigInt(-1));
    CHECK(Rational(BigInt(2), BigInt(-4)).den() == BigInt(2));
    CHECK(Rational(BigInt(0), BigInt(-7)).den() == BigInt(1));
    CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), forma::error);
}

TEST_CASE("string format p/q or p") {
    CHECK(Rational(5).str() == "5");
    CHECK(Rational(BigInt(-3), BigInt(6)).str() == "-1/2");
    CHECK(Rational().str() == "0");
    CHECK(Rational::parse("-22/4") == Rational(BigInt(-11), BigInt(2)));
    CHECK(Rational::parse("17") == Rational(17));
    CHECK_THROWS_AS(Rational::parse(""), forma::error);
}

TEST_CASE("field axioms on random values") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<long long> d(-50, 50);
    for (int t = 0; t < 200; ++t) {
        long long ab = d(rng), bb = d(rng), cb = d(rng);
        Rational a(BigInt(ab), BigInt(7));
        Rational b(BigInt(bb), BigInt(13));
        Rational c(BigInt(cb), BigInt(4));
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a + (b + c) == (a + b) + c);
        CHECK(a * (b * c) == (a * b) * c);
        if (!b.is_zero())
            CHECK(a / b * b == a);
    }
}

TEST_CASE("exactness far beyond word size") {
    Rational x(1);
    for (int i = 1; i <= 40; ++i)
        x *= Rational(BigInt(i), BigInt(2 * i + 1));
    Rational y = x;
    for (int i = 1; i <= 40; ++i)
        y /= Rational(BigInt(i), BigInt(2 * i + 1));
    CHECK(y == Rational(1));
}
