#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "forma/sparse_matrix.hpp"

#include <random>

using namespace forma;

namespace {

SparseMatrix random_matrix(std::mt19937& rng, int rows, int cols) {
    std::uniform_int_distribution<int> val(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    SparseMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            m.set(r, c, Rational(BigInt(val(rng)), BigInt(den(rng))));
    return m;
}

}  // namespace

TEST_CASE("rref of identity is itself") {
    auto m = SparseMatrix::identity(2);
    auto rr = rref(m);
    CHECK(rr.mat == m);
    CHECK(rr.pivots == std::vector<int>{0, 1});
}

TEST_CASE("rank-1 forced example") {
    SparseMatrix m(2, 2);
    m.set(0, 0, Rational(1));
    m.set(0, 1, Rational(2));
    m.set(1, 0, Rational(2));
    m.set(1, 1, Rational(4));
    auto rr = rref(m);
    CHECK(rr.pivots == std::vector<int>{0});
    CHECK(rr.mat.at(0, 0) == Rational(1));
    CHECK(rr.mat.at(0, 1) == Rational(2));
    CHECK(rr.mat.at(1, 0) == Rational(0));
    CHECK(rr.mat.at(1, 1) == Rational(0));
}

TEST_CASE("rref is idempotent") {
    std::mt19937 rng(7);
    for (int t = 0; t < 30; ++t) {
        auto m = random_matrix(rng, 5, 7);
        auto r1 = rref(m);
        auto r2 = rref(r1.mat);
        CHECK(r1.mat == r2.mat);
        CHECK(r1.pivots == r2.pivots);
    }
}

TEST_CASE("solve: identity and free-variable tie-break") {
    auto id = SparseMatrix::identity(3);
    std::vector<Rational> b{Rational(3), Rational(-1), Rational(BigInt(1), BigInt(2))};
    auto x = solve(id, b);
    REQUIRE(x.has_value());
    CHECK(*x == b);

    SparseMatrix m(1, 2);
    m.set(0, 0, Rational(1));
    m.set(0, 1, Rational(1));
    auto y = solve(m, {Rational(2)});
    REQUIRE(y.has_value());
    CHECK((*y)[0] == Rational(2));  // free variable zeroed
    CHECK((*y)[1] == Rational(0));
}

TEST_CASE("solve detects inconsistency") {
    SparseMatrix m(2, 1);
    m.set(0, 0, Rational(1));
    m.set(1, 0, Rational(1));
    CHECK_FALSE(solve(m, {Rational(1), Rational(2)}).has_value());
    CHECK_THROWS_AS(solve(m, {Rational(1)}), error);
}

TEST_CASE("nullspace of identity and zero matrix") {
    CHECK(nullspace(SparseMatrix::identity(4)).empty());
    auto basis = nullspace(SparseMatrix(3, 3));
    REQUIRE(basis.size() == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(basis[i][j] == (i == j ? Rational(1) : Rational(0)));
}

TEST_CASE("rank-nullity and solve-substitute on random matrices") {
    std::mt19937 rng(99);
    for (int t = 0; t < 40; ++t) {
        auto m = random_matrix(rng, 4 + t % 3, 5 + t % 4);
        CHECK(rank(m) + static_cast<int>(nullspace(m).size()) == m.cols());
        for (const auto& v : nullspace(m)) {
            auto image = m.apply(v);
            for (const auto& y : image)
                CHECK(y.is_zero());
        }
        std::uniform_int_distribution<int> val(-3, 3);
        std::vector<Rational> x0(m.cols());
        for (auto& v : x0)
            v = Rational(val(rng));
        auto b = m.apply(x0);
        auto x = solve(m, b);
        REQUIRE(x.has_value());
        CHECK(m.apply(*x) == b);
    }
}

TEST_CASE("inverse") {
    std::mt19937 rng(3);
    for (int t = 0; t < 20; ++t) {
        auto m = random_matrix(rng, 4, 4);
        if (rank(m) < 4) {
            CHECK_THROWS_AS(inverse(m), error);
            continue;
        }
        CHECK(m * inverse(m) == SparseMatrix::identity(4));
    }
}
