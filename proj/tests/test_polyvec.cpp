#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "forma/polyvec.hpp"
#include "oracle_ce.hpp"

#include <random>

using namespace forma;

namespace {

Ctx so3_ctx(int dmax = 14) { return CEContext::make(so3(), dmax); }

PolyVector eps(const Ctx& c, std::vector<int> idx) {
    PVKey k;
    k.exp.assign(c->dim(), 0);
    k.form = std::move(idx);
    return PolyVector::term(c, k, Rational(1));
}

PolyVector gen(const Ctx& c, int i) {
    PVKey k;
    k.exp.assign(c->dim(), 0);
    k.exp[i] = 1;
    return PolyVector::term(c, k, Rational(1));
}

PolyVector random_monomial(const Ctx& c, std::mt19937& rng) {
    std::uniform_int_distribution<int> d01(0, 1);
    std::uniform_int_distribution<int> coef(1, 5);
    PVKey k;
    k.exp.assign(c->dim(), 0);
    int deg = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int t = 0; t < deg; ++t)
        k.exp[std::uniform_int_distribution<int>(0, c->dim() - 1)(rng)] += 1;
    for (int i = 0; i < c->dim(); ++i)
        if (d01(rng))
            k.form.push_back(i);
    return PolyVector::term(c, k, Rational(coef(rng)));
}

int sdeg(const PolyVector& f) { return f.form_degree() - 1; }

}  // namespace

TEST_CASE("wedge basics") {
    auto c = so3_ctx();
    CHECK(wedge(eps(c, {0}), eps(c, {0})).is_zero());
    CHECK(wedge(eps(c, {1}), eps(c, {0})) == Rational(-1) * eps(c, {0, 1}));
    auto kappa = killing_form(so3());
    auto q = casimir_polyvector(c, kappa);
    auto om = cartan_cocycle(c, kappa);
    CHECK(wedge(q, wedge(q, om)) == wedge(wedge(q, q), om));
}

TEST_CASE("interior product: right-handed contraction") {
    auto c = so3_ctx();
    // These two signs are where the pinned convention shows: contraction
    // counts slots from the right, which the quadratic identity suite forces.
    CHECK(interior_vec(0, eps(c, {0, 1})) == Rational(-1) * eps(c, {1}));
    CHECK(interior_vec(1, eps(c, {0, 1})) == eps(c, {0}));
    auto om = cartan_cocycle(c, killing_form(so3()));
    CHECK(interior_vec(0, om) == Rational(-2) * eps(c, {1, 2}));
}

TEST_CASE("partial derivative on the Sym factor") {
    auto c = so3_ctx();
    auto e1 = gen(c, 0);
    CHECK(partial(0, wedge(e1, e1)) == Rational(2) * e1);
    CHECK(partial(0, gen(c, 1)).is_zero());
    // chain rule on Casimir powers: d^i(q^m) = m q^(m-1) d^i q
    auto kappa = killing_form(so3());
    auto q = casimir_polyvector(c, kappa);
    auto q2 = wedge(q, q);
    for (int i = 0; i < 3; ++i)
        CHECK(partial(i, q2) == Rational(2) * wedge(q, partial(i, q)));
    CHECK(partial(0, q) == Rational(-1) * gen(c, 0));
}

TEST_CASE("quadratic identity suite for so(3), alpha in {1,q,q^2,q^3}") {
    auto c = so3_ctx();
    auto kappa = killing_form(so3());
    auto pi = poisson_structure(c);
    auto E = euler_field(c);
    auto om = cartan_cocycle(c, kappa);

    std::vector<CasimirPolynomial> polys;
    for (int a = 0; a <= 3; ++a)
        polys.push_back(CasimirPolynomial::q_power(a));

    auto emb = [&](const CasimirPolynomial& p) { return embed_casimir(c, kappa, p); };

    CHECK(schouten(pi, pi).is_zero());
    CHECK(schouten(E, om) == Rational(-3) * om);
    for (const auto& alpha : polys) {
        auto a = emb(alpha);
        auto ap = emb(alpha.derivative());
        CHECK(ce_differential(a).is_zero());
        CHECK(schouten(E, a) == Rational(2) * wedge(emb(CasimirPolynomial::q_power(1)), ap));
        CHECK(ce_differential(wedge(a, E)) == wedge(a, pi));
        CHECK(ce_differential(wedge(a, om)).is_zero());
        for (const auto& beta : polys) {
            auto b = emb(beta);
            CHECK(schouten(a, b).is_zero());
            CHECK(schouten(wedge(b, om), a) == Rational(2) * wedge(wedge(b, ap), pi));
            for (const auto& gamma : polys) {
                auto g = emb(gamma);
                auto gp = emb(gamma.derivative());
                auto bp = emb(beta.derivative());
                auto lhs = schouten(wedge(b, om), wedge(g, om));
                auto rhs = Rational(2) *
                           wedge(wedge(b, gp) - wedge(g, bp), wedge(pi, om));
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("poisson structure of the builtins") {
    auto ch = CEContext::make(heisenberg3(), 6);
    auto pih = poisson_structure(ch);
    CHECK(pih == wedge(gen(ch, 2), eps(ch, {0, 1})));  // z dx ^ dy

    CHECK(poisson_structure(CEContext::make(abelian(2), 4)).is_zero());

    LieAlgebra bad(3);
    bad.set_c(2, 0, 1, Rational(1));
    bad.set_c(0, 0, 2, Rational(1));
    auto cb = CEContext::make(bad, 6);
    CHECK_THROWS_AS(poisson_structure(cb), error);
    auto pib = poisson_structure(cb, false);
    CHECK_FALSE(schouten(pib, pib).is_zero());  // Jacobi failure is visible
}

TEST_CASE("schouten graded antisymmetry, Leibniz, Jacobi on random monomials") {
    std::vector<LieAlgebra> algebras{abelian(2), heisenberg3(), so3()};
    std::mt19937 rng(2024);
    for (const auto& L : algebras) {
        auto c = CEContext::make(L, 24);
        for (int t = 0; t < 70; ++t) {
            auto F = random_monomial(c, rng);
            auto G = random_monomial(c, rng);
            auto H = random_monomial(c, rng);
            int f = sdeg(F), g = sdeg(G);
            // antisymmetry
            auto anti = schouten(G, F);
            CHECK(schouten(F, G) == ((f * g) % 2 ? anti : Rational(-1) * anti));
            // Leibniz: [F, G ^ H] = [F,G] ^ H + (-1)^((|F|-1)|G|) G ^ [F,H]
            auto lhs = schouten(F, wedge(G, H));
            auto sign = ((f * (g + 1)) % 2) ? Rational(-1) : Rational(1);
            auto rhs = wedge(schouten(F, G), H) + sign * wedge(G, schouten(F, H));
            CHECK(lhs == rhs);
            // Jacobi in derivation form: [F,[G,H]] = [[F,G],H] + (-1)^(fg) [G,[F,H]]
            auto jl = schouten(F, schouten(G, H));
            auto jr = schouten(schouten(F, G), H) +
                      ((f * g) % 2 ? Rational(-1) : Rational(1)) * schouten(G, schouten(F, H));
            CHECK(jl == jr);
        }
    }
}

TEST_CASE("delta squared vanishes on every basis monomial") {
    for (const auto& L : {abelian(2), heisenberg3(), so3()}) {
        auto c = CEContext::make(L, 4);
        for (int k = 0; k <= L.dim(); ++k)
            for (int m = 0; m <= 3; ++m)
                for (const auto& key : monomial_basis(c, k, m)) {
                    auto mono = PolyVector::term(c, key, Rational(1));
                    CHECK(ce_differential(ce_differential(mono)).is_zero());
                }
    }
}

TEST_CASE("truncation raises instead of dropping") {
    auto c = CEContext::make(so3(), 3);
    auto kappa = killing_form(so3());
    auto q = casimir_polyvector(c, kappa);
    CHECK_THROWS_AS(wedge(q, q), truncation_error);
}

TEST_CASE("ambient mismatch is rejected") {
    auto c1 = so3_ctx();
    auto c2 = so3_ctx();
    CHECK_THROWS_AS(wedge(eps(c1, {0}), eps(c2, {1})), error);
}

TEST_CASE("cohomology of so(3) matches the K[q] pattern and the oracle") {
    auto c = CEContext::make(so3(), 6);
    CohomologyTable table(c);
    for (int m = 0; m <= 6; ++m)
        for (int k = 0; k <= 3; ++k) {
            int expected = ((k == 0 || k == 3) && m % 2 == 0) ? 1 : 0;
            CHECK(table.dim(k, m) == expected);
            CHECK(table.dim(k, m) == oracle::cohomology_dim(so3(), k, m));
        }
    // the (0,2) representative is the Casimir line
    auto reps = table.representatives(0, 2);
    REQUIRE(reps.size() == 1);
    auto q = casimir_polyvector(c, killing_form(so3()));
    CHECK(reps[0] == Rational(-2) * q);  // echelon-normalized: e3^2+e2^2+e1^2
}

TEST_CASE("cohomology of heisenberg3 matches the brute-force oracle") {
    auto c = CEContext::make(heisenberg3(), 3);
    CohomologyTable table(c);
    // frozen from the oracle run (tests/oracle_ce.hpp), m rows, k columns
    int expected[4][4] = {{1, 2, 2, 1}, {1, 4, 5, 2}, {1, 5, 7, 3}, {1, 6, 9, 4}};
    for (int m = 0; m <= 3; ++m)
        for (int k = 0; k <= 3; ++k) {
            CHECK(table.dim(k, m) == expected[m][k]);
            CHECK(table.dim(k, m) == oracle::cohomology_dim(heisenberg3(), k, m));
        }
    // center generator represents (0,1)
    auto reps = table.representatives(0, 1);
    REQUIRE(reps.size() == 1);
    CHECK(reps[0] == gen(c, 2));
}

TEST_CASE("cohomology of abelian(2) is the whole complex") {
    auto c = CEContext::make(abelian(2), 2);
    CohomologyTable table(c);
    for (int m = 0; m <= 2; ++m)
        for (int k = 0; k <= 2; ++k)
            CHECK(table.dim(k, m) ==
                  static_cast<int>(monomial_basis(c, k, m).size()));
}

TEST_CASE("cohomology bracket vanishes on the so(3) classes") {
    auto c = CEContext::make(so3(), 6);
    CohomologyTable table(c);
    auto kappa = killing_form(so3());
    auto q = casimir_polyvector(c, kappa);
    auto om = cartan_cocycle(c, kappa);

    auto cq = table.project(q);
    auto cqom = table.project(wedge(q, om));
    auto com = table.project(om);
    CHECK_FALSE(cq.is_zero());
    CHECK_FALSE(cqom.is_zero());
    CHECK(cohomology_bracket(table, cq, cq).is_zero());
    CHECK(cohomology_bracket(table, cq, cqom).is_zero());
    CHECK(cohomology_bracket(table, com, com).is_zero());

    // representative independence: shifting a cocycle by a coboundary of the
    // same bidegree does not move the class
    PVKey u;
    u.exp = {1, 1, 0};
    u.form = {0, 1};
    auto cob = ce_differential(PolyVector::term(c, u, Rational(1)));
    CHECK_FALSE(cob.is_zero());
    auto cls2 = table.project(wedge(q, om) + cob);
    CHECK(cls2.coords == cqom.coords);

    CHECK_THROWS_AS(table.project(euler_field(c)), error);  // not a cocycle
}
