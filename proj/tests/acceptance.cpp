// Acceptance suite: one line per criterion clause, exact arithmetic
// throughout (tolerance zero). The exit code is the number of failing lines.
#include "forma/certificates.hpp"
#include "oracle_ce.hpp"

#include <iostream>
#include <random>

using namespace forma;

namespace {

int g_fail = 0;
int g_pass = 0;

void line(const std::string& crit, bool ok, const std::string& note = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << crit;
    if (!note.empty())
        std::cout << "  -- " << note;
    std::cout << "\n";
    (ok ? g_pass : g_fail) += 1;
}

PolyVector qpow(const Ctx& c, const BilinearForm& k, int a) {
    return embed_casimir(c, k, CasimirPolynomial::q_power(a));
}

}  // namespace

// 1. the eight quadratic Schouten identities for so(3)
static void criterion1() {
    auto L = so3();
    auto kappa = killing_form(L);
    auto c = CEContext::make(L, 16);
    auto pi = poisson_structure(c);
    auto E = euler_field(c);
    auto om = cartan_cocycle(c, kappa);
    auto q1 = qpow(c, kappa, 1);

    bool ok_ab = true, ok_da = true, ok_ea = true, ok_dae = true, ok_dao = true;
    bool ok_eo = schouten(E, om) == Rational(-3) * om;
    bool ok_boa = true, ok_bogo = true;
    for (int a = 0; a <= 3; ++a) {
        auto pa = CasimirPolynomial::q_power(a);
        auto A = qpow(c, kappa, a);
        auto Ap = embed_casimir(c, kappa, pa.derivative());
        ok_da = ok_da && ce_differential(A).is_zero();
        ok_ea = ok_ea && schouten(E, A) == Rational(2) * wedge(q1, Ap);
        ok_dae = ok_dae && ce_differential(wedge(A, E)) == wedge(A, pi);
        ok_dao = ok_dao && ce_differential(wedge(A, om)).is_zero();
        for (int b = 0; b <= 3; ++b) {
            auto B = qpow(c, kappa, b);
            ok_ab = ok_ab && schouten(A, B).is_zero();
            ok_boa = ok_boa &&
                     schouten(wedge(B, om), A) == Rational(2) * wedge(wedge(B, Ap), pi);
            for (int g = 0; g <= 3; ++g) {
                auto pg = CasimirPolynomial::q_power(g);
                auto G = qpow(c, kappa, g);
                auto Gp = embed_casimir(c, kappa, pg.derivative());
                auto Bp = embed_casimir(c, kappa, CasimirPolynomial::q_power(b).derivative());
                auto lhs = schouten(wedge(B, om), wedge(G, om));
                auto rhs =
                    Rational(2) * wedge(wedge(B, Gp) - wedge(G, Bp), wedge(pi, om));
                ok_bogo = ok_bogo && lhs == rhs;
            }
        }
    }
    line("1. [alpha,beta]_s = 0", ok_ab);
    line("1. delta(alpha) = 0", ok_da);
    line("1. [E,alpha]_s = 2 q alpha'", ok_ea);
    line("1. delta(alpha E) = alpha ^ pi", ok_dae);
    line("1. delta(alpha Omega) = 0", ok_dao);
    line("1. [E,Omega]_s = -3 Omega", ok_eo);
    line("1. [beta Omega, alpha]_s = 2 beta alpha' ^ pi", ok_boa);
    line("1. [beta Omega, gamma Omega]_s = 2(beta gamma' - gamma beta') ^ pi ^ Omega",
         ok_bogo);
}

// 2. calculus laws on random monomial probes
static void criterion2() {
    std::mt19937 rng(424242);
    bool ok_d2 = true, ok_pipi = true, ok_anti = true, ok_jac = true, ok_leib = true;
    for (const auto& L : {abelian(2), heisenberg3(), so3()}) {
        auto c = CEContext::make(L, 30);
        auto pi = poisson_structure(c);
        ok_pipi = ok_pipi && schouten(pi, pi).is_zero();
        auto random_monomial = [&](int maxdeg) {
            PVKey k;
            k.exp.assign(c->dim(), 0);
            int deg = std::uniform_int_distribution<int>(0, maxdeg)(rng);
            for (int t = 0; t < deg; ++t)
                k.exp[std::uniform_int_distribution<int>(0, c->dim() - 1)(rng)] += 1;
            for (int i = 0; i < c->dim(); ++i)
                if (std::uniform_int_distribution<int>(0, 1)(rng))
                    k.form.push_back(i);
            return PolyVector::term(c, k,
                                    Rational(std::uniform_int_distribution<int>(1, 7)(rng)));
        };
        for (int t = 0; t < 200; ++t) {
            auto F = random_monomial(3);
            auto G = random_monomial(3);
            auto H = random_monomial(2);
            ok_d2 = ok_d2 && ce_differential(ce_differential(F)).is_zero();
            int f = F.form_degree() - 1, g = G.form_degree() - 1;
            auto anti = schouten(G, F);
            ok_anti = ok_anti &&
                      schouten(F, G) == ((f * g) % 2 ? anti : Rational(-1) * anti);
            auto sign = ((f * (g + 1)) % 2) ? Rational(-1) : Rational(1);
            ok_leib = ok_leib &&
                      schouten(F, wedge(G, H)) ==
                          wedge(schouten(F, G), H) + sign * wedge(G, schouten(F, H));
            auto jl = schouten(F, schouten(G, H));
            auto jr = schouten(schouten(F, G), H) +
                      ((f * g) % 2 ? Rational(-1) : Rational(1)) *
                          schouten(G, schouten(F, H));
            ok_jac = ok_jac && jl == jr;
        }
    }
    line("2. delta^2 = 0 on 200 random probes per algebra", ok_d2);
    line("2. [pi,pi]_s = 0 for abelian(2), heisenberg3, so3", ok_pipi);
    line("2. graded antisymmetry on random probes", ok_anti);
    line("2. graded Jacobi on random probes", ok_jac);
    line("2. graded Leibniz on random probes", ok_leib);
}

// 3. so(3) cohomology table and vanishing induced bracket
static void criterion3() {
    auto c = CEContext::make(so3(), 6);
    CohomologyTable table(c);
    bool dims_ok = true;
    for (int m = 0; m <= 6; ++m)
        for (int k = 0; k <= 3; ++k) {
            int expected = ((k == 0 || k == 3) && m % 2 == 0) ? 1 : 0;
            dims_ok = dims_ok && table.dim(k, m) == expected;
        }
    line("3. so(3) dims match K[q]1 + 0 + 0 + K[q]Omega up to Dmax = 6", dims_ok);

    auto kappa = killing_form(so3());
    bool br_ok = true;
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b) {
            auto ca = table.project(qpow(c, kappa, a));
            auto cb = table.project(qpow(c, kappa, b));
            auto cao = table.project(wedge(qpow(c, kappa, a), cartan_cocycle(c, kappa)));
            auto cbo = table.project(wedge(qpow(c, kappa, b), cartan_cocycle(c, kappa)));
            br_ok = br_ok && cohomology_bracket(table, ca, cb).is_zero() &&
                    cohomology_bracket(table, ca, cbo).is_zero() &&
                    cohomology_bracket(table, cao, cbo).is_zero();
        }
    line("3. induced bracket on the so(3) cohomology vanishes", br_ok);
}

// 4. contraction identities and the chain-level perturbation lemma
static void criterion4() {
    // so(3) reduced contraction, amax = 4
    int n = 5;
    FiniteComplex G, H;
    std::vector<int> grades;
    std::vector<std::string> names;
    for (int a = 0; a < n; ++a) {
        grades.push_back(a);
        names.push_back("q^" + std::to_string(a));
    }
    for (int d = -1; d <= 2; ++d)
        G.set_basis(d, names, grades);
    G.set_differential(-1, SparseMatrix(n, n));
    G.set_differential(0, SparseMatrix::identity(n));
    G.set_differential(1, SparseMatrix(n, n));
    H.set_basis(-1, names, grades);
    H.set_basis(2, names, grades);
    H.set_differential(-1, SparseMatrix(0, n));
    Contraction c;
    c.U = H;
    c.V = G;
    c.i.shift = 0;
    c.p.shift = 0;
    c.h.shift = -1;
    c.i.mats[-1] = SparseMatrix::identity(n);
    c.i.mats[2] = SparseMatrix::identity(n);
    c.p.mats[-1] = SparseMatrix::identity(n);
    c.p.mats[2] = SparseMatrix::identity(n);
    c.h.mats[1] = SparseMatrix::identity(n);
    auto rep = verify_contraction(c);
    line("4. so(3) reduced contraction passes all seven identities", rep.ok,
         rep.first_violation);

    DegMap zero;
    zero.shift = 1;
    auto unperturbed = perturb(c, zero);
    bool id_ok = unperturbed.delta_U.mats.empty() &&
                 unperturbed.contraction.i.mats.at(-1) == c.i.mats.at(-1) &&
                 unperturbed.contraction.h.mats.at(1) == c.h.mats.at(1);
    line("4. perturbation with delta_V = 0 is the identity", id_ok);

    // toy complex with the four closed formulas checked exactly
    FiniteComplex V;
    V.set_basis(0, {"u1", "u2"}, {1, 1});
    V.set_basis(1, {"v1", "v2"}, {0, 0});
    SparseMatrix b(2, 2);
    b.set(0, 0, Rational(1));
    V.set_differential(0, b);
    FiniteComplex U;
    U.set_basis(0, {"u2"}, {1});
    U.set_basis(1, {"v2"}, {0});
    U.set_differential(0, SparseMatrix(1, 1));
    Contraction toy;
    toy.U = U;
    toy.V = V;
    toy.i.shift = 0;
    toy.p.shift = 0;
    toy.h.shift = -1;
    SparseMatrix i0(2, 1), i1(2, 1), p0(1, 2), p1(1, 2), h1(2, 2);
    i0.set(1, 0, Rational(1));
    i1.set(1, 0, Rational(1));
    p0.set(0, 1, Rational(1));
    p1.set(0, 1, Rational(1));
    h1.set(0, 0, Rational(1));
    toy.i.mats[0] = i0;
    toy.i.mats[1] = i1;
    toy.p.mats[0] = p0;
    toy.p.mats[1] = p1;
    toy.h.mats[1] = h1;
    DegMap delta;
    delta.shift = 1;
    SparseMatrix d0(2, 2);
    d0.set(1, 0, Rational(7));
    d0.set(0, 1, Rational(5));
    delta.mats[0] = d0;
    auto res = perturb(toy, delta);
    bool closed_ok = verify_contraction(res.contraction).ok &&
                     res.contraction.i.mats.at(0).at(0, 0) == Rational(-5) &&
                     res.contraction.i.mats.at(0).at(1, 0) == Rational(1) &&
                     res.delta_U.mats.at(0).at(0, 0) == Rational(-35) &&
                     res.contraction.h.mats.at(1).at(0, 0) == Rational(1) &&
                     res.contraction.p.mats.at(1).at(0, 0) == Rational(-7);
    line("4. chain-level perturbation reproduces the four closed formulas", closed_ok);
}

// 5. the so(3) homotopy transfer
static void criterion5() {
    auto L = so3();
    auto kappa = killing_form(L);
    auto ctx = CEContext::make(L, 22);
    QuadraticReduced R(ctx, kappa, 10);
    LinftyTransfer tr(R.adapted(), R.package(false));
    const auto& UB = *R.adapted().UB;
    std::vector<int> probe;
    for (int a = 0; a <= 2; ++a) {
        probe.push_back(R.u_letter(QuadraticReduced::One, a));
        probe.push_back(R.u_letter(QuadraticReduced::Omega, a));
    }

    bool d12_ok = true;
    for (int u : probe)
        d12_ok = d12_ok && tr.d({u}).empty();
    for (const auto& w : words_of_weight_over(UB, 2, probe))
        d12_ok = d12_ok && tr.d(w).empty();
    line("5. d1 = d2 = 0", d12_ok);

    bool d4_ok = true;
    for (const auto& w : words_of_weight_over(UB, 4, probe))
        d4_ok = d4_ok && tr.d(w).empty();
    line("5. d4 = 0", d4_ok);

    TaylorMap d3 = tr.materialize_d(3, probe);
    bool d3a_ok = true, d3b_ok = true;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
            for (int g = 0; g <= 2; ++g) {
                {
                    std::vector<int> tup{R.u_letter(QuadraticReduced::One, a),
                                         R.u_letter(QuadraticReduced::One, b),
                                         R.u_letter(QuadraticReduced::Omega, g)};
                    VecSum expect;
                    if (8 * a * b != 0)
                        vsum_add(expect, R.u_letter(QuadraticReduced::One, a + b + g - 1),
                                 Rational(8 * a * b));
                    d3a_ok = d3a_ok && eval_unshifted(UB, d3, tup) == expect;
                }
                if (b != g) {
                    std::vector<int> tup{R.u_letter(QuadraticReduced::One, a),
                                         R.u_letter(QuadraticReduced::Omega, b),
                                         R.u_letter(QuadraticReduced::Omega, g)};
                    VecSum expect;
                    long long coef = -8LL * a * (g - b);
                    if (coef != 0)
                        vsum_add(expect, R.u_letter(QuadraticReduced::Omega, a + b + g - 1),
                                 Rational(coef));
                    d3b_ok = d3b_ok && eval_unshifted(UB, d3, tup) == expect;
                }
            }
    line("5. d3(alpha 1, beta 1, gamma Omega) = 8 q alpha' beta' gamma", d3a_ok);
    line("5. d3(alpha 1, beta Omega, gamma Omega) = -8(q alpha'(beta gamma' - gamma beta')) Omega",
         d3b_ok);

    TaylorMap phi = tr.materialize_phi(2, probe);
    bool phi2_printed_ok = true, phi2_forced_ok = true, phi2_zero_ok = true;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b) {
            std::vector<int> tup{R.u_letter(QuadraticReduced::One, a),
                                 R.u_letter(QuadraticReduced::Omega, b)};
            auto got = eval_unshifted(UB, phi, tup);
            VecSum printed, forced;
            if (a > 0) {
                vsum_add(printed, R.letter(QuadraticReduced::Euler, a + b - 1), Rational(a));
                vsum_add(forced, R.letter(QuadraticReduced::Euler, a + b - 1),
                         Rational(2 * a));
            }
            phi2_printed_ok = phi2_printed_ok && got == printed;
            phi2_forced_ok = phi2_forced_ok && got == forced;
        }
    for (int a = 0; a <= 2; ++a)
        for (int b = a; b <= 2; ++b) {
            SymWord w{R.u_letter(QuadraticReduced::One, a), R.u_letter(QuadraticReduced::One, b)};
            phi2_zero_ok = phi2_zero_ok && phi.eval(w).empty();
            if (a != b) {
                SymWord w2{R.u_letter(QuadraticReduced::Omega, a),
                           R.u_letter(QuadraticReduced::Omega, b)};
                phi2_zero_ok = phi2_zero_ok && phi.eval(w2).empty();
            }
        }
    line("5. phi2(alpha 1, beta Omega) = alpha' beta E", phi2_printed_ok,
         "engine gives 2 alpha' beta E; the order-2 residual identity "
         "b(phi2) = -[phi1,phi1] + phi1([.,.]_H) together with the "
         "[beta Omega, alpha]_s = 2 beta alpha' pi line above forces the "
         "coefficient 2, so this target conflicts with the residual check below");
    line("5. phi2(alpha 1, beta Omega) = 2 alpha' beta E (residual-consistent value)",
         phi2_forced_ok);
    line("5. phi2(alpha 1, beta 1) = 0 and phi2(alpha Omega, beta Omega) = 0", phi2_zero_ok);

    auto lrep = check_linfty(UB, *tr.d_eval(5), 5, probe);
    line("5. transferred coderivation squares to zero up to weight 5", lrep.ok);

    auto D_full = R.package(true);
    auto d_lazy = tr.d_eval(4);
    auto phi_lazy = tr.phi_eval(4);
    bool res_ok = true;
    for (int r = 1; r <= 4; ++r)
        res_ok = res_ok &&
                 residual(R.adapted().UB, R.adapted().VB, *phi_lazy, *D_full, *d_lazy, r, probe)
                     .is_zero();
    line("5. residuals P1..P4 vanish", res_ok);
}

// 6. the characteristic class pipeline
static void criterion6() {
    auto L = so3();
    auto kappa = killing_form(L);
    auto ctx = CEContext::make(L, 8);
    ObstructionPipeline P(ctx, kappa);
    auto find = [&](int form, int poly) {
        for (int i = 0; i < static_cast<int>(P.hbasis().size()); ++i)
            if (P.hbasis()[i].form == form && P.hbasis()[i].poly == poly)
                return i;
        return -1;
    };
    bool z3a_ok = true, z3b_ok = true;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
            for (int g = 0; g <= 1; ++g) {
                if (2 * (a + b + g) > 6)
                    continue;
                {
                    VecSum expect;
                    if (a * b != 0)
                        vsum_add(expect, find(0, 2 * (a + b + g - 1)), Rational(8 * a * b));
                    z3a_ok = z3a_ok &&
                             P.z3(find(0, 2 * a), find(0, 2 * b), find(3, 2 * g)) == expect;
                }
                if (b < g) {
                    VecSum expect;
                    if (a * (g - b) != 0)
                        vsum_add(expect, find(3, 2 * (a + b + g - 1)),
                                 Rational(-8LL * a * (g - b)));
                    z3b_ok = z3b_ok &&
                             P.z3(find(0, 2 * a), find(3, 2 * b), find(3, 2 * g)) == expect;
                }
            }
    line("6. z3([alpha],[beta],[gamma Omega]) = 8[q alpha' beta' gamma]", z3a_ok);
    line("6. z3([alpha],[beta Omega],[gamma Omega]) = -8[(q alpha'(beta gamma' - gamma beta')) Omega]",
         z3b_ok);

    auto H = P.hview();
    HCochain z3c;
    z3c.arity = 3;
    z3c.degree = -1;
    for (const auto& t : P.probe_triples())
        z3c.set(H.degrees, t, P.z3(t[0], t[1], t[2]));
    bool dz_ok = true;
    int nh = static_cast<int>(P.hbasis().size());
    for (int a = 0; a < nh; ++a)
        for (int b = a; b < nh; ++b)
            for (int c = b; c < nh; ++c)
                for (int d = c; d < nh; ++d) {
                    if (P.hbasis()[a].poly + P.hbasis()[b].poly + P.hbasis()[c].poly +
                            P.hbasis()[d].poly >
                        6)
                        continue;
                    if (lambda_canonicalize(H.degrees, {a, b, c, d}).zero)
                        continue;
                    dz_ok = dz_ok && graded_ce_differential_H(H, z3c, {a, b, c, d}).empty();
                }
    line("6. delta_H z3 = 0 on all probed quadruples", dz_ok);

    auto cert = P.c3_vanishes();
    line("6. c3_vanishes(so3) reports non-formal", !cert.exact && !cert.z3_all_zero);
    auto scal = derivation_scaling_check(L, kappa);
    line("6. derivation_scaling_check(so3) infeasible", scal.regular);

    auto ctxa = CEContext::make(abelian(2), 3);
    BilinearForm id2(2);
    id2.set(0, 0, Rational(1));
    id2.set(1, 1, Rational(1));
    ObstructionPipeline Pa(ctxa, id2);
    auto certa = Pa.c3_vanishes();
    line("6. c3_vanishes(abelian) formal-order-3 with theta = 0",
         certa.exact && certa.witness.empty() && certa.z3_all_zero);
}

// 7. the free algebra
static void criterion7() {
    auto all_words = [](int n, int len) {
        std::vector<Word> out;
        std::function<void(Word&)> rec = [&](Word& cur) {
            if (static_cast<int>(cur.size()) == len) {
                out.push_back(cur);
                return;
            }
            for (int x = 0; x < n; ++x) {
                cur.push_back(x);
                rec(cur);
                cur.pop_back();
            }
        };
        Word cur;
        rec(cur);
        return out;
    };

    bool zeta_ok = true, qb_ok = true, contr_ok = true, s000_ok = true, s101_ok = true;
    for (int N : {2, 3}) {
        for (int len = 1; len <= 3; ++len)
            for (const auto& w : all_words(N, len)) {
                TensorPoly a(N, 5);
                a.add_term(w, Rational(1));
                zeta_ok = zeta_ok &&
                          first_factor_trace(inner(a), len) == zeta(a) - Rational(N) * a;
                qb_ok = qb_ok && q_map(inner(a)) == a;
            }
        FreeLieModel M(N, 4);
        contr_ok = contr_ok && verify_contraction(M.chain_contraction()).ok;
        for (int i = 0; i < M.outder_dim(); ++i)
            for (int j = i + 1; j < M.outder_dim(); ++j)
                for (int k = j + 1; k < M.outder_dim(); ++k) {
                    int gi = M.outder_grade(i), gj = M.outder_grade(j),
                        gk = M.outder_grade(k);
                    if (gi == 0 && gj == 0 && gk == 0)
                        s000_ok = s000_ok && M.sigma(i, j, k) == Rational(0);
                    if (gi == -1 && gj == 0 && gk == 1)
                        s101_ok = s101_ok && M.sigma(i, j, k) == Rational(0);
                }
    }
    line("7. S_n(b'(a)) = zeta_n(a) - N a on all words (N = 2, 3)", zeta_ok);
    line("7. Q o b' = id on T+V (N = 2, 3)", qb_ok);
    line("7. the (i, p, h) contraction verifies (N = 2, 3)", contr_ok);
    line("7. sigma(A,B,C) = 0 on the full grade-(0,0,0) basis", s000_ok);
    line("7. sigma(alpha,B,rho) = 0 on the full grade-(-1,0,1) basis", s101_ok);

    FreeDeriv alpha(2, 5), beta(2, 5), psi(2, 5);
    alpha.add_term(0, {}, Rational(1));
    beta.add_term(1, {}, Rational(1));
    psi.add_term(1, {0, 1, 1}, Rational(1));
    Rational probe = sigma_general(alpha, beta, psi);
    line("7. sigma(eps^1, eps^2, e1 x e2 x e2 x eps^2) = 1 at N = 2", probe == Rational(1),
         "engine gives " + probe.str() +
             "; this sign is forced by the conventions behind the passing "
             "z3 = 8[q alpha' beta' gamma] and Q o b' = id lines, and both "
             "sigma routes plus the transferred d3 agree on it");

    std::mt19937 rng(31337);
    bool closed_ok = true;
    for (int N : {2, 3}) {
        std::uniform_int_distribution<int> coef(-3, 3);
        int done = 0;
        while (done < 100) {
            std::vector<Rational> av(N), bv(N);
            FreeDeriv a(N, 5), b(N, 5), raw(N, 5);
            for (int i = 0; i < N; ++i) {
                av[i] = Rational(coef(rng));
                bv[i] = Rational(coef(rng));
                a.add_term(i, {}, av[i]);
                b.add_term(i, {}, bv[i]);
            }
            for (int t = 0; t < 4; ++t) {
                Word w{coef(rng) & 1, (coef(rng) >> 1) & 1, coef(rng) & 1};
                for (auto& x : w)
                    x = std::uniform_int_distribution<int>(0, N - 1)(rng);
                raw.add_term(std::uniform_int_distribution<int>(0, N - 1)(rng), w,
                             Rational(coef(rng)));
            }
            auto p = outer_project(raw);
            if (a.is_zero() || b.is_zero() || p.is_zero())
                continue;
            closed_ok = closed_ok && sigma_general(a, b, p) == sigma_closed_form(av, bv, p);
            ++done;
        }
    }
    line("7. closed-form sigma equals the general evaluation on 100 random probes (N = 2, 3)",
         closed_ok);

    bool nonexact_ok = true;
    for (int N : {2, 3}) {
        FreeLieModel M(N, 4);
        nonexact_ok = nonexact_ok && !M.sigma_nonexact().exact;
    }
    line("7. sigma_nonexact infeasible for N = 2 and N = 3", nonexact_ok);

    bool d3_sigma_ok = true, d4_ok = true;
    for (int N : {2, 3}) {
        FreeLieModel M(N, 4);
        LinftyTransfer tr(M.adapted(), M.package(false));
        const auto& UB = *M.adapted().UB;
        int nd = M.outder_dim();
        for (int i = 0; i < nd; ++i)
            for (int j = i + 1; j < nd; ++j)
                for (int k = j + 1; k < nd; ++k) {
                    if (M.outder_grade(i) + M.outder_grade(j) + M.outder_grade(k) != 0)
                        continue;
                    auto un = eval_unshifted(
                        UB, *tr.d_eval(3),
                        {M.u_outder_letter(i), M.u_outder_letter(j), M.u_outder_letter(k)});
                    Rational s = M.sigma(i, j, k);
                    VecSum expect;
                    if (!s.is_zero())
                        vsum_add(expect, M.u_unit_letter(), s);
                    d3_sigma_ok = d3_sigma_ok && un == expect;
                }
        // d4 on degree-0 tuples: complete for N = 2, sampled for N = 3
        std::mt19937 rng4(77 + N);
        for (int a = 0; a < nd; ++a)
            for (int b = a; b < nd; ++b)
                for (int c = b; c < nd; ++c)
                    for (int d = c; d < nd; ++d) {
                        if (M.outder_grade(a) + M.outder_grade(b) + M.outder_grade(c) +
                                M.outder_grade(d) !=
                            0)
                            continue;
                        if (N == 3 && std::uniform_int_distribution<int>(0, 19)(rng4) != 0)
                            continue;
                        std::vector<int> tup{M.u_outder_letter(a), M.u_outder_letter(b),
                                             M.u_outder_letter(c), M.u_outder_letter(d)};
                        Canon cn = canonicalize(UB, tup);
                        if (cn.zero)
                            continue;
                        d4_ok = d4_ok && tr.d(cn.word).empty();
                    }
    }
    line("7. transferred d3 agrees with sigma on all grade-0 probes (N = 2, 3)", d3_sigma_ok);
    line("7. transferred d_n = 0 for n >= 4 on degree-0 probes", d4_ok);
}

// 8. heisenberg cohomology against the independent brute-force oracle
static void criterion8() {
    auto L = heisenberg3();
    auto c = CEContext::make(L, 3);
    CohomologyTable table(c);
    int frozen[4][4] = {{1, 2, 2, 1}, {1, 4, 5, 2}, {1, 5, 7, 3}, {1, 6, 9, 4}};
    bool ok = true;
    for (int m = 0; m <= 3; ++m)
        for (int k = 0; k <= 3; ++k)
            ok = ok && table.dim(k, m) == frozen[m][k] &&
                 table.dim(k, m) == oracle::cohomology_dim(L, k, m);
    line("8. heisenberg dims up to Dmax = 3 match the brute-force oracle", ok);
}

// 9. the coalgebra layer on a mixed-degree 4-element basis
static void criterion9() {
    auto B = std::make_shared<GradedBasis>();
    B->keys = {"a", "b", "c", "d"};
    B->degrees = {-2, -1, 0, 1};
    std::mt19937 rng(99);
    auto random_taylor = [&](int degree) {
        TaylorMap f(B, B, degree);
        std::uniform_int_distribution<int> coef(-3, 3);
        for (int r = 1; r <= 3; ++r)
            for (const auto& w : words_of_weight(*B, r)) {
                int target = word_degree(*B, w) + degree;
                VecSum v;
                for (int i = 0; i < B->size(); ++i)
                    if (B->degrees[i] == target)
                        vsum_add(v, i, Rational(coef(rng)));
                if (!v.empty())
                    f.set(w, std::move(v));
            }
        return f;
    };
    using Tensor = std::map<std::pair<SymWord, SymWord>, Rational>;

    bool co_ok = true, code_ok = true, morph_ok = true, inv_ok = true;
    TaylorMap D = random_taylor(1);
    TaylorMap phi = random_taylor(0);
    for (int i = 0; i < B->size(); ++i)
        phi.set({i}, VecSum{{i, Rational(1)}});
    TaylorMap psi = invert_morphism(B, B, phi, 5);

    for (const auto& w : words_up_to_weight(*B, 5)) {
        auto dd = comultiply(*B, w);
        // coassociativity + cocommutativity
        std::map<std::tuple<SymWord, SymWord, SymWord>, Rational> left, right;
        for (const auto& [pr, c] : dd) {
            for (const auto& [pr2, c2] : comultiply(*B, pr.first)) {
                auto key = std::make_tuple(pr2.first, pr2.second, pr.second);
                left[key] += c * c2;
                if (left[key].is_zero())
                    left.erase(key);
            }
            for (const auto& [pr2, c2] : comultiply(*B, pr.second)) {
                auto key = std::make_tuple(pr.first, pr2.first, pr2.second);
                right[key] += c * c2;
                if (right[key].is_zero())
                    right.erase(key);
            }
        }
        co_ok = co_ok && left == right;
        Tensor flip, orig;
        for (const auto& [pr, c] : dd) {
            orig[pr] = c;
            int sgn = (word_degree(*B, pr.first) * word_degree(*B, pr.second)) % 2 ? -1 : 1;
            flip[{pr.second, pr.first}] += Rational(sgn) * c;
            if (flip[{pr.second, pr.first}].is_zero())
                flip.erase({pr.second, pr.first});
        }
        co_ok = co_ok && flip == orig;

        // coderivation law
        Tensor lhs, rhs;
        for (const auto& [u, c] : coderivation_apply(*B, D, w))
            for (const auto& [pr, c2] : comultiply(*B, u)) {
                lhs[pr] += c * c2;
                if (lhs[pr].is_zero())
                    lhs.erase(pr);
            }
        for (const auto& [pr, c] : dd) {
            for (const auto& [u, c2] : coderivation_apply(*B, D, pr.first)) {
                rhs[{u, pr.second}] += c * c2;
                if (rhs[{u, pr.second}].is_zero())
                    rhs.erase({u, pr.second});
            }
            int sgn = word_degree(*B, pr.first) % 2 ? -1 : 1;
            for (const auto& [u, c2] : coderivation_apply(*B, D, pr.second)) {
                rhs[{pr.first, u}] += Rational(sgn) * c * c2;
                if (rhs[{pr.first, u}].is_zero())
                    rhs.erase({pr.first, u});
            }
        }
        code_ok = code_ok && lhs == rhs;

        // morphism law
        Tensor ml, mr;
        for (const auto& [u, c] : morphism_apply(*B, *B, phi, w))
            for (const auto& [pr, c2] : comultiply(*B, u)) {
                ml[pr] += c * c2;
                if (ml[pr].is_zero())
                    ml.erase(pr);
            }
        for (const auto& [pr, c] : dd)
            for (const auto& [u1, c1] : morphism_apply(*B, *B, phi, pr.first))
                for (const auto& [u2, c2] : morphism_apply(*B, *B, phi, pr.second)) {
                    mr[{u1, u2}] += c * c1 * c2;
                    if (mr[{u1, u2}].is_zero())
                        mr.erase({u1, u2});
                }
        morph_ok = morph_ok && ml == mr;

        // inversion round-trip
        WordSum round = morphism_apply(*B, *B, psi, morphism_apply(*B, *B, phi, w));
        WordSum expect;
        expect[w] = Rational(1);
        inv_ok = inv_ok && round == expect;
    }
    line("9. comultiplication coassociative and cocommutative to weight 5", co_ok);
    line("9. coderivation law to weight 5", code_ok);
    line("9. morphism law to weight 5", morph_ok);
    line("9. morphism inversion round-trip to weight 5", inv_ok);
}

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::cout << "\nacceptance: " << g_pass << " passed, " << g_fail << " failed\n";
    return g_fail;
}
