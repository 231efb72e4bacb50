#include "forma/obstruction.hpp"

#include <algorithm>
#include <numeric>

namespace forma {

namespace {
int parity(long long e) { return static_cast<int>(((e % 2) + 2) % 2); }
Rational sign_pow(long long e) { return parity(e) ? Rational(-1) : Rational(1); }
}  // namespace

Canon lambda_canonicalize(const std::vector<int>& degrees, const std::vector<int>& letters) {
    Canon c;
    c.word = letters;
    for (size_t i = 1; i < c.word.size(); ++i) {
        int x = c.word[i];
        size_t j = i;
        while (j > 0 && c.word[j - 1] > x) {
            // exterior swap: -(-1)^(|a||b|), so +1 when both odd, else -1
            bool both_odd = (parity(degrees[c.word[j - 1]]) == 1) && (parity(degrees[x]) == 1);
            if (!both_odd)
                c.sign = -c.sign;
            c.word[j] = c.word[j - 1];
            --j;
        }
        c.word[j] = x;
    }
    for (size_t i = 1; i < c.word.size(); ++i)
        if (c.word[i] == c.word[i - 1] && parity(degrees[c.word[i]]) == 0) {
            c.zero = true;
            return c;
        }
    return c;
}

VecSum HCochain::eval(const std::vector<int>& degrees, const std::vector<int>& args) const {
    Canon c = lambda_canonicalize(degrees, args);
    if (c.zero)
        return {};
    auto it = values.find(c.word);
    if (it == values.end())
        return {};
    return c.sign == 1 ? it->second : vsum_scale(Rational(-1), it->second);
}

void HCochain::set(const std::vector<int>& degrees, const std::vector<int>& args, VecSum v) {
    Canon c = lambda_canonicalize(degrees, args);
    if (c.zero || v.empty())
        return;
    values[c.word] = c.sign == 1 ? std::move(v) : vsum_scale(Rational(-1), v);
}

bool HCochain::is_zero() const {
    for (const auto& [w, v] : values)
        if (!v.empty())
            return false;
    return true;
}

VecSum graded_ce_differential_H(const HView& H, const HCochain& phi,
                                const std::vector<int>& args) {
    int kp1 = static_cast<int>(args.size());
    VecSum out;
    // first sum: brackets with the evaluation on the other arguments
    for (int i = 0; i < kp1; ++i) {
        std::vector<int> rest;
        long long pre = 0;
        for (int s = 0; s < i; ++s)
            pre += H.degrees[args[s]];
        for (int s = 0; s < kp1; ++s)
            if (s != i)
                rest.push_back(args[s]);
        long long e = i + static_cast<long long>(phi.degree) * H.degrees[args[i]] +
                      static_cast<long long>(H.degrees[args[i]]) * pre;
        Rational sgn = sign_pow(e);  // (-1)^(i-1) with i 1-based = (-1)^i 0-based... see below
        // note: (-1)^(i-1) for 1-based i equals (-1)^i for 0-based i shifted;
        // with i 0-based the printed factor is (-1)^i.
        VecSum inner = phi.eval(H.degrees, rest);
        for (const auto& [t, c] : inner)
            for (const auto& [u, b] : H.bracket(args[i], t))
                vsum_add(out, u, sgn * c * b);
    }
    // second sum: phi on the bracket and the rest
    for (int i = 0; i < kp1; ++i)
        for (int j = i + 1; j < kp1; ++j) {
            long long pre_i = 0;
            for (int s = 0; s < i; ++s)
                pre_i += H.degrees[args[s]];
            long long between = 0;
            for (int s = i + 1; s < j; ++s)
                between += H.degrees[args[s]];
            // 1-based (i+j) = 0-based (i+j+2), same parity as i+j
            long long e = (i + 1) + (j + 1) +
                          (static_cast<long long>(H.degrees[args[i]]) + H.degrees[args[j]]) * pre_i +
                          static_cast<long long>(H.degrees[args[j]]) * between;
            Rational sgn = sign_pow(e);
            std::vector<int> rest;
            for (int s = 0; s < kp1; ++s)
                if (s != i && s != j)
                    rest.push_back(s);
            for (const auto& [t, b] : H.bracket(args[i], args[j])) {
                std::vector<int> eval_args{t};
                for (int s : rest)
                    eval_args.push_back(args[s]);
                for (const auto& [u, c] : phi.eval(H.degrees, eval_args))
                    vsum_add(out, u, sgn * b * c);
            }
        }
    return out;
}

// ---------------------------------------------------------------------------

QuadraticReduced::QuadraticReduced(Ctx ctx, BilinearForm kappa, int amax)
    : ctx_(std::move(ctx)), kappa_(std::move(kappa)), amax_(amax) {
    if (2 * amax_ + 1 > ctx_->dmax())
        throw error("QuadraticReduced: ambient dmax too small for amax");
    if (!kappa_.is_quadratic(ctx_->algebra()))
        throw error("QuadraticReduced: kappa is not invariant nondegenerate");

    q_ = casimir_polyvector(ctx_, kappa_);
    PolyVector E = euler_field(ctx_);
    PolyVector pi = poisson_structure(ctx_);
    PolyVector om = cartan_cocycle(ctx_, kappa_);

    auto VB = std::make_shared<GradedBasis>();
    auto UB = std::make_shared<GradedBasis>();
    int n1 = amax_ + 1;
    PVKey unit;
    unit.exp.assign(ctx_->dim(), 0);
    PolyVector qa = PolyVector::term(ctx_, unit, Rational(1));
    std::vector<PolyVector> qpow;
    for (int a = 0; a <= amax_; ++a) {
        qpow.push_back(qa);
        if (a < amax_)
            qa = wedge(qa, q_);
    }
    const char* names[4] = {"1", "E", "pi", "Omega"};
    const PolyVector* blocks[4] = {nullptr, &E, &pi, &om};
    int shifted_deg[4] = {-2, -1, 0, 1};
    for (int t = 0; t < 4; ++t)
        for (int a = 0; a <= amax_; ++a) {
            VB->keys.push_back("q^" + std::to_string(a) + " " + names[t]);
            VB->degrees.push_back(shifted_deg[t]);
            letter_pv_.push_back(blocks[t] ? wedge(qpow[a], *blocks[t]) : qpow[a]);
        }
    for (int t : {0, 3})
        for (int a = 0; a <= amax_; ++a) {
            UB->keys.push_back("q^" + std::to_string(a) + " " + names[t]);
            UB->degrees.push_back(shifted_deg[t]);
        }

    ab_.VB = VB;
    ab_.UB = UB;
    ab_.acyclic.assign(VB->size(), false);
    ab_.i1.resize(UB->size());
    ab_.p1.assign(VB->size(), {});
    ab_.h1.assign(VB->size(), {});
    ab_.b1.assign(VB->size(), {});
    ab_.bU1.assign(UB->size(), {});
    for (int a = 0; a <= amax_; ++a) {
        ab_.acyclic[letter(Euler, a)] = true;
        ab_.acyclic[letter(Pi, a)] = true;
        ab_.i1[a] = VecSum{{letter(One, a), Rational(1)}};
        ab_.i1[n1 + a] = VecSum{{letter(Omega, a), Rational(1)}};
        ab_.p1[letter(One, a)] = VecSum{{a, Rational(1)}};
        ab_.p1[letter(Omega, a)] = VecSum{{n1 + a, Rational(1)}};
        ab_.h1[letter(Pi, a)] = VecSum{{letter(Euler, a), Rational(1)}};
        ab_.b1[letter(Euler, a)] = VecSum{{letter(Pi, a), Rational(1)}};
    }
}

int QuadraticReduced::letter(Type t, int a) const {
    return static_cast<int>(t) * (amax_ + 1) + a;
}

int QuadraticReduced::u_letter(Type t, int a) const {
    if (t == One)
        return a;
    if (t == Omega)
        return (amax_ + 1) + a;
    throw error("QuadraticReduced: only 1 and Omega letters live on the U side");
}

PolyVector QuadraticReduced::letter_polyvector(int vb_letter) const {
    return letter_pv_.at(vb_letter);
}

VecSum QuadraticReduced::decompose(const PolyVector& f) const {
    VecSum out;
    // split by (form, poly) blocks
    std::map<std::pair<int, int>, PolyVector> blocks;
    for (const auto& [key, c] : f.terms()) {
        int k = static_cast<int>(key.form.size());
        int m = std::accumulate(key.exp.begin(), key.exp.end(), 0);
        auto it = blocks.find({k, m});
        if (it == blocks.end())
            it = blocks.emplace(std::make_pair(k, m), PolyVector(f.ctx())).first;
        it->second.add_term(key, c);
    }
    for (const auto& [km, part] : blocks) {
        auto [k, m] = km;
        Type t;
        int a;
        if (k == 0 && m % 2 == 0) {
            t = One;
            a = m / 2;
        } else if (k == 1 && m % 2 == 1) {
            t = Euler;
            a = (m - 1) / 2;
        } else if (k == 2 && m % 2 == 1) {
            t = Pi;
            a = (m - 1) / 2;
        } else if (k == 3 && m % 2 == 0) {
            t = Omega;
            a = m / 2;
        } else {
            throw error("QuadraticReduced: element outside the reduced subalgebra");
        }
        if (a > amax_)
            throw truncation_error("QuadraticReduced: Casimir power exceeds amax");
        const PolyVector& cand = letter_pv_[letter(t, a)];
        const auto& [key0, c0] = *cand.terms().begin();
        auto it = part.terms().find(key0);
        if (it == part.terms().end())
            throw error("QuadraticReduced: element outside the reduced subalgebra");
        Rational scale = it->second / c0;
        if (!(part == scale * cand))
            throw error("QuadraticReduced: element outside the reduced subalgebra");
        vsum_add(out, letter(t, a), scale);
    }
    return out;
}

std::shared_ptr<DglaPackage> QuadraticReduced::package(bool include_diff) const {
    auto self = *this;  // cheap copy of shared state for the closures
    auto diff = [self](int i) -> VecSum { return self.ab_.b1[i]; };
    auto bracket = [self](int i, int j) -> VecSum {
        return self.decompose(schouten(self.letter_pv_[i], self.letter_pv_[j]));
    };
    return std::make_shared<DglaPackage>(ab_.VB, diff, bracket, include_diff, true);
}

VecSum eval_unshifted(const GradedBasis& shifted_basis, const TaylorEval& f,
                      const std::vector<int>& tuple) {
    int k = static_cast<int>(tuple.size());
    long long e = 0;
    for (int r = 0; r < k; ++r)
        e += static_cast<long long>(k - 1 - r) * (shifted_basis.degrees[tuple[r]] + 1);
    Canon c = canonicalize(shifted_basis, tuple);
    if (c.zero)
        return {};
    VecSum v = f.eval(c.word);
    Rational s = sign_pow(e) * Rational(c.sign);
    return s == Rational(1) ? v : vsum_scale(s, v);
}

// ---------------------------------------------------------------------------

ObstructionPipeline::ObstructionPipeline(Ctx ctx, std::optional<BilinearForm> kappa)
    : ctx_(std::move(ctx)), kappa_(std::move(kappa)), table_(ctx_) {
    bool quad = kappa_ && kappa_->is_quadratic(ctx_->algebra());
    int n = ctx_->dim();
    for (int m = 0; m <= ctx_->dmax(); ++m)
        for (int k = 0; k <= n; ++k) {
            int d = table_.dim(k, m);
            if (d == 0)
                continue;
            std::vector<int> ids;
            // natural quadratic section when the class is one-dimensional
            std::optional<PolyVector> anchor;
            if (quad && d == 1 && m % 2 == 0) {
                if (k == 0) {
                    anchor = embed_casimir(ctx_, *kappa_, CasimirPolynomial::q_power(m / 2));
                } else if (k == 3) {
                    anchor = wedge(embed_casimir(ctx_, *kappa_, CasimirPolynomial::q_power(m / 2)),
                                   cartan_cocycle(ctx_, *kappa_));
                }
            }
            SparseMatrix S(d, d);
            if (anchor && !anchor->is_zero()) {
                auto cls = table_.project(*anchor);
                bool nonzero = false;
                for (const auto& c : cls.coords)
                    if (!c.is_zero())
                        nonzero = true;
                if (nonzero) {
                    HBasisElement e;
                    e.form = k;
                    e.poly = m;
                    e.index = 0;
                    e.degree = k - 1;
                    e.key = (k == 0 ? "q^" : "q^") + std::to_string(m / 2) +
                            (k == 3 ? " Omega" : "");
                    e.section = *anchor;
                    ids.push_back(static_cast<int>(hbasis_.size()));
                    hbasis_.push_back(std::move(e));
                    S.set(0, 0, cls.coords[0]);
                    by_bidegree_[{k, m}] = ids;
                    section_from_echelon_[{k, m}] = inverse(S);
                    continue;
                }
            }
            const auto& reps = table_.representatives(k, m);
            for (int t = 0; t < d; ++t) {
                HBasisElement e;
                e.form = k;
                e.poly = m;
                e.index = t;
                e.degree = k - 1;
                e.key = "H(" + std::to_string(k) + "," + std::to_string(m) + ")#" +
                        std::to_string(t);
                e.section = reps[t];
                ids.push_back(static_cast<int>(hbasis_.size()));
                hbasis_.push_back(std::move(e));
                S.set(t, t, Rational(1));
            }
            by_bidegree_[{k, m}] = ids;
            section_from_echelon_[{k, m}] = S;
        }
}

HView ObstructionPipeline::hview() {
    HView H;
    for (const auto& e : hbasis_)
        H.degrees.push_back(e.degree);
    H.bracket = [this](int i, int j) { return h_bracket(i, j); };
    return H;
}

Contraction& ObstructionPipeline::graded_contraction(int poly) {
    auto it = contractions_.find(poly);
    if (it != contractions_.end())
        return it->second;
    int n = ctx_->dim();
    FiniteComplex V, U;
    std::map<int, std::map<PVKey, int>> index;
    for (int k = 0; k <= n; ++k) {
        auto basis = monomial_basis(ctx_, k, poly);
        std::vector<std::string> keys;
        for (int t = 0; t < static_cast<int>(basis.size()); ++t) {
            index[k][basis[t]] = t;
            keys.push_back("m" + std::to_string(t));
        }
        V.set_basis(k, std::move(keys));
    }
    for (int k = 0; k < n; ++k) {
        auto basis = monomial_basis(ctx_, k, poly);
        SparseMatrix D(V.dim(k + 1), V.dim(k));
        for (int c = 0; c < static_cast<int>(basis.size()); ++c) {
            PolyVector mono = PolyVector::term(ctx_, basis[c], Rational(1));
            PolyVector dm = ce_differential(mono);
            for (const auto& [key, v] : dm.terms())
                D.set(index[k + 1].at(key), c, v);
        }
        V.set_differential(k, D);
    }
    DegMap imap;
    imap.shift = 0;
    for (int k = 0; k <= n; ++k) {
        auto bid = by_bidegree_.find({k, poly});
        int ud = bid == by_bidegree_.end() ? 0 : static_cast<int>(bid->second.size());
        std::vector<std::string> keys;
        SparseMatrix M(V.dim(k), ud);
        for (int t = 0; t < ud; ++t) {
            const auto& e = hbasis_[bid->second[t]];
            keys.push_back(e.key);
            for (const auto& [key, v] : e.section.terms())
                M.set(index[k].at(key), t, v);
        }
        if (ud > 0) {
            U.set_basis(k, std::move(keys));
            imap.mats[k] = std::move(M);
        }
    }
    for (int k = 0; k <= n; ++k)
        if (U.dim(k) > 0 && U.dim(k + 1) >= 0)
            U.set_differential(k, SparseMatrix(U.dim(k + 1), U.dim(k)));
    auto c = contraction_from_injection(U, V, imap);
    return contractions_.emplace(poly, std::move(c)).first->second;
}

PolyVector ObstructionPipeline::phi2(int i, int j) {
    auto key = std::make_pair(i, j);
    auto it = phi2_cache_.find(key);
    if (it != phi2_cache_.end())
        return it->second;
    PolyVector br = schouten(hbasis_[i].section, hbasis_[j].section);
    PolyVector out(ctx_);
    if (!br.is_zero()) {
        int m = br.poly_degree();
        int k = br.form_degree();
        auto& con = graded_contraction(m);
        auto basis = monomial_basis(ctx_, k, m);
        std::map<PVKey, int> index;
        for (int t = 0; t < static_cast<int>(basis.size()); ++t)
            index[basis[t]] = t;
        std::vector<Rational> v(basis.size());
        for (const auto& [pk, c] : br.terms())
            v[index.at(pk)] = c;
        const SparseMatrix* h = con.h.at(k);
        if (h) {
            auto hv = h->apply(v);
            auto down = monomial_basis(ctx_, k - 1, m);
            for (int t = 0; t < static_cast<int>(down.size()); ++t)
                out.add_term(down[t], Rational(-1) * hv[t]);
        }
    }
    phi2_cache_[key] = out;
    return out;
}

PolyVector ObstructionPipeline::w3(int i1, int i2, int i3) {
    long long d1 = hbasis_[i1].degree, d2 = hbasis_[i2].degree, d3 = hbasis_[i3].degree;
    auto phi2_ext = [&](const VecSum& x, int y) {
        PolyVector acc(ctx_);
        for (const auto& [t, c] : x)
            acc += c * phi2(t, y);
        return acc;
    };
    PolyVector out(ctx_);
    out += sign_pow(d1) * schouten(hbasis_[i1].section, phi2(i2, i3));
    out += sign_pow(d2 + d2 * d1 + 1) * schouten(hbasis_[i2].section, phi2(i1, i3));
    out += sign_pow(d3 + d3 * (d1 + d2)) * schouten(hbasis_[i3].section, phi2(i1, i2));
    out += Rational(-1) * phi2_ext(h_bracket(i1, i2), i3);
    out += sign_pow(d3 * d2) * phi2_ext(h_bracket(i1, i3), i2);
    out += sign_pow((d2 + d3) * d1 + 1) * phi2_ext(h_bracket(i2, i3), i1);
    return out;
}

VecSum ObstructionPipeline::z3(int i, int j, int k) {
    return project_to_section(w3(i, j, k));
}

VecSum ObstructionPipeline::h_bracket(int i, int j) {
    auto key = std::make_pair(i, j);
    auto it = bracket_cache_.find(key);
    if (it != bracket_cache_.end())
        return it->second;
    VecSum v = project_to_section(schouten(hbasis_[i].section, hbasis_[j].section));
    bracket_cache_[key] = v;
    return v;
}

VecSum ObstructionPipeline::project_to_section(const PolyVector& cocycle) {
    VecSum out;
    if (cocycle.is_zero())
        return out;
    std::map<std::pair<int, int>, PolyVector> blocks;
    for (const auto& [key, c] : cocycle.terms()) {
        int k = static_cast<int>(key.form.size());
        int m = std::accumulate(key.exp.begin(), key.exp.end(), 0);
        auto it = blocks.find({k, m});
        if (it == blocks.end())
            it = blocks.emplace(std::make_pair(k, m), PolyVector(ctx_)).first;
        it->second.add_term(key, c);
    }
    for (const auto& [km, part] : blocks) {
        auto cls = table_.project(part);
        if (cls.coords.empty())
            continue;
        auto bid = by_bidegree_.find(km);
        std::vector<Rational> ech = cls.coords;
        auto sec = section_from_echelon_.at(km).apply(ech);
        if (bid == by_bidegree_.end())
            throw error("project_to_section: class in unexpected bidegree");
        for (int t = 0; t < static_cast<int>(sec.size()); ++t)
            vsum_add(out, bid->second[t], sec[t]);
    }
    return out;
}

std::vector<std::vector<int>> ObstructionPipeline::probe_triples() {
    std::vector<std::vector<int>> out;
    int nh = static_cast<int>(hbasis_.size());
    std::vector<int> degs;
    for (const auto& e : hbasis_)
        degs.push_back(e.degree);
    for (int a = 0; a < nh; ++a)
        for (int b = a; b < nh; ++b)
            for (int c = b; c < nh; ++c) {
                if (hbasis_[a].poly + hbasis_[b].poly + hbasis_[c].poly > ctx_->dmax() - 2)
                    continue;
                if (lambda_canonicalize(degs, {a, b, c}).zero)
                    continue;
                out.push_back({a, b, c});
            }
    return out;
}

C3Certificate ObstructionPipeline::c3_vanishes() {
    C3Certificate cert;
    auto H = hview();
    int nh = static_cast<int>(hbasis_.size());

    // unknowns: theta(pair) = target, Z-degree -1 and poly shift -1
    struct Unknown {
        int i, j, t;
        std::string key;
    };
    std::vector<Unknown> unknowns;
    for (int i = 0; i < nh; ++i)
        for (int j = i; j < nh; ++j) {
            if (lambda_canonicalize(H.degrees, {i, j}).zero)
                continue;
            for (int t = 0; t < nh; ++t) {
                if (hbasis_[t].degree != hbasis_[i].degree + hbasis_[j].degree - 1)
                    continue;
                if (hbasis_[t].poly != hbasis_[i].poly + hbasis_[j].poly - 1)
                    continue;
                unknowns.push_back({i, j, t,
                                    "theta(" + hbasis_[i].key + "," + hbasis_[j].key + ")->" +
                                        hbasis_[t].key});
            }
        }

    auto probes = probe_triples();
    // rows: (probe, output coordinate); assembled densely per probe
    SparseMatrix A(static_cast<int>(probes.size()) * nh, static_cast<int>(unknowns.size()));
    std::vector<Rational> rhs(static_cast<int>(probes.size()) * nh);
    for (int u = 0; u < static_cast<int>(unknowns.size()); ++u) {
        HCochain ind;
        ind.arity = 2;
        ind.degree = -1;
        ind.set(H.degrees, {unknowns[u].i, unknowns[u].j}, VecSum{{unknowns[u].t, Rational(1)}});
        for (int p = 0; p < static_cast<int>(probes.size()); ++p) {
            auto v = graded_ce_differential_H(H, ind, probes[p]);
            for (const auto& [coord, c] : v)
                A.set(p * nh + coord, u, c);
        }
    }
    for (int p = 0; p < static_cast<int>(probes.size()); ++p) {
        auto v = z3(probes[p][0], probes[p][1], probes[p][2]);
        cert.z3_samples.emplace_back(probes[p], v);
        for (const auto& [coord, c] : v) {
            rhs[p * nh + coord] = c;
            cert.z3_all_zero = false;
        }
    }
    cert.system_rows = A.rows();
    cert.system_cols = A.cols();
    cert.system_rank = rank(A);
    auto sol = solve(A, rhs);
    if (sol) {
        cert.exact = true;
        for (int u = 0; u < static_cast<int>(unknowns.size()); ++u)
            if (!(*sol)[u].is_zero())
                cert.witness.emplace_back(unknowns[u].key, (*sol)[u]);
    }
    return cert;
}

}  // namespace forma
