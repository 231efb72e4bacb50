#include "forma/linfty.hpp"

#include <algorithm>
#include <functional>

namespace forma {

int TaylorMap::min_arity() const {
    return comp_.empty() ? 1 : comp_.begin()->first;
}

int TaylorMap::max_arity() const {
    return comp_.empty() ? 0 : comp_.rbegin()->first;
}

VecSum TaylorMap::eval(const SymWord& w) const {
    auto it = comp_.find(static_cast<int>(w.size()));
    if (it == comp_.end())
        return {};
    auto jt = it->second.find(w);
    return jt == it->second.end() ? VecSum{} : jt->second;
}

void TaylorMap::set(const SymWord& w, VecSum v) {
    if (v.empty())
        return;
    comp_[static_cast<int>(w.size())][w] = std::move(v);
}

bool TaylorMap::is_zero() const {
    for (const auto& [r, tab] : comp_)
        if (!tab.empty())
            return false;
    return true;
}

DglaPackage::DglaPackage(BasisPtr basis, std::function<VecSum(int)> diff,
                         std::function<VecSum(int, int)> bracket, bool include_diff,
                         bool include_bracket)
    : basis_(std::move(basis)),
      diff_(std::move(diff)),
      bracket_(std::move(bracket)),
      include_diff_(include_diff),
      include_bracket_(include_bracket) {}

VecSum DglaPackage::eval(const SymWord& w) const {
    if (w.size() == 1)
        return include_diff_ && diff_ ? diff_(w[0]) : VecSum{};
    if (w.size() != 2 || !include_bracket_ || !bracket_)
        return {};
    auto it = cache_.find(w);
    if (it != cache_.end())
        return it->second;
    // D_2(x_i . x_j) = (-1)^(unshifted degree of x_i) [x_i, x_j]
    int unshifted = basis_->degrees[w[0]] + 1;
    VecSum v = bracket_(w[0], w[1]);
    if (unshifted % 2 != 0)
        v = vsum_scale(Rational(-1), v);
    cache_[w] = v;
    return v;
}

std::vector<SymWord> words_of_weight_over(const GradedBasis& B, int weight,
                                          const std::vector<int>& letters) {
    std::vector<int> sorted = letters;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<SymWord> out;
    SymWord cur;
    std::function<void(size_t)> rec = [&](size_t start) {
        if (static_cast<int>(cur.size()) == weight) {
            out.push_back(cur);
            return;
        }
        for (size_t t = start; t < sorted.size(); ++t) {
            int i = sorted[t];
            if (!cur.empty() && cur.back() == i && B.odd(i))
                continue;
            cur.push_back(i);
            rec(t);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

WordSum coderivation_apply(const GradedBasis& B, const TaylorEval& f, const SymWord& w) {
    WordSum out;
    int k = static_cast<int>(w.size());
    int lo = std::max(1, f.min_arity());
    int hi = std::min(k, f.max_arity());
    for (int r = lo; r <= hi; ++r) {
        // choose r positions
        std::vector<int> pos(r);
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == r) {
                SymWord sub, rest;
                size_t s = 0;
                for (int t = 0; t < k; ++t) {
                    if (s < pos.size() && t == pos[s]) {
                        sub.push_back(w[t]);
                        ++s;
                    } else {
                        rest.push_back(w[t]);
                    }
                }
                int esign = extraction_sign(B, w, pos);
                VecSum fv = f.eval(sub);
                for (const auto& [letter, c] : fv) {
                    std::vector<int> seq;
                    seq.push_back(letter);
                    for (int x : rest)
                        seq.push_back(x);
                    Canon cn = canonicalize(B, seq);
                    if (cn.zero)
                        continue;
                    wsum_add(out, cn.word, Rational(esign * cn.sign) * c);
                }
                return;
            }
            for (int t = start; t <= k - (r - depth); ++t) {
                pos[depth] = t;
                rec(t + 1, depth + 1);
            }
        };
        rec(0, 0);
    }
    return out;
}

WordSum coderivation_apply(const GradedBasis& B, const TaylorEval& f, const WordSum& x) {
    WordSum out;
    for (const auto& [w, c] : x) {
        WordSum part = coderivation_apply(B, f, w);
        for (const auto& [u, v] : part)
            wsum_add(out, u, c * v);
    }
    return out;
}

namespace {

// All set partitions of {0..k-1}, generated by always putting the smallest
// unassigned element into a new block with a subset of the rest.
void partitions_rec(std::vector<int> remaining,
                    std::vector<std::vector<int>>& current,
                    const std::function<void(const std::vector<std::vector<int>>&)>& emit) {
    if (remaining.empty()) {
        emit(current);
        return;
    }
    int head = remaining.front();
    std::vector<int> rest(remaining.begin() + 1, remaining.end());
    int m = static_cast<int>(rest.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> block{head};
        std::vector<int> next;
        for (int t = 0; t < m; ++t) {
            if (mask & (1u << t))
                block.push_back(rest[t]);
            else
                next.push_back(rest[t]);
        }
        current.push_back(block);
        partitions_rec(next, current, emit);
        current.pop_back();
    }
}

}  // namespace

WordSum morphism_apply(const GradedBasis& dom, const GradedBasis& cod, const TaylorEval& phi,
                       const SymWord& w) {
    WordSum out;
    int k = static_cast<int>(w.size());
    if (k == 0) {
        out[{}] = Rational(1);  // group-like unit
        return out;
    }
    std::vector<int> all(k);
    for (int t = 0; t < k; ++t)
        all[t] = t;
    std::vector<std::vector<int>> cur;
    partitions_rec(all, cur, [&](const std::vector<std::vector<int>>& part) {
        for (const auto& b : part)
            if (static_cast<int>(b.size()) > phi.max_arity() ||
                static_cast<int>(b.size()) < phi.min_arity())
                return;
        // Koszul sign of regrouping w into the blocks: peel block by block
        // from the remaining letters. phi has degree 0, so no further signs.
        int sign = 1;
        std::vector<bool> taken(k, false);
        for (const auto& b : part) {
            int odd_before = 0;
            size_t bi = 0;
            for (int t = 0; t < k; ++t) {
                if (taken[t])
                    continue;
                bool selected = bi < b.size() && t == b[bi];
                if (selected) {
                    if (dom.odd(w[t]) && (odd_before % 2))
                        sign = -sign;
                    ++bi;
                } else if (dom.odd(w[t])) {
                    ++odd_before;
                }
            }
            for (int p : b)
                taken[p] = true;
        }
        std::vector<VecSum> outs;
        for (const auto& b : part) {
            SymWord sub;
            for (int p : b)
                sub.push_back(w[p]);
            VecSum v = phi.eval(sub);
            if (v.empty())
                return;
            outs.push_back(std::move(v));
        }
        std::vector<int> seq(outs.size());
        std::function<void(size_t, Rational)> expand = [&](size_t idx, Rational coef) {
            if (idx == outs.size()) {
                Canon cn = canonicalize(cod, seq);
                if (cn.zero)
                    return;
                wsum_add(out, cn.word, Rational(sign * cn.sign) * coef);
                return;
            }
            for (const auto& [letter, c] : outs[idx]) {
                seq[idx] = letter;
                expand(idx + 1, coef * c);
            }
        };
        expand(0, Rational(1));
    });
    return out;
}

WordSum morphism_apply(const GradedBasis& dom, const GradedBasis& cod, const TaylorEval& phi,
                       const WordSum& x) {
    WordSum out;
    for (const auto& [w, c] : x) {
        WordSum part = morphism_apply(dom, cod, phi, w);
        for (const auto& [u, v] : part)
            wsum_add(out, u, c * v);
    }
    return out;
}

VecSum taylor_apply(const TaylorEval& f, const WordSum& x) {
    VecSum out;
    for (const auto& [w, c] : x) {
        if (static_cast<int>(w.size()) < f.min_arity() ||
            static_cast<int>(w.size()) > f.max_arity())
            continue;
        for (const auto& [i, v] : f.eval(w))
            vsum_add(out, i, c * v);
    }
    return out;
}

TaylorMap nr_bracket(BasisPtr B, const TaylorEval& f, const TaylorEval& g, int max_arity) {
    TaylorMap out(B, B, f.degree() + g.degree());
    int fg = f.degree() * g.degree();
    for (int r = 1; r <= max_arity; ++r)
        for (const auto& w : words_of_weight(*B, r)) {
            VecSum val = taylor_apply(f, coderivation_apply(*B, g, w));
            VecSum rhs = taylor_apply(g, coderivation_apply(*B, f, w));
            Rational s = (fg % 2) ? Rational(1) : Rational(-1);
            for (const auto& [i, c] : rhs)
                vsum_add(val, i, s * c);
            out.set(w, std::move(val));
        }
    return out;
}

LinftyReport check_linfty(const GradedBasis& B, const TaylorEval& D, int max_weight) {
    for (int r = 1; r <= max_weight; ++r)
        for (const auto& w : words_of_weight(B, r)) {
            WordSum once = coderivation_apply(B, D, w);
            WordSum twice = coderivation_apply(B, D, once);
            if (!twice.empty())
                return {false, w};
        }
    return {};
}

LinftyReport check_linfty(const GradedBasis& B, const TaylorEval& D, int max_weight,
                          const std::vector<int>& letters) {
    for (int r = 1; r <= max_weight; ++r)
        for (const auto& w : words_of_weight_over(B, r, letters)) {
            WordSum once = coderivation_apply(B, D, w);
            WordSum twice = coderivation_apply(B, D, once);
            if (!twice.empty())
                return {false, w};
        }
    return {};
}

namespace {
TaylorMap residual_impl(BasisPtr domain, BasisPtr codomain, const TaylorEval& phi,
                        const TaylorEval& D, const TaylorEval& d,
                        const std::vector<SymWord>& words) {
    TaylorMap out(domain, codomain, 1);
    for (const auto& w : words) {
        VecSum val = taylor_apply(D, morphism_apply(*domain, *codomain, phi, w));
        VecSum rhs = taylor_apply(phi, coderivation_apply(*domain, d, w));
        for (const auto& [i, c] : rhs)
            vsum_add(val, i, Rational(-1) * c);
        out.set(w, std::move(val));
    }
    return out;
}
}  // namespace

TaylorMap residual(BasisPtr domain, BasisPtr codomain, const TaylorEval& phi, const TaylorEval& D,
                   const TaylorEval& d, int r) {
    return residual_impl(domain, codomain, phi, D, d, words_of_weight(*domain, r));
}

TaylorMap residual(BasisPtr domain, BasisPtr codomain, const TaylorEval& phi, const TaylorEval& D,
                   const TaylorEval& d, int r, const std::vector<int>& letters) {
    return residual_impl(domain, codomain, phi, D, d, words_of_weight_over(*domain, r, letters));
}

TaylorMap invert_morphism(BasisPtr domain, BasisPtr codomain, const TaylorEval& phi,
                          int max_weight) {
    if (domain->size() != codomain->size())
        throw error("invert_morphism: phi_1 cannot be invertible");
    int n = domain->size();
    SparseMatrix m1(n, n);
    for (int j = 0; j < n; ++j)
        for (const auto& [i, c] : phi.eval({j}))
            m1.set(i, j, c);
    SparseMatrix inv = inverse(m1);  // throws when phi_1 is singular

    TaylorMap psi1(codomain, domain, 0);
    for (int j = 0; j < n; ++j) {
        VecSum col;
        for (int i = 0; i < n; ++i)
            vsum_add(col, i, inv.at(i, j));
        psi1.set(SymWord{j}, std::move(col));
    }

    TaylorMap psi = psi1;
    // Weight by weight: the weight-r part of Phi(e^{*psi_1} v) is v itself,
    // so the missing coefficient is minus the lower-weight contributions.
    for (int r = 2; r <= max_weight; ++r)
        for (const auto& v : words_of_weight(*codomain, r)) {
            WordSum lift = morphism_apply(*codomain, *domain, psi1, v);
            WordSum image = morphism_apply(*domain, *codomain, phi, lift);
            VecSum val;
            for (const auto& [u, c] : image) {
                if (static_cast<int>(u.size()) >= r)
                    continue;
                for (const auto& [i, x] : psi.eval(u))
                    vsum_add(val, i, c * x);
            }
            if (!val.empty())
                psi.set(v, vsum_scale(Rational(-1), val));
        }
    return psi;
}

MultiTable shift_multitable(const MultiTable& t, int j) {
    MultiTable out;
    auto dom = std::make_shared<GradedBasis>(*t.domain);
    auto cod = std::make_shared<GradedBasis>(*t.codomain);
    for (auto& d : dom->degrees)
        d -= j;
    for (auto& d : cod->degrees)
        d -= j;
    out.domain = dom;
    out.codomain = cod;
    out.arity = t.arity;
    out.degree = t.degree + j * (t.arity - 1);
    for (const auto& [tuple, v] : t.values) {
        int s = shift_sign(*t.domain, tuple, j);
        out.values[tuple] = s == 1 ? v : vsum_scale(Rational(-1), v);
    }
    return out;
}

int shift_sign(const GradedBasis& domain, const std::vector<int>& tuple, int j) {
    int k = static_cast<int>(tuple.size());
    long long e = (static_cast<long long>(j) * (j - 1) / 2) * (static_cast<long long>(k) * (k - 1) / 2);
    for (int r = 0; r < k; ++r)
        e += static_cast<long long>(j) * (k - 1 - r) * domain.degrees[tuple[r]];
    return (e % 2 + 2) % 2 == 0 ? 1 : -1;
}

AdaptedBasis adapt_contraction(const Contraction& c) {
    auto rep = verify_contraction(c);
    if (!rep.ok)
        throw error("adapt_contraction: contraction invalid: " + rep.first_violation);

    const FiniteComplex& V = c.V;
    const FiniteComplex& U = c.U;

    AdaptedBasis ab;
    auto UB = std::make_shared<GradedBasis>();
    auto VB = std::make_shared<GradedBasis>();

    // UB letters: the natural U basis, degrees shifted by one.
    std::map<std::pair<int, int>, int> u_letter;  // (degree, index) -> letter
    for (int d : U.degrees())
        for (int t = 0; t < U.dim(d); ++t) {
            u_letter[{d, t}] = UB->size();
            UB->keys.push_back(U.basis(d)[t]);
            UB->degrees.push_back(d - 1);
        }

    // VB letters: per degree, ker [h,b] columns then im [h,b] columns.
    struct DegData {
        std::vector<std::vector<Rational>> cols;  // letter vectors in V coords
        SparseMatrix to_letters;                  // inverse change of basis
        int first_letter = 0;
    };
    std::map<int, DegData> degdata;
    for (int d : V.degrees()) {
        int n = V.dim(d);
        auto get = [&](const DegMap& f, int dd, int rows, int cols_) {
            const SparseMatrix* m = f.at(dd);
            if (!m)
                return SparseMatrix(rows, cols_);
            return *m;
        };
        SparseMatrix bd = get(V.diff_map(), d, V.dim(d + 1), n);
        SparseMatrix bdm = get(V.diff_map(), d - 1, n, V.dim(d - 1));
        SparseMatrix hd = get(c.h, d, V.dim(d - 1), n);
        SparseMatrix hd1 = get(c.h, d + 1, n, V.dim(d + 1));
        SparseMatrix P = bdm * hd + hd1 * bd;

        DegData dd;
        dd.first_letter = VB->size();
        auto kerP = nullspace(P);
        std::vector<std::vector<Rational>> imP;
        {
            std::map<int, std::vector<Rational>> ech;
            for (int col = 0; col < n; ++col) {
                std::vector<Rational> v(n);
                for (int r2 = 0; r2 < n; ++r2)
                    v[r2] = P.at(r2, col);
                // reduce against echelon, insert if independent
                for (auto& [piv, row] : ech) {
                    if (v[piv].is_zero())
                        continue;
                    Rational f = v[piv];
                    for (int t = 0; t < n; ++t)
                        v[t] -= f * row[t];
                }
                int piv = -1;
                for (int t = 0; t < n; ++t)
                    if (!v[t].is_zero()) {
                        piv = t;
                        break;
                    }
                if (piv < 0)
                    continue;
                Rational iv = v[piv].inv();
                for (auto& x : v)
                    x *= iv;
                for (auto& [p2, row] : ech) {
                    if (!row[piv].is_zero()) {
                        Rational f = row[piv];
                        for (int t = 0; t < n; ++t)
                            row[t] -= f * v[t];
                    }
                }
                imP.push_back(v);
                ech[piv] = std::move(v);
            }
        }
        int idx = 0;
        for (auto& v : kerP) {
            VB->keys.push_back("deg" + std::to_string(d) + " ker" + std::to_string(idx++));
            VB->degrees.push_back(d - 1);
            ab.acyclic.push_back(false);
            dd.cols.push_back(std::move(v));
        }
        idx = 0;
        for (auto& v : imP) {
            VB->keys.push_back("deg" + std::to_string(d) + " im" + std::to_string(idx++));
            VB->degrees.push_back(d - 1);
            ab.acyclic.push_back(true);
            dd.cols.push_back(std::move(v));
        }
        if (static_cast<int>(dd.cols.size()) != n)
            throw error("adapt_contraction: splitting does not span at degree " +
                        std::to_string(d));
        dd.to_letters = inverse(from_columns(n, dd.cols));
        degdata[d] = std::move(dd);
    }

    auto degdata_ptr = std::make_shared<std::map<int, DegData>>(std::move(degdata));
    auto& degdata_ref = *degdata_ptr;
    auto coords = [degdata_ptr](int d, const std::vector<Rational>& v) -> VecSum {
        VecSum out;
        auto it = degdata_ptr->find(d);
        if (it == degdata_ptr->end()) {
            for (const auto& x : v)
                if (!x.is_zero())
                    throw error("adapt_contraction: element in empty degree");
            return out;
        }
        auto y = it->second.to_letters.apply(v);
        for (int t = 0; t < static_cast<int>(y.size()); ++t)
            vsum_add(out, it->second.first_letter + t, y[t]);
        return out;
    };
    ab.vector_to_letters = coords;
    ab.letter_complex_degree.resize(VB->size());
    ab.letter_vector.resize(VB->size());
    for (const auto& [d, dd] : degdata_ref)
        for (int t = 0; t < static_cast<int>(dd.cols.size()); ++t) {
            ab.letter_complex_degree[dd.first_letter + t] = d;
            ab.letter_vector[dd.first_letter + t] = dd.cols[t];
        }
    auto matcol = [&](const DegMap& f, int d, int rows, const std::vector<Rational>& v) {
        const SparseMatrix* m = f.at(d);
        if (!m)
            return std::vector<Rational>(rows);
        return m->apply(v);
    };

    ab.UB = UB;
    ab.VB = VB;
    ab.i1.resize(UB->size());
    ab.bU1.resize(UB->size());
    for (const auto& [key, letter] : u_letter) {
        auto [d, t] = key;
        std::vector<Rational> e(U.dim(d));
        e[t] = Rational(1);
        ab.i1[letter] = coords(d, matcol(c.i, d, V.dim(d), e));
        std::vector<Rational> bu = matcol(U.diff_map(), d, U.dim(d + 1), e);
        VecSum bus;
        for (int s = 0; s < static_cast<int>(bu.size()); ++s)
            if (!bu[s].is_zero())
                vsum_add(bus, u_letter.at({d + 1, s}), bu[s]);
        ab.bU1[letter] = std::move(bus);
    }
    ab.p1.resize(VB->size());
    ab.h1.resize(VB->size());
    ab.b1.resize(VB->size());
    for (const auto& [d, dd] : degdata_ref) {
        for (int t = 0; t < static_cast<int>(dd.cols.size()); ++t) {
            int letter = dd.first_letter + t;
            const auto& v = dd.cols[t];
            // p
            std::vector<Rational> pv = matcol(c.p, d, U.dim(d), v);
            VecSum ps;
            for (int s = 0; s < static_cast<int>(pv.size()); ++s)
                if (!pv[s].is_zero())
                    vsum_add(ps, u_letter.at({d, s}), pv[s]);
            ab.p1[letter] = std::move(ps);
            // h and b in adapted coordinates
            ab.h1[letter] = coords(d - 1, matcol(c.h, d, V.dim(d - 1), v));
            ab.b1[letter] = coords(d + 1, matcol(V.diff_map(), d, V.dim(d + 1), v));
        }
    }
    return ab;
}

WordSum beta_map(const GradedBasis& B, const std::vector<bool>& acyclic, const WordSum& x) {
    (void)B;
    WordSum out;
    for (const auto& [w, c] : x) {
        int l = 0;
        for (int i : w)
            if (acyclic[i])
                ++l;
        if (l == 0)
            continue;
        wsum_add(out, w, c / Rational(l));
    }
    return out;
}

WordSum eta_map(const AdaptedBasis& ab, const WordSum& x) {
    const GradedBasis& B = *ab.VB;
    WordSum scaled = beta_map(B, ab.acyclic, x);
    WordSum out;
    for (const auto& [w, c] : scaled) {
        // h-bar: apply h to each position, Koszul sign for moving the odd h
        // past the preceding letters
        int parity = 0;
        for (size_t t = 0; t < w.size(); ++t) {
            const VecSum& hv = ab.h1[w[t]];
            if (!hv.empty()) {
                int sgn = (parity % 2) ? -1 : 1;
                for (const auto& [letter, hc] : hv) {
                    std::vector<int> seq;
                    for (size_t s = 0; s < w.size(); ++s)
                        seq.push_back(s == t ? letter : w[s]);
                    Canon cn = canonicalize(B, seq);
                    if (cn.zero)
                        continue;
                    wsum_add(out, cn.word, Rational(sgn * cn.sign) * c * hc);
                }
            }
            if (B.odd(w[t]))
                ++parity;
        }
    }
    return out;
}

LinftyTransfer::LinftyTransfer(AdaptedBasis ab, std::shared_ptr<const TaylorEval> Dprime)
    : ab_(std::move(ab)), Dp_(std::move(Dprime)) {
    if (Dp_ && Dp_->min_arity() < 2)
        throw error("LinftyTransfer: the perturbation must have arity >= 2");
}

WordSum LinftyTransfer::lift(const SymWord& w) const {
    WordSum out;
    std::vector<int> seq(w.size());
    std::function<void(size_t, Rational)> expand = [&](size_t idx, Rational coef) {
        if (idx == w.size()) {
            Canon cn = canonicalize(*ab_.VB, seq);
            if (cn.zero)
                return;
            wsum_add(out, cn.word, Rational(cn.sign) * coef);
            return;
        }
        for (const auto& [letter, c] : ab_.i1[w[idx]]) {
            seq[idx] = letter;
            expand(idx + 1, coef * c);
        }
    };
    expand(0, Rational(1));
    return out;
}

namespace {

VecSum pr1(const WordSum& x) {
    VecSum out;
    for (const auto& [w, c] : x)
        if (w.size() == 1)
            vsum_add(out, w[0], c);
    return out;
}

VecSum project_p(const AdaptedBasis& ab, const VecSum& v) {
    VecSum out;
    for (const auto& [i, c] : v)
        for (const auto& [u, x] : ab.p1[i])
            vsum_add(out, u, c * x);
    return out;
}

}  // namespace

VecSum LinftyTransfer::d(const SymWord& w) const {
    WordSum u = lift(w);
    VecSum acc;
    int guard = static_cast<int>(w.size()) + 2;
    while (!u.empty()) {
        if (--guard < 0)
            throw error("LinftyTransfer: series did not terminate");
        WordSum v = coderivation_apply(*ab_.VB, *Dp_, u);
        for (const auto& [i, c] : pr1(v))
            for (const auto& [t, x] : ab_.p1[i])
                vsum_add(acc, t, c * x);
        u = wsum_scale(Rational(-1), eta_map(ab_, v));
    }
    return acc;
}

VecSum LinftyTransfer::phi(const SymWord& w) const {
    WordSum u = lift(w);
    VecSum acc = pr1(u);
    int guard = static_cast<int>(w.size()) + 2;
    while (!u.empty()) {
        if (--guard < 0)
            throw error("LinftyTransfer: series did not terminate");
        WordSum v = coderivation_apply(*ab_.VB, *Dp_, u);
        u = wsum_scale(Rational(-1), eta_map(ab_, v));
        for (const auto& [i, c] : pr1(u))
            vsum_add(acc, i, c);
    }
    return acc;
}

VecSum LinftyTransfer::psi(const SymWord& w) const {
    WordSum u;
    u[w] = Rational(1);
    VecSum acc = project_p(ab_, pr1(u));
    int guard = static_cast<int>(w.size()) + 2;
    while (!u.empty()) {
        if (--guard < 0)
            throw error("LinftyTransfer: series did not terminate");
        u = wsum_scale(Rational(-1), coderivation_apply(*ab_.VB, *Dp_, eta_map(ab_, u)));
        for (const auto& [i, c] : project_p(ab_, pr1(u)))
            vsum_add(acc, i, c);
    }
    return acc;
}

TaylorMap LinftyTransfer::materialize_d(int max_arity) const {
    TaylorMap out(ab_.UB, ab_.UB, 1);
    for (int r = 2; r <= max_arity; ++r)
        for (const auto& w : words_of_weight(*ab_.UB, r))
            out.set(w, d(w));
    return out;
}

TaylorMap LinftyTransfer::materialize_phi(int max_arity) const {
    TaylorMap out(ab_.UB, ab_.VB, 0);
    for (int r = 1; r <= max_arity; ++r)
        for (const auto& w : words_of_weight(*ab_.UB, r))
            out.set(w, phi(w));
    return out;
}

TaylorMap LinftyTransfer::materialize_d(int max_arity, const std::vector<int>& letters) const {
    TaylorMap out(ab_.UB, ab_.UB, 1);
    for (int r = 2; r <= max_arity; ++r)
        for (const auto& w : words_of_weight_over(*ab_.UB, r, letters))
            out.set(w, d(w));
    return out;
}

TaylorMap LinftyTransfer::materialize_phi(int max_arity, const std::vector<int>& letters) const {
    TaylorMap out(ab_.UB, ab_.VB, 0);
    for (int r = 1; r <= max_arity; ++r)
        for (const auto& w : words_of_weight_over(*ab_.UB, r, letters))
            out.set(w, phi(w));
    return out;
}

std::shared_ptr<TaylorEval> LinftyTransfer::d_eval(int max_arity) const {
    return std::make_shared<LambdaTaylor>(1, 2, max_arity,
                                          [this](const SymWord& w) { return d(w); });
}

std::shared_ptr<TaylorEval> LinftyTransfer::phi_eval(int max_arity) const {
    return std::make_shared<LambdaTaylor>(0, 1, max_arity,
                                          [this](const SymWord& w) { return phi(w); });
}

}  // namespace forma
