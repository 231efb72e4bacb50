#include "forma/freelie.hpp"

#include <algorithm>
#include <functional>

namespace forma {

void TensorPoly::add_term(const Word& w, const Rational& c) {
    if (c.is_zero())
        return;
    if (static_cast<int>(w.size()) > tmax_)
        throw truncation_error("TensorPoly: word length exceeds tmax");
    for (int x : w)
        if (x < 0 || x >= n_)
            throw error("TensorPoly: letter out of range");
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_[w] = c;
    } else {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

Rational TensorPoly::counit() const {
    auto it = terms_.find({});
    return it == terms_.end() ? Rational() : it->second;
}

TensorPoly& TensorPoly::operator+=(const TensorPoly& o) {
    for (const auto& [w, c] : o.terms_)
        add_term(w, c);
    return *this;
}

TensorPoly operator*(const Rational& s, const TensorPoly& a) {
    TensorPoly out(a.n_, a.tmax_);
    if (s.is_zero())
        return out;
    for (const auto& [w, c] : a.terms_)
        out.terms_[w] = s * c;
    return out;
}

TensorPoly operator*(const TensorPoly& a, const TensorPoly& b) {
    TensorPoly out(a.n_, std::max(a.tmax_, b.tmax_));
    for (const auto& [w1, c1] : a.terms_)
        for (const auto& [w2, c2] : b.terms_) {
            Word w = w1;
            w.insert(w.end(), w2.begin(), w2.end());
            out.add_term(w, c1 * c2);
        }
    return out;
}

TensorPoly operator-(const TensorPoly& a, const TensorPoly& b) {
    TensorPoly out = a;
    out += Rational(-1) * b;
    return out;
}

void FreeDeriv::add_term(int input, const Word& out, const Rational& c) {
    if (c.is_zero())
        return;
    if (input < 0 || input >= n_)
        throw error("FreeDeriv: input index out of range");
    if (static_cast<int>(out.size()) > tmax_)
        throw truncation_error("FreeDeriv: output word exceeds tmax");
    auto key = std::make_pair(input, out);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_[key] = c;
    } else {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

TensorPoly FreeDeriv::value_on(int input) const {
    TensorPoly out(n_, tmax_);
    for (const auto& [key, c] : terms_)
        if (key.first == input)
            out.add_term(key.second, c);
    return out;
}

int FreeDeriv::grade() const {
    if (terms_.empty())
        return -2;
    int g = static_cast<int>(terms_.begin()->first.second.size()) - 1;
    for (const auto& [key, c] : terms_)
        if (static_cast<int>(key.second.size()) - 1 != g)
            throw error("FreeDeriv: not grade-homogeneous");
    return g;
}

FreeDeriv& FreeDeriv::operator+=(const FreeDeriv& o) {
    for (const auto& [key, c] : o.terms_)
        add_term(key.first, key.second, c);
    return *this;
}

FreeDeriv operator*(const Rational& s, const FreeDeriv& a) {
    FreeDeriv out(a.n_, a.tmax_);
    if (s.is_zero())
        return out;
    for (const auto& [key, c] : a.terms_)
        out.terms_[key] = s * c;
    return out;
}

FreeDeriv operator-(const FreeDeriv& a, const FreeDeriv& b) {
    FreeDeriv out = a;
    out += Rational(-1) * b;
    return out;
}

TensorPoly deriv_extend(const FreeDeriv& psi, const TensorPoly& a) {
    TensorPoly out(a.generators(), std::max(a.tmax(), psi.tmax()));
    for (const auto& [w, c] : a.terms())
        for (size_t r = 0; r < w.size(); ++r)
            for (const auto& [key, d] : psi.terms()) {
                if (key.first != w[r])
                    continue;
                Word nw(w.begin(), w.begin() + r);
                nw.insert(nw.end(), key.second.begin(), key.second.end());
                nw.insert(nw.end(), w.begin() + r + 1, w.end());
                out.add_term(nw, c * d);
            }
    return out;
}

FreeDeriv d_bracket(const FreeDeriv& psi, const FreeDeriv& chi) {
    int n = psi.generators();
    FreeDeriv out(n, std::max(psi.tmax(), chi.tmax()));
    for (int j = 0; j < n; ++j) {
        TensorPoly v = deriv_extend(psi, chi.value_on(j)) - deriv_extend(chi, psi.value_on(j));
        for (const auto& [w, c] : v.terms())
            out.add_term(j, w, c);
    }
    return out;
}

FreeDeriv inner(const TensorPoly& x) {
    int n = x.generators();
    FreeDeriv out(n, x.tmax() + 1);
    for (int j = 0; j < n; ++j)
        for (const auto& [w, c] : x.terms()) {
            Word right = w;
            right.push_back(j);
            out.add_term(j, right, c);
            Word left;
            left.push_back(j);
            left.insert(left.end(), w.begin(), w.end());
            out.add_term(j, left, -c);
        }
    return out;
}

TensorPoly zeta(const TensorPoly& a) {
    TensorPoly out(a.generators(), a.tmax());
    for (const auto& [w, c] : a.terms()) {
        if (w.size() <= 1) {
            out.add_term(w, c);
            continue;
        }
        Word r(w.begin() + 1, w.end());
        r.push_back(w[0]);
        out.add_term(r, c);
    }
    return out;
}

TensorPoly first_factor_trace(const FreeDeriv& psi, int grade) {
    TensorPoly out(psi.generators(), psi.tmax());
    if (grade < 1)
        return out;
    for (const auto& [key, c] : psi.terms()) {
        const Word& w = key.second;
        if (static_cast<int>(w.size()) != grade + 1)
            continue;
        if (w[0] != key.first)
            continue;
        out.add_term(Word(w.begin() + 1, w.end()), c);
    }
    return out;
}

TensorPoly s_map(const FreeDeriv& psi) {
    TensorPoly out(psi.generators(), psi.tmax());
    int top = psi.tmax();
    for (int g = 1; g < top; ++g)
        out += first_factor_trace(psi, g);
    return out;
}

TensorPoly q_map(const FreeDeriv& psi) {
    int n = psi.generators();
    if (n < 2)
        throw error("q_map: needs at least two generators");
    TensorPoly out(n, psi.tmax());
    for (int g = 1; g < psi.tmax(); ++g) {
        TensorPoly s = first_factor_trace(psi, g);
        if (s.is_zero())
            continue;
        BigInt npow = 1;
        for (int t = 0; t < g; ++t)
            npow *= n;
        // sum_{r=0}^{g-1} N^(g-r-1) zeta^r (s)
        TensorPoly acc(n, psi.tmax());
        TensorPoly rot = s;
        BigInt coef = npow / n;  // N^(g-1)
        for (int r = 0; r < g; ++r) {
            acc += Rational(coef) * rot;
            rot = zeta(rot);
            if (coef != 1)
                coef /= n;
        }
        out += Rational(BigInt(-1), npow - 1) * acc;
    }
    return out;
}

std::pair<TensorPoly, FreeDeriv> reduced_bracket(const std::pair<TensorPoly, FreeDeriv>& a,
                                                 const std::pair<TensorPoly, FreeDeriv>& b) {
    return {deriv_extend(a.second, b.first) - deriv_extend(b.second, a.first),
            d_bracket(a.second, b.second)};
}

Rational sigma_general(const FreeDeriv& p1, const FreeDeriv& p2, const FreeDeriv& p3) {
    int total = 0;
    for (const FreeDeriv* p : {&p1, &p2, &p3}) {
        if (p->is_zero())
            return Rational();
        total += p->grade();
    }
    if (total != 0)
        return Rational();
    auto term = [](const FreeDeriv& x, const FreeDeriv& y, const FreeDeriv& z) {
        return deriv_extend(x, q_map(d_bracket(y, z))).counit();
    };
    Rational s = term(p1, p2, p3) + term(p2, p3, p1) + term(p3, p1, p2);
    return -s;
}

// Closed form for sigma(alpha, beta, psi) on the S-kernel,
//   1/(N-1) sum alpha_l beta_k (psi_j^{kjl} - psi_j^{ljk}),
// derived from the Q_1 = -S_1/(N-1) route; this is the normalization that
// agrees with sigma_general and with the transferred d_3.
Rational sigma_closed_form(const std::vector<Rational>& alpha, const std::vector<Rational>& beta,
                           const FreeDeriv& psi) {
    int n = psi.generators();
    if (n < 2)
        throw error("sigma_closed_form: needs at least two generators");
    Rational acc;
    for (const auto& [key, c] : psi.terms()) {
        const Word& w = key.second;
        if (w.size() != 3)
            continue;
        if (w[1] != key.first)
            continue;  // psi_j^{l j k} pattern
        acc -= alpha[w[0]] * beta[w[2]] * c;
        acc += alpha[w[2]] * beta[w[0]] * c;
    }
    return acc / Rational(n - 1);
}

FreeDeriv cohomology_bracket_free(const std::vector<Rational>& alpha, const FreeDeriv& psi) {
    int n = psi.generators();
    if (n < 2)
        throw error("cohomology_bracket_free: needs at least two generators");
    FreeDeriv out(n, psi.tmax());
    Rational corr = Rational(1) / Rational(n - 1);
    for (const auto& [key, c] : psi.terms()) {
        const Word& w = key.second;
        if (w.size() != 3)
            continue;
        int j = key.first;
        out.add_term(j, {w[1], w[2]}, alpha[w[0]] * c);
        out.add_term(j, {w[0], w[2]}, alpha[w[1]] * c);
        out.add_term(j, {w[0], w[1]}, alpha[w[2]] * c);
        if (w[1] == j)
            for (int jp = 0; jp < n; ++jp) {
                out.add_term(jp, {w[2], jp}, corr * alpha[w[0]] * c);
                out.add_term(jp, {jp, w[2]}, Rational(-1) * corr * alpha[w[0]] * c);
            }
    }
    return out;
}

FreeDeriv outer_project(const FreeDeriv& psi) {
    return psi - inner(q_map(psi));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Word> words_of_length(int n, int len) {
    std::vector<Word> out;
    if (len < 0)
        return out;
    Word cur(len, 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == len) {
            out.push_back(cur);
            return;
        }
        for (int x = 0; x < n; ++x) {
            cur[pos] = x;
            rec(pos + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace

FreeLieModel::FreeLieModel(int N, int tmax) : n_(N), tmax_(tmax) {
    if (N < 2)
        throw error("FreeLieModel: N must be >= 2");
    if (tmax < 2)
        throw error("FreeLieModel: tmax must be >= 2");

    // TV words up to length tmax-1, unit first, then by (length, lex)
    tv_words_.push_back({});
    for (int len = 1; len < tmax_; ++len)
        for (auto& w : words_of_length(n_, len))
            tv_words_.push_back(w);
    for (int t = 0; t < static_cast<int>(tv_words_.size()); ++t)
        tv_index_[tv_words_[t]] = t;

    // outder: ker S_n per grade, echelon order
    for (int g = -1; g < tmax_; ++g) {
        auto outs = words_of_length(n_, g + 1);
        int dim = n_ * static_cast<int>(outs.size());
        auto basis_index = [&](int j, int word_idx) {
            return j * static_cast<int>(outs.size()) + word_idx;
        };
        auto srcs = words_of_length(n_, g);  // S_n targets
        std::map<Word, int> src_index;
        for (int t = 0; t < static_cast<int>(srcs.size()); ++t)
            src_index[srcs[t]] = t;
        SparseMatrix S(g >= 1 ? static_cast<int>(srcs.size()) : 0, dim);
        if (g >= 1)
            for (int j = 0; j < n_; ++j)
                for (int wi = 0; wi < static_cast<int>(outs.size()); ++wi) {
                    const Word& w = outs[wi];
                    if (w[0] != j)
                        continue;
                    S.set(src_index.at(Word(w.begin() + 1, w.end())), basis_index(j, wi),
                          Rational(1));
                }
        auto kern = nullspace(S);
        std::vector<int> letters;
        std::vector<std::vector<Rational>> cols;
        for (const auto& v : kern) {
            FreeDeriv d(n_, tmax_);
            for (int j = 0; j < n_; ++j)
                for (int wi = 0; wi < static_cast<int>(outs.size()); ++wi)
                    d.add_term(j, outs[wi], v[basis_index(j, wi)]);
            letters.push_back(static_cast<int>(outder_.size()));
            outder_.push_back(std::move(d));
            outder_grade_.push_back(g);
            cols.push_back(v);
        }
        kernel_letters_[g] = std::move(letters);
        kernel_solver_[g] = from_columns(dim, cols);
    }

    // chain contraction
    {
        FiniteComplex G, H;
        std::vector<std::string> tvnames;
        for (const auto& w : tv_words_) {
            std::string s = "w:";
            for (int x : w)
                s += static_cast<char>('a' + x);
            tvnames.push_back(s);
        }
        std::vector<int> tvgrades;
        for (const auto& w : tv_words_)
            tvgrades.push_back(static_cast<int>(w.size()));
        G.set_basis(-1, tvnames, tvgrades);

        // der basis at degree 0: all (j, word length <= tmax), grade-major
        std::vector<std::pair<int, Word>> der_basis;
        std::vector<std::string> dernames;
        std::vector<int> dergrades;
        for (int g = -1; g < tmax_; ++g) {
            auto outs = words_of_length(n_, g + 1);
            for (int j = 0; j < n_; ++j)
                for (const auto& w : outs) {
                    der_basis.emplace_back(j, w);
                    std::string s = "d" + std::to_string(j) + ":";
                    for (int x : w)
                        s += static_cast<char>('a' + x);
                    dernames.push_back(s);
                    dergrades.push_back(g + 1);  // keep filtration grades nonnegative
                }
        }
        std::map<std::pair<int, Word>, int> der_index;
        for (int t = 0; t < static_cast<int>(der_basis.size()); ++t)
            der_index[der_basis[t]] = t;
        G.set_basis(0, dernames, dergrades);

        SparseMatrix B(static_cast<int>(der_basis.size()), static_cast<int>(tv_words_.size()));
        for (int t = 0; t < static_cast<int>(tv_words_.size()); ++t) {
            TensorPoly x(n_, tmax_ - 1);
            x.add_term(tv_words_[t], Rational(1));
            FreeDeriv bx = inner(x);
            for (const auto& [key, c] : bx.terms())
                B.set(der_index.at(key), t, c);
        }
        G.set_differential(-1, B);
        G.validate();

        H.set_basis(-1, {"unit"});
        std::vector<std::string> hnames;
        for (int i = 0; i < static_cast<int>(outder_.size()); ++i)
            hnames.push_back("outder#" + std::to_string(i));
        H.set_basis(0, hnames);
        H.set_differential(-1, SparseMatrix(static_cast<int>(hnames.size()), 1));

        Contraction c;
        c.U = H;
        c.V = G;
        c.i.shift = 0;
        c.p.shift = 0;
        c.h.shift = -1;
        SparseMatrix i_m(static_cast<int>(tv_words_.size()), 1);
        i_m.set(0, 0, Rational(1));
        c.i.mats[-1] = i_m;
        SparseMatrix i0(static_cast<int>(der_basis.size()), static_cast<int>(outder_.size()));
        for (int u = 0; u < static_cast<int>(outder_.size()); ++u)
            for (const auto& [key, v] : outder_[u].terms())
                i0.set(der_index.at(key), u, v);
        c.i.mats[0] = i0;

        SparseMatrix p_m(1, static_cast<int>(tv_words_.size()));
        p_m.set(0, 0, Rational(1));
        c.p.mats[-1] = p_m;
        SparseMatrix p0(static_cast<int>(outder_.size()), static_cast<int>(der_basis.size()));
        SparseMatrix h0(static_cast<int>(tv_words_.size()), static_cast<int>(der_basis.size()));
        for (int t = 0; t < static_cast<int>(der_basis.size()); ++t) {
            FreeDeriv d(n_, tmax_);
            d.add_term(der_basis[t].first, der_basis[t].second, Rational(1));
            TensorPoly qd = q_map(d);
            for (const auto& [w, v] : qd.terms())
                h0.set(tv_index_.at(w), t, v);
            FreeDeriv proj = d - inner(qd);
            for (const auto& [u, v] : outder_coords(proj))
                p0.set(u, t, v);
        }
        c.p.mats[0] = p0;
        c.h.mats[0] = h0;
        chain_ = std::move(c);
        auto rep = verify_contraction(chain_);
        if (!rep.ok)
            throw error("FreeLieModel: contraction failed verification: " + rep.first_violation);
    }

    // adapted coalgebra basis
    auto VB = std::make_shared<GradedBasis>();
    auto UB = std::make_shared<GradedBasis>();
    UB->keys.push_back("unit");
    UB->degrees.push_back(-2);
    for (int i = 0; i < static_cast<int>(outder_.size()); ++i) {
        UB->keys.push_back("outder#" + std::to_string(i));
        UB->degrees.push_back(-1);
    }
    vb_tv_first_ = 0;
    for (int t = 0; t < static_cast<int>(tv_words_.size()); ++t) {
        VB->keys.push_back("tv#" + std::to_string(t));
        VB->degrees.push_back(-2);
    }
    vb_outer_first_ = VB->size();
    for (int i = 0; i < static_cast<int>(outder_.size()); ++i) {
        VB->keys.push_back("outder#" + std::to_string(i));
        VB->degrees.push_back(-1);
    }
    vb_inner_first_ = VB->size();
    for (int t = 1; t < static_cast<int>(tv_words_.size()); ++t) {
        VB->keys.push_back("inner#" + std::to_string(t));
        VB->degrees.push_back(-1);
    }
    ab_.UB = UB;
    ab_.VB = VB;
    ab_.acyclic.assign(VB->size(), false);
    ab_.i1.resize(UB->size());
    ab_.p1.assign(VB->size(), {});
    ab_.h1.assign(VB->size(), {});
    ab_.b1.assign(VB->size(), {});
    ab_.bU1.assign(UB->size(), {});
    ab_.i1[0] = VecSum{{vb_tv_first_, Rational(1)}};
    ab_.p1[vb_tv_first_] = VecSum{{0, Rational(1)}};
    for (int i = 0; i < static_cast<int>(outder_.size()); ++i) {
        ab_.i1[1 + i] = VecSum{{vb_outer_first_ + i, Rational(1)}};
        ab_.p1[vb_outer_first_ + i] = VecSum{{1 + i, Rational(1)}};
    }
    for (int t = 1; t < static_cast<int>(tv_words_.size()); ++t) {
        ab_.acyclic[vb_tv_first_ + t] = true;
        ab_.acyclic[vb_inner_first_ + t - 1] = true;
        ab_.b1[vb_tv_first_ + t] = VecSum{{vb_inner_first_ + t - 1, Rational(1)}};
        ab_.h1[vb_inner_first_ + t - 1] = VecSum{{vb_tv_first_ + t, Rational(1)}};
    }
}

VecSum FreeLieModel::outder_coords(const FreeDeriv& psi) const {
    VecSum out;
    if (psi.is_zero())
        return out;
    // split by grade
    std::map<int, FreeDeriv> parts;
    for (const auto& [key, c] : psi.terms()) {
        int g = static_cast<int>(key.second.size()) - 1;
        auto it = parts.find(g);
        if (it == parts.end())
            it = parts.emplace(g, FreeDeriv(n_, tmax_)).first;
        it->second.add_term(key.first, key.second, c);
    }
    for (const auto& [g, part] : parts) {
        auto solver = kernel_solver_.find(g);
        if (solver == kernel_solver_.end())
            throw truncation_error("outder_coords: grade outside the model");
        auto outs = words_of_length(n_, g + 1);
        std::map<Word, int> wi;
        for (int t = 0; t < static_cast<int>(outs.size()); ++t)
            wi[outs[t]] = t;
        std::vector<Rational> v(n_ * outs.size());
        for (const auto& [key, c] : part.terms())
            v[key.first * outs.size() + wi.at(key.second)] = c;
        auto x = solve(solver->second, v);
        if (!x)
            throw error("outder_coords: element is not in the S-kernel");
        const auto& letters = kernel_letters_.at(g);
        for (int t = 0; t < static_cast<int>(letters.size()); ++t)
            vsum_add(out, letters[t], (*x)[t]);
    }
    return out;
}

VecSum FreeLieModel::outder_bracket(int i, int j) const {
    return outder_coords(outer_project(d_bracket(outder_[i], outder_[j])));
}

Rational FreeLieModel::sigma(int i, int j, int k) const {
    return sigma_general(outder_[i], outder_[j], outder_[k]);
}

VecSum FreeLieModel::decompose_tv(const TensorPoly& x) const {
    VecSum out;
    for (const auto& [w, c] : x.terms()) {
        auto it = tv_index_.find(w);
        if (it == tv_index_.end())
            throw truncation_error("decompose_tv: word outside the model");
        vsum_add(out, vb_tv_first_ + it->second, c);
    }
    return out;
}

VecSum FreeLieModel::decompose_der(const FreeDeriv& psi) const {
    VecSum out;
    if (psi.is_zero())
        return out;
    TensorPoly q = q_map(psi);
    for (const auto& [w, c] : q.terms()) {
        auto it = tv_index_.find(w);
        if (it == tv_index_.end() || it->second == 0)
            throw truncation_error("decompose_der: inner part outside the model");
        vsum_add(out, vb_inner_first_ + it->second - 1, c);
    }
    FreeDeriv outer = psi - inner(q);
    for (const auto& [u, c] : outder_coords(outer))
        vsum_add(out, vb_outer_first_ + u, c);
    return out;
}

std::shared_ptr<DglaPackage> FreeLieModel::package(bool include_diff) const {
    auto self = this;
    auto to_pair = [self](int letter) -> std::pair<TensorPoly, FreeDeriv> {
        TensorPoly x(self->n_, self->tmax_ - 1);
        FreeDeriv d(self->n_, self->tmax_);
        if (letter < self->vb_outer_first_) {
            x.add_term(self->tv_words_[letter - self->vb_tv_first_], Rational(1));
        } else if (letter < self->vb_inner_first_) {
            d = self->outder_[letter - self->vb_outer_first_];
        } else {
            TensorPoly w(self->n_, self->tmax_ - 1);
            w.add_term(self->tv_words_[letter - self->vb_inner_first_ + 1], Rational(1));
            d = inner(w);
        }
        return {std::move(x), std::move(d)};
    };
    auto diff = [self](int letter) -> VecSum { return self->ab_.b1[letter]; };
    auto bracket = [self, to_pair](int i, int j) -> VecSum {
        auto br = reduced_bracket(to_pair(i), to_pair(j));
        VecSum out = self->decompose_der(br.second);
        for (const auto& [u, c] : self->decompose_tv(br.first))
            vsum_add(out, u, c);
        return out;
    };
    return std::make_shared<DglaPackage>(ab_.VB, diff, bracket, include_diff, true);
}

SigmaCertificate FreeLieModel::sigma_nonexact(
    const std::optional<std::function<Rational(int, int, int)>>& rhs_override) const {
    SigmaCertificate cert;
    int nd = outder_dim();

    // unknowns: theta components of tensor degree 0
    struct Unknown {
        int i, j;
        std::string key;
    };
    std::vector<Unknown> unknowns;
    std::map<std::pair<int, int>, int> unknown_index;
    for (int i = 0; i < nd; ++i)
        for (int j = i + 1; j < nd; ++j) {
            int gi = outder_grade_[i], gj = outder_grade_[j];
            if (gi + gj != 0)
                continue;
            unknown_index[{i, j}] = static_cast<int>(unknowns.size());
            unknowns.push_back(
                {i, j, "theta(#" + std::to_string(i) + ",#" + std::to_string(j) + ")"});
        }

    // cached cohomology brackets
    std::map<std::pair<int, int>, VecSum> bcache;
    auto hbracket = [&](int i, int j) -> const VecSum& {
        auto key = std::make_pair(i, j);
        auto it = bcache.find(key);
        if (it == bcache.end())
            it = bcache.emplace(key, outder_bracket(i, j)).first;
        return it->second;
    };

    // rows: canonical triples of total tensor degree 0
    std::vector<std::array<int, 3>> triples;
    for (int a = 0; a < nd; ++a)
        for (int b = a + 1; b < nd; ++b)
            for (int c = b + 1; c < nd; ++c)
                if (outder_grade_[a] + outder_grade_[b] + outder_grade_[c] == 0)
                    triples.push_back({a, b, c});

    SparseMatrix A(static_cast<int>(triples.size()), static_cast<int>(unknowns.size()));
    std::vector<Rational> rhs(triples.size());
    auto theta_row = [&](std::map<int, Rational>& row, const VecSum& x, int y,
                         const Rational& scale) {
        // theta(x, y) with antisymmetry and the tensor-degree-0 support
        for (const auto& [t, c] : x) {
            int i = std::min(t, y), j = std::max(t, y);
            if (i == j || outder_grade_[i] + outder_grade_[j] != 0)
                continue;
            auto it = unknown_index.find({i, j});
            if (it == unknown_index.end())
                continue;
            Rational v = scale * c;
            if (t > y)
                v = -v;
            row[it->second] += v;
        }
    };
    for (int r = 0; r < static_cast<int>(triples.size()); ++r) {
        auto [a, b, c] = triples[r];
        std::map<int, Rational> row;
        theta_row(row, hbracket(a, b), c, Rational(-1));
        theta_row(row, hbracket(a, c), b, Rational(1));
        theta_row(row, hbracket(b, c), a, Rational(-1));
        for (const auto& [u, v] : row)
            if (!v.is_zero())
                A.set(r, u, v);
        rhs[r] = rhs_override ? (*rhs_override)(a, b, c) : sigma(a, b, c);
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

    // the standard probe: sigma(eps^1, eps^2, e1 x e2 x e2 x eps^2)
    {
        FreeDeriv alpha(n_, tmax_), beta(n_, tmax_), psi(n_, tmax_);
        alpha.add_term(0, {}, Rational(1));
        beta.add_term(1, {}, Rational(1));
        psi.add_term(1, {0, 1, 1}, Rational(1));
        cert.probe = sigma_general(alpha, beta, psi);
    }
    return cert;
}

}  // namespace forma
