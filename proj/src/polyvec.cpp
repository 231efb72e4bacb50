#include "forma/polyvec.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace forma {

std::shared_ptr<const CEContext> CEContext::make(LieAlgebra L, int dmax) {
    if (dmax < 0)
        throw error("CEContext: dmax must be nonnegative");
    return std::shared_ptr<const CEContext>(new CEContext(std::move(L), dmax));
}

PolyVector PolyVector::term(Ctx ctx, const PVKey& key, const Rational& coef) {
    PolyVector f(std::move(ctx));
    f.add_term(key, coef);
    return f;
}

void PolyVector::add_term(const PVKey& key, const Rational& coef) {
    if (coef.is_zero())
        return;
    if (!ctx_)
        throw error("PolyVector: no ambient context");
    int n = ctx_->dim();
    if (static_cast<int>(key.exp.size()) != n)
        throw error("PolyVector: exponent vector length mismatch");
    int deg = 0;
    for (int e : key.exp) {
        if (e < 0)
            throw error("PolyVector: negative exponent");
        deg += e;
    }
    if (deg > ctx_->dmax())
        throw truncation_error("PolyVector: polynomial degree exceeds dmax");
    for (size_t i = 0; i < key.form.size(); ++i) {
        if (key.form[i] < 0 || key.form[i] >= n)
            throw error("PolyVector: form index out of range");
        if (i + 1 < key.form.size() && key.form[i] >= key.form[i + 1])
            throw error("PolyVector: form tuple not strictly increasing");
    }
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_[key] = coef;
    } else {
        it->second += coef;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

int PolyVector::form_degree() const {
    if (terms_.empty())
        return -1;
    int k = static_cast<int>(terms_.begin()->first.form.size());
    for (const auto& [key, c] : terms_)
        if (static_cast<int>(key.form.size()) != k)
            throw error("PolyVector: not form-homogeneous");
    return k;
}

int PolyVector::poly_degree() const {
    if (terms_.empty())
        return -1;
    auto deg = [](const PVKey& k) { return std::accumulate(k.exp.begin(), k.exp.end(), 0); };
    int m = deg(terms_.begin()->first);
    for (const auto& [key, c] : terms_)
        if (deg(key) != m)
            throw error("PolyVector: not poly-homogeneous");
    return m;
}

bool PolyVector::is_form_homogeneous() const {
    if (terms_.empty())
        return true;
    size_t k = terms_.begin()->first.form.size();
    for (const auto& [key, c] : terms_)
        if (key.form.size() != k)
            return false;
    return true;
}

PolyVector& PolyVector::operator+=(const PolyVector& o) {
    if (!ctx_)
        ctx_ = o.ctx_;
    else if (o.ctx_ && o.ctx_ != ctx_)
        throw error("PolyVector: ambient mismatch");
    for (const auto& [key, c] : o.terms_)
        add_term(key, c);
    return *this;
}

PolyVector& PolyVector::operator-=(const PolyVector& o) {
    return *this += Rational(-1) * o;
}

PolyVector operator*(const Rational& s, const PolyVector& a) {
    PolyVector out(a.ctx_);
    if (s.is_zero())
        return out;
    for (const auto& [key, c] : a.terms_)
        out.terms_[key] = s * c;
    return out;
}

std::string PolyVector::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (size_t i = 0; i < key.exp.size(); ++i)
            if (key.exp[i] > 0) {
                os << "*e" << i + 1;
                if (key.exp[i] > 1)
                    os << "^" << key.exp[i];
            }
        for (size_t i = 0; i < key.form.size(); ++i)
            os << (i == 0 ? "*eps" : "^eps") << key.form[i] + 1;
    }
    return os.str();
}

namespace {

// Merge two increasing tuples; 0 on a common index, else the Koszul sign of
// sorting the concatenation.
bool merge_tuples(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out,
                  int& sign) {
    out.clear();
    sign = 1;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j])
            return false;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining a-letters
            if ((a.size() - i) % 2)
                sign = -sign;
            out.push_back(b[j++]);
        }
    }
    while (i < a.size())
        out.push_back(a[i++]);
    while (j < b.size())
        out.push_back(b[j++]);
    return true;
}

void require_same_ctx(const PolyVector& f, const PolyVector& g) {
    if (f.ctx() && g.ctx() && f.ctx() != g.ctx())
        throw error("PolyVector: ambient mismatch");
}

}  // namespace

PolyVector wedge(const PolyVector& f, const PolyVector& g) {
    require_same_ctx(f, g);
    PolyVector out(f.ctx() ? f.ctx() : g.ctx());
    std::vector<int> merged;
    int sign;
    for (const auto& [ka, ca] : f.terms())
        for (const auto& [kb, cb] : g.terms()) {
            if (!merge_tuples(ka.form, kb.form, merged, sign))
                continue;
            PVKey key;
            key.exp.resize(ka.exp.size());
            for (size_t i = 0; i < ka.exp.size(); ++i)
                key.exp[i] = ka.exp[i] + kb.exp[i];
            key.form = merged;
            out.add_term(key, Rational(sign) * ca * cb);
        }
    return out;
}

PolyVector interior_vec(int i, const PolyVector& f) {
    PolyVector out(f.ctx());
    for (const auto& [key, c] : f.terms()) {
        size_t k = key.form.size();
        for (size_t r = 0; r < k; ++r)
            if (key.form[r] == i) {
                PVKey nk = key;
                nk.form.erase(nk.form.begin() + r);
                // Contraction counted from the right: slot r of a k-tuple
                // carries (-1)^(k-r) (1-based). The left-handed variant fails
                // the delta(alpha E) = alpha pi identity; see the tests.
                out.add_term(nk, ((k - 1 - r) % 2 ? Rational(-1) : Rational(1)) * c);
                break;
            }
    }
    return out;
}

PolyVector partial(int i, const PolyVector& f) {
    PolyVector out(f.ctx());
    for (const auto& [key, c] : f.terms()) {
        if (key.exp[i] == 0)
            continue;
        PVKey nk = key;
        nk.exp[i] -= 1;
        out.add_term(nk, Rational(key.exp[i]) * c);
    }
    return out;
}

namespace {

std::map<int, PolyVector> split_by_form(const PolyVector& f) {
    std::map<int, PolyVector> parts;
    for (const auto& [key, c] : f.terms()) {
        int k = static_cast<int>(key.form.size());
        auto it = parts.find(k);
        if (it == parts.end())
            it = parts.emplace(k, PolyVector(f.ctx())).first;
        it->second.add_term(key, c);
    }
    return parts;
}

PolyVector schouten_homogeneous(const PolyVector& f, const PolyVector& g, int kf, int kg) {
    int n = f.ctx() ? f.ctx()->dim() : g.ctx()->dim();
    PolyVector acc(f.ctx() ? f.ctx() : g.ctx());
    for (int i = 0; i < n; ++i)
        acc += wedge(interior_vec(i, f), partial(i, g));
    int e = (kf - 1) * (kg - 1);
    PolyVector acc2(acc.ctx());
    for (int i = 0; i < n; ++i)
        acc2 += wedge(interior_vec(i, g), partial(i, f));
    return (e % 2) ? acc + acc2 : acc - acc2;
}

}  // namespace

PolyVector schouten(const PolyVector& f, const PolyVector& g) {
    require_same_ctx(f, g);
    PolyVector out(f.ctx() ? f.ctx() : g.ctx());
    for (const auto& [kf, pf] : split_by_form(f))
        for (const auto& [kg, pg] : split_by_form(g))
            out += schouten_homogeneous(pf, pg, kf, kg);
    return out;
}

PolyVector ce_differential(const PolyVector& f) {
    if (!f.ctx())
        return f;
    return schouten(poisson_structure(f.ctx()), f);
}

PolyVector poisson_structure(Ctx ctx, bool require_jacobi) {
    if (require_jacobi && !check_jacobi(ctx->algebra()).ok)
        throw error("poisson_structure: Jacobi identity fails");
    const auto& L = ctx->algebra();
    int n = L.dim();
    PolyVector pi(ctx);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                Rational c = L.c(i, j, k);
                if (c.is_zero())
                    continue;
                PVKey key;
                key.exp.assign(n, 0);
                key.exp[i] = 1;
                key.form = {j, k};
                // the 1/2 against summing each unordered pair once
                pi.add_term(key, c);
            }
    return pi;
}

PolyVector euler_field(Ctx ctx) {
    int n = ctx->dim();
    PolyVector e(ctx);
    for (int i = 0; i < n; ++i) {
        PVKey key;
        key.exp.assign(n, 0);
        key.exp[i] = 1;
        key.form = {i};
        e.add_term(key, Rational(1));
    }
    return e;
}

PolyVector cartan_cocycle(Ctx ctx, const BilinearForm& kappa) {
    const auto& L = ctx->algebra();
    int n = L.dim();
    if (kappa.dim() != n)
        throw error("cartan_cocycle: kappa dimension mismatch");
    if (!kappa.is_invariant(L))
        throw error("cartan_cocycle: kappa not invariant");
    PolyVector omega(ctx);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Rational v;
                for (int m = 0; m < n; ++m)
                    v += kappa.at(i, m) * L.c(m, j, k);
                if (v.is_zero())
                    continue;
                PVKey key;
                key.exp.assign(n, 0);
                key.form = {i, j, k};
                omega.add_term(key, v);
            }
    return omega;
}

PolyVector casimir_polyvector(Ctx ctx, const BilinearForm& kappa) {
    int n = ctx->dim();
    SparseMatrix q = casimir_components(ctx->algebra(), kappa);
    PolyVector out(ctx);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Rational c = q.at(i, j);
            if (i != j)
                c += q.at(j, i);
            if (c.is_zero())
                continue;
            PVKey key;
            key.exp.assign(n, 0);
            key.exp[i] += 1;
            key.exp[j] += 1;
            key.form = {};
            out.add_term(key, c);
        }
    return out;
}

PolyVector embed_casimir(Ctx ctx, const BilinearForm& kappa, const CasimirPolynomial& alpha) {
    PolyVector q = casimir_polyvector(ctx, kappa);
    PolyVector out(ctx);
    PVKey unit;
    unit.exp.assign(ctx->dim(), 0);
    PolyVector power = PolyVector::term(ctx, unit, Rational(1));
    for (int a = 0;; ++a) {
        if (a > alpha.degree())
            break;
        out += alpha.coeff(a) * power;
        if (a < alpha.degree())
            power = wedge(power, q);
    }
    return out;
}

std::vector<PVKey> monomial_basis(const Ctx& ctx, int k, int m) {
    int n = ctx->dim();
    std::vector<std::vector<int>> exps;
    std::vector<int> cur(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == n - 1) {
            cur[pos] = left;
            exps.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[pos] = e;
            rec(pos + 1, left - e);
        }
    };
    if (n == 0) {
        if (m == 0)
            exps.push_back({});
    } else {
        rec(0, m);
    }
    std::vector<std::vector<int>> tuples;
    std::vector<int> t;
    std::function<void(int)> rect = [&](int start) {
        if (static_cast<int>(t.size()) == k) {
            tuples.push_back(t);
            return;
        }
        for (int i = start; i < n; ++i) {
            t.push_back(i);
            rect(i + 1);
            t.pop_back();
        }
    };
    rect(0);
    std::vector<PVKey> out;
    for (const auto& e : exps)
        for (const auto& f : tuples)
            out.push_back(PVKey{e, f});
    std::sort(out.begin(), out.end());
    return out;
}

bool CohomologyClass::is_zero() const {
    for (const auto& c : coords)
        if (!c.is_zero())
            return false;
    return true;
}

CohomologyTable::CohomologyTable(Ctx ctx) : ctx_(std::move(ctx)) {}

CohomologyTable::Bidegree& CohomologyTable::data(int k, int m) {
    auto it = table_.find({k, m});
    if (it != table_.end())
        return it->second;

    Bidegree bd;
    bd.basis = monomial_basis(ctx_, k, m);
    int dim_c = static_cast<int>(bd.basis.size());
    for (int i = 0; i < dim_c; ++i)
        bd.index[bd.basis[i]] = i;

    auto to_vec = [&](const PolyVector& f) {
        std::vector<Rational> v(bd.basis.size());
        for (const auto& [key, c] : f.terms()) {
            auto jt = bd.index.find(key);
            if (jt == bd.index.end())
                throw error("cohomology: element outside bidegree");
            v[jt->second] = c;
        }
        return v;
    };

    // Working echelon, fully reduced, used only to pick representatives;
    // projection later solves against the raw columns instead.
    std::map<int, std::vector<Rational>> echelon;
    auto insert = [&](std::vector<Rational> v) -> std::vector<Rational> {
        for (auto& [piv, row] : echelon) {
            if (v[piv].is_zero())
                continue;
            Rational f = v[piv];
            for (size_t i = 0; i < v.size(); ++i)
                v[i] -= f * row[i];
        }
        int piv = -1;
        for (int i = 0; i < static_cast<int>(v.size()); ++i)
            if (!v[i].is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0)
            return {};
        Rational inv = v[piv].inv();
        for (auto& x : v)
            x *= inv;
        for (auto& [p2, row] : echelon) {
            if (row[piv].is_zero())
                continue;
            Rational f = row[piv];
            for (size_t i = 0; i < v.size(); ++i)
                row[i] -= f * v[i];
        }
        auto res = v;
        echelon[piv] = std::move(v);
        return res;
    };

    // Coboundaries from bidegree (k-1, m): raw columns for projection, the
    // independent ones into the working echelon.
    std::vector<std::vector<Rational>> cob_cols;
    if (k > 0) {
        for (const auto& key : monomial_basis(ctx_, k - 1, m)) {
            PolyVector mono = PolyVector::term(ctx_, key, Rational(1));
            auto v = to_vec(ce_differential(mono));
            bool zero = true;
            for (const auto& x : v)
                if (!x.is_zero()) {
                    zero = false;
                    break;
                }
            if (zero)
                continue;
            cob_cols.push_back(v);
            insert(std::move(v));
        }
    }
    // Cocycles: kernel of delta on this bidegree.
    auto up = monomial_basis(ctx_, k + 1, m);
    std::map<PVKey, int> up_index;
    for (int i = 0; i < static_cast<int>(up.size()); ++i)
        up_index[up[i]] = i;
    SparseMatrix D(static_cast<int>(up.size()), dim_c);
    for (int c = 0; c < dim_c; ++c) {
        PolyVector mono = PolyVector::term(ctx_, bd.basis[c], Rational(1));
        PolyVector dmono = ce_differential(mono);
        for (const auto& [key, v] : dmono.terms())
            D.set(up_index.at(key), c, v);
    }
    std::vector<std::vector<Rational>> rep_cols;
    for (const auto& z : nullspace(D)) {
        auto residual = insert(z);
        if (residual.empty())
            continue;
        PolyVector rep(ctx_);
        for (int i = 0; i < static_cast<int>(residual.size()); ++i)
            rep.add_term(bd.basis[i], residual[i]);
        bd.reps.push_back(std::move(rep));
        rep_cols.push_back(std::move(residual));
    }
    bd.n_cob = static_cast<int>(cob_cols.size());
    auto all_cols = std::move(cob_cols);
    for (auto& rc : rep_cols)
        all_cols.push_back(std::move(rc));
    bd.proj = from_columns(dim_c, all_cols);

    return table_.emplace(std::make_pair(k, m), std::move(bd)).first->second;
}

int CohomologyTable::dim(int k, int m) {
    return static_cast<int>(data(k, m).reps.size());
}

const std::vector<PolyVector>& CohomologyTable::representatives(int k, int m) {
    return data(k, m).reps;
}

CohomologyClass CohomologyTable::project(const PolyVector& f) {
    if (f.is_zero())
        return {0, 0, {}};
    if (!ce_differential(f).is_zero())
        throw error("cohomology project: input is not a cocycle");
    int k = f.form_degree();
    int m = f.poly_degree();
    auto& bd = data(k, m);
    std::vector<Rational> v(bd.basis.size());
    for (const auto& [key, c] : f.terms())
        v[bd.index.at(key)] = c;
    auto x = solve(bd.proj, v);
    if (!x)
        throw error("cohomology project: reduction left a residue");
    CohomologyClass cls{k, m, std::vector<Rational>(bd.reps.size())};
    for (size_t i = 0; i < bd.reps.size(); ++i)
        cls.coords[i] = (*x)[bd.n_cob + static_cast<int>(i)];
    return cls;
}

PolyVector CohomologyTable::lift(const CohomologyClass& cls) {
    PolyVector out(ctx_);
    if (cls.coords.empty())
        return out;
    auto& bd = data(cls.form, cls.poly);
    if (cls.coords.size() != bd.reps.size())
        throw error("cohomology lift: coordinate length mismatch");
    for (size_t i = 0; i < cls.coords.size(); ++i)
        out += cls.coords[i] * bd.reps[i];
    return out;
}

CohomologyClass cohomology_bracket(CohomologyTable& table, const CohomologyClass& a,
                                   const CohomologyClass& b) {
    PolyVector fa = table.lift(a);
    PolyVector fb = table.lift(b);
    return table.project(schouten(fa, fb));
}

}  // namespace forma
