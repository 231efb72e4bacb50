#include "forma/chain_complex.hpp"

#include <algorithm>

namespace forma {

const SparseMatrix* DegMap::at(int d) const {
    auto it = mats.find(d);
    return it == mats.end() ? nullptr : &it->second;
}

void FiniteComplex::set_basis(int degree, std::vector<std::string> keys, std::vector<int> grades) {
    if (!grades.empty() && grades.size() != keys.size())
        throw error("FiniteComplex: grade list length mismatch");
    if (grades.empty())
        grades.assign(keys.size(), 0);
    for (int g : grades)
        if (g < 0)
            throw error("FiniteComplex: negative filtration grade");
    basis_[degree] = std::move(keys);
    grades_[degree] = std::move(grades);
}

void FiniteComplex::set_differential(int degree, SparseMatrix m) {
    diff_[degree] = std::move(m);
}

int FiniteComplex::dim(int degree) const {
    auto it = basis_.find(degree);
    return it == basis_.end() ? 0 : static_cast<int>(it->second.size());
}

const std::vector<std::string>& FiniteComplex::basis(int degree) const {
    static const std::vector<std::string> empty;
    auto it = basis_.find(degree);
    return it == basis_.end() ? empty : it->second;
}

const std::vector<int>& FiniteComplex::grades(int degree) const {
    static const std::vector<int> empty;
    auto it = grades_.find(degree);
    return it == grades_.end() ? empty : it->second;
}

bool FiniteComplex::has_degree(int degree) const { return basis_.count(degree) > 0; }

std::vector<int> FiniteComplex::degrees() const {
    std::vector<int> out;
    for (const auto& [d, b] : basis_)
        out.push_back(d);
    return out;
}

const SparseMatrix* FiniteComplex::differential(int degree) const {
    auto it = diff_.find(degree);
    return it == diff_.end() ? nullptr : &it->second;
}

DegMap FiniteComplex::diff_map() const {
    DegMap m;
    m.shift = 1;
    m.mats = diff_;
    return m;
}

int FiniteComplex::max_grade() const {
    int g = 0;
    for (const auto& [d, gs] : grades_)
        for (int x : gs)
            g = std::max(g, x);
    return g;
}

void FiniteComplex::validate() const {
    for (const auto& [d, m] : diff_) {
        if (m.cols() != dim(d) || m.rows() != dim(d + 1))
            throw error("FiniteComplex: differential shape mismatch at degree " +
                        std::to_string(d));
        const SparseMatrix* next = differential(d + 1);
        if (next && !((*next) * m).is_zero())
            throw error("FiniteComplex: b^2 != 0 at degree " + std::to_string(d));
    }
}

namespace {

SparseMatrix get_or_zero(const DegMap& f, int d, int rows, int cols) {
    const SparseMatrix* m = f.at(d);
    if (!m)
        return SparseMatrix(rows, cols);
    if (m->rows() != rows || m->cols() != cols)
        throw error("DegMap: shape mismatch at degree " + std::to_string(d));
    return *m;
}

std::vector<int> all_degrees(const FiniteComplex& U, const FiniteComplex& V) {
    std::vector<int> ds;
    for (int d : U.degrees())
        ds.push_back(d);
    for (int d : V.degrees())
        ds.push_back(d);
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    return ds;
}

}  // namespace

ContractionReport verify_contraction(const Contraction& c) {
    auto& U = c.U;
    auto& V = c.V;
    auto fail = [](const std::string& what) { return ContractionReport{false, what}; };
    for (int d : all_degrees(U, V)) {
        int ud = U.dim(d), ud1 = U.dim(d + 1);
        int vd = V.dim(d), vd1 = V.dim(d + 1), vdm = V.dim(d - 1);
        auto bU = get_or_zero(U.diff_map(), d, ud1, ud);
        auto bV = get_or_zero(V.diff_map(), d, vd1, vd);
        auto bVm = get_or_zero(V.diff_map(), d - 1, vd, vdm);
        auto id_ = get_or_zero(c.i, d, vd, ud);
        auto id1 = get_or_zero(c.i, d + 1, vd1, ud1);
        auto pd = get_or_zero(c.p, d, ud, vd);
        auto pd1 = get_or_zero(c.p, d + 1, ud1, vd1);
        auto hd = get_or_zero(c.h, d, vdm, vd);
        auto hd1 = get_or_zero(c.h, d + 1, vd, vd1);
        auto hdm = get_or_zero(c.h, d - 1, V.dim(d - 2), vdm);

        if (!(bV * id_ == id1 * bU))
            return fail("b_V i = i b_U at degree " + std::to_string(d));
        if (!(bU * pd == pd1 * bV))
            return fail("b_U p = p b_V at degree " + std::to_string(d));
        if (!(pd * id_ == SparseMatrix::identity(ud)))
            return fail("p i = id_U at degree " + std::to_string(d));
        auto lhs = SparseMatrix::identity(vd) - id_ * pd;
        if (!(lhs == bVm * hd + hd1 * bV))
            return fail("id - i p = [b,h] at degree " + std::to_string(d));
        if (!(hdm * hd).is_zero())
            return fail("h h = 0 at degree " + std::to_string(d));
        if (!(hd * id_).is_zero())
            return fail("h i = 0 at degree " + std::to_string(d));
        if (!(pd * hd1).is_zero())
            return fail("p h = 0 at degree " + std::to_string(d + 1));
    }
    return {};
}

Contraction contraction_from_injection(const FiniteComplex& U, const FiniteComplex& V,
                                       const DegMap& i) {
    U.validate();
    V.validate();
    // chain map and injectivity checks
    for (int d : all_degrees(U, V)) {
        auto bU = get_or_zero(U.diff_map(), d, U.dim(d + 1), U.dim(d));
        auto bV = get_or_zero(V.diff_map(), d, V.dim(d + 1), V.dim(d));
        auto id_ = get_or_zero(i, d, V.dim(d), U.dim(d));
        auto id1 = get_or_zero(i, d + 1, V.dim(d + 1), U.dim(d + 1));
        if (!(bV * id_ == id1 * bU))
            throw error("contraction_from_injection: i is not a chain map at degree " +
                        std::to_string(d));
        if (rank(id_) != U.dim(d))
            throw error("contraction_from_injection: i not injective at degree " +
                        std::to_string(d));
    }

    // Per degree, choose W complementing i(U) + b(V) by echelon pivots in
    // basis order; the acyclic part is W + b(W).
    std::map<int, std::vector<int>> W;  // degree -> unit indices
    for (int d : all_degrees(U, V)) {
        int vd = V.dim(d);
        std::map<int, std::vector<Rational>> ech;
        auto reduce_insert = [&](std::vector<Rational> v) -> bool {
            for (auto& [piv, row] : ech) {
                if (v[piv].is_zero())
                    continue;
                Rational f = v[piv];
                for (size_t t = 0; t < v.size(); ++t)
                    v[t] -= f * row[t];
            }
            int piv = -1;
            for (int t = 0; t < static_cast<int>(v.size()); ++t)
                if (!v[t].is_zero()) {
                    piv = t;
                    break;
                }
            if (piv < 0)
                return false;
            Rational inv = v[piv].inv();
            for (auto& x : v)
                x *= inv;
            ech[piv] = std::move(v);
            return true;
        };
        auto id_ = get_or_zero(i, d, vd, U.dim(d));
        for (int c = 0; c < id_.cols(); ++c) {
            std::vector<Rational> v(vd);
            for (int r = 0; r < vd; ++r)
                v[r] = id_.at(r, c);
            reduce_insert(std::move(v));
        }
        auto bVm = get_or_zero(V.diff_map(), d - 1, vd, V.dim(d - 1));
        for (int c = 0; c < bVm.cols(); ++c) {
            std::vector<Rational> v(vd);
            for (int r = 0; r < vd; ++r)
                v[r] = bVm.at(r, c);
            reduce_insert(std::move(v));
        }
        std::vector<int> picks;
        for (int u = 0; u < vd; ++u) {
            std::vector<Rational> e(vd);
            e[u] = Rational(1);
            if (reduce_insert(std::move(e)))
                picks.push_back(u);
        }
        W[d] = std::move(picks);
    }

    Contraction out;
    out.U = U;
    out.V = V;
    out.i = i;
    out.i.shift = 0;
    out.p.shift = 0;
    out.h.shift = -1;
    for (int d : all_degrees(U, V)) {
        int vd = V.dim(d), ud = U.dim(d), vdm = V.dim(d - 1);
        auto id_ = get_or_zero(i, d, vd, ud);
        auto bVm = get_or_zero(V.diff_map(), d - 1, vd, vdm);
        // columns: [ i(U) | b(W_{d-1}) | W_d ]
        std::vector<std::vector<Rational>> cols;
        for (int c = 0; c < ud; ++c) {
            std::vector<Rational> v(vd);
            for (int r = 0; r < vd; ++r)
                v[r] = id_.at(r, c);
            cols.push_back(std::move(v));
        }
        int nb = static_cast<int>(W[d - 1].size());
        for (int wc : W[d - 1]) {
            std::vector<Rational> v(vd);
            for (int r = 0; r < vd; ++r)
                v[r] = bVm.at(r, wc);
            cols.push_back(std::move(v));
        }
        for (int wc : W[d]) {
            std::vector<Rational> v(vd);
            v[wc] = Rational(1);
            cols.push_back(std::move(v));
        }
        if (static_cast<int>(cols.size()) != vd)
            throw error("contraction_from_injection: decomposition not spanning at degree " +
                        std::to_string(d) + " (is i a quasi-isomorphism?)");
        SparseMatrix M = from_columns(vd, cols);
        SparseMatrix Minv = inverse(M);  // throws if not a direct sum
        // p = U-coordinates
        SparseMatrix P(ud, vd);
        for (int r = 0; r < ud; ++r)
            for (int cc = 0; cc < vd; ++cc)
                P.set(r, cc, Minv.at(r, cc));
        out.p.mats[d] = std::move(P);
        // h = send the b(W) coordinate back to w in V_{d-1}
        SparseMatrix H(vdm, vd);
        for (int t = 0; t < nb; ++t) {
            int wunit = W[d - 1][t];
            for (int cc = 0; cc < vd; ++cc)
                H.set(wunit, cc, Minv.at(ud + t, cc));
        }
        out.h.mats[d] = std::move(H);
    }

    auto rep = verify_contraction(out);
    if (!rep.ok)
        throw error("contraction_from_injection: verification failed: " + rep.first_violation);
    return out;
}

namespace {

// f after g, degreewise: (f o g)[d] = f[d + g.shift] * g[d].
DegMap compose(const DegMap& f, const DegMap& g, const FiniteComplex& mid_dims,
               const FiniteComplex& src_dims, const FiniteComplex& dst_dims) {
    DegMap out;
    out.shift = f.shift + g.shift;
    for (int d : src_dims.degrees()) {
        auto gm = get_or_zero(g, d, mid_dims.dim(d + g.shift), src_dims.dim(d));
        auto fm = get_or_zero(f, d + g.shift, dst_dims.dim(d + out.shift),
                              mid_dims.dim(d + g.shift));
        SparseMatrix prod = fm * gm;
        if (!prod.is_zero())
            out.mats[d] = std::move(prod);
    }
    return out;
}

DegMap add(const DegMap& f, const DegMap& g, const FiniteComplex& src, const FiniteComplex& dst) {
    if (f.shift != g.shift)
        throw error("DegMap add: shift mismatch");
    DegMap out;
    out.shift = f.shift;
    for (int d : src.degrees()) {
        auto fm = get_or_zero(f, d, dst.dim(d + f.shift), src.dim(d));
        auto gm = get_or_zero(g, d, dst.dim(d + f.shift), src.dim(d));
        SparseMatrix s = fm + gm;
        if (!s.is_zero())
            out.mats[d] = std::move(s);
    }
    return out;
}

}  // namespace

DegMap force_side_conditions(const FiniteComplex& U, const FiniteComplex& V, const DegMap& i,
                             const DegMap& p, const DegMap& h_raw) {
    // preconditions: chain maps, p i = id, id - i p = [b, h_raw]
    DegMap b = V.diff_map();
    auto comp = [&](const DegMap& f, const DegMap& g) { return compose(f, g, V, V, V); };
    for (int d : all_degrees(U, V)) {
        int vd = V.dim(d);
        auto bU = get_or_zero(U.diff_map(), d, U.dim(d + 1), U.dim(d));
        auto bV = get_or_zero(b, d, V.dim(d + 1), vd);
        auto bVm = get_or_zero(b, d - 1, vd, V.dim(d - 1));
        auto id_ = get_or_zero(i, d, vd, U.dim(d));
        auto id1 = get_or_zero(i, d + 1, V.dim(d + 1), U.dim(d + 1));
        auto pd = get_or_zero(p, d, U.dim(d), vd);
        auto hd = get_or_zero(h_raw, d, V.dim(d - 1), vd);
        auto hd1 = get_or_zero(h_raw, d + 1, vd, V.dim(d + 1));
        if (!(bV * id_ == id1 * bU) || !(pd * id_ == SparseMatrix::identity(U.dim(d))))
            throw error("force_side_conditions: (i, p) preconditions fail at degree " +
                        std::to_string(d));
        if (!(SparseMatrix::identity(vd) - id_ * pd == bVm * hd + hd1 * bV))
            throw error("force_side_conditions: id - i p = [b,h] fails at degree " +
                        std::to_string(d));
    }
    DegMap P = add(comp(b, h_raw), comp(h_raw, b), V, V);
    DegMap out = comp(P, comp(h_raw, comp(b, comp(h_raw, comp(b, comp(h_raw, comp(b, comp(h_raw, P))))))));
    return out;
}

namespace {

// (id + A)^{-1} = sum (-A)^k for a degree-0 nilpotent A on V, degreewise.
DegMap geometric_inverse(const DegMap& A, const FiniteComplex& V, int cap) {
    if (A.shift != 0)
        throw error("geometric_inverse: map must have degree 0");
    DegMap out;
    out.shift = 0;
    for (int d : V.degrees()) {
        int n = V.dim(d);
        auto Ad = get_or_zero(A, d, n, n);
        SparseMatrix sum = SparseMatrix::identity(n);
        SparseMatrix pow = SparseMatrix::identity(n);
        int k = 0;
        while (true) {
            pow = Rational(-1) * (Ad * pow);
            if (pow.is_zero())
                break;
            if (++k > cap)
                throw error(
                    "perturb: geometric series did not terminate within the grade bound "
                    "(filtration-degree violation?)");
            sum = sum + pow;
        }
        out.mats[d] = std::move(sum);
    }
    return out;
}

}  // namespace

PerturbResult perturb(const Contraction& c, const DegMap& delta_V) {
    const FiniteComplex& U = c.U;
    const FiniteComplex& V = c.V;
    if (delta_V.shift != 1)
        throw error("perturb: delta_V must have degree +1");
    // (b_V + delta_V)^2 = 0
    DegMap bV = V.diff_map();
    DegMap bnew = add(bV, delta_V, V, V);
    for (int d : V.degrees()) {
        auto m1 = get_or_zero(bnew, d, V.dim(d + 1), V.dim(d));
        auto m2 = get_or_zero(bnew, d + 1, V.dim(d + 2), V.dim(d + 1));
        if (!(m2 * m1).is_zero())
            throw error("perturb: (b_V + delta_V)^2 != 0 at degree " + std::to_string(d));
    }

    int cap = V.max_grade() > 0 ? V.max_grade() + 1 : 0;
    if (cap == 0)
        for (int d : V.degrees())
            cap = std::max(cap, V.dim(d) + 1);

    auto comp_vvv = [&](const DegMap& f, const DegMap& g) { return compose(f, g, V, V, V); };
    DegMap h_delta = comp_vvv(c.h, delta_V);   // degree 0
    DegMap delta_h = comp_vvv(delta_V, c.h);   // degree 0
    DegMap Sh = geometric_inverse(h_delta, V, cap);
    DegMap Sd = geometric_inverse(delta_h, V, cap);

    PerturbResult out;
    out.contraction.U = U;
    out.contraction.V = V;
    out.contraction.i = compose(Sh, c.i, V, U, V);
    out.contraction.p = compose(c.p, Sd, V, V, U);
    out.contraction.h = compose(Sh, c.h, V, V, V);
    out.contraction.h.shift = -1;
    out.delta_U = compose(c.p, compose(Sd, compose(delta_V, c.i, V, U, V), V, U, V), V, U, U);
    out.delta_U.shift = 1;

    // install perturbed differentials
    for (int d : V.degrees()) {
        auto m = get_or_zero(bnew, d, V.dim(d + 1), V.dim(d));
        out.contraction.V.set_differential(d, m);
    }
    DegMap bU_new = add(U.diff_map(), out.delta_U, U, U);
    for (int d : U.degrees()) {
        auto m = get_or_zero(bU_new, d, U.dim(d + 1), U.dim(d));
        out.contraction.U.set_differential(d, m);
    }
    out.contraction.U.validate();  // (b_U + delta_U)^2 = 0

    auto rep = verify_contraction(out.contraction);
    if (!rep.ok)
        throw error("perturb: output fails verification: " + rep.first_violation);
    return out;
}

}  // namespace forma
