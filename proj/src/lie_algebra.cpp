#include "forma/lie_algebra.hpp"

#include <json.hpp>

namespace forma {

void LieAlgebra::set_c(int i, int j, int k, const Rational& v) {
    if (i < 0 || i >= dim_ || j < 0 || j >= dim_ || k < 0 || k >= dim_)
        throw error("LieAlgebra::set_c: index out of range");
    if (j == k) {
        if (!v.is_zero())
            throw error("LieAlgebra::set_c: [e_j,e_j] must vanish");
        return;
    }
    std::array<int, 3> key{i, j, k};
    Rational val = v;
    if (j > k) {
        key = {i, k, j};
        val = -val;
    }
    if (val.is_zero())
        c_.erase(key);
    else
        c_[key] = val;
}

Rational LieAlgebra::c(int i, int j, int k) const {
    if (j == k)
        return Rational();
    std::array<int, 3> key = j < k ? std::array<int, 3>{i, j, k} : std::array<int, 3>{i, k, j};
    auto it = c_.find(key);
    if (it == c_.end())
        return Rational();
    return j < k ? it->second : -it->second;
}

std::vector<Rational> LieAlgebra::bracket(int j, int k) const {
    std::vector<Rational> out(dim_);
    for (int i = 0; i < dim_; ++i)
        out[i] = c(i, j, k);
    return out;
}

SparseMatrix LieAlgebra::ad(int j) const {
    SparseMatrix m(dim_, dim_);
    for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i)
            m.set(i, k, c(i, j, k));
    return m;
}

JacobiReport check_jacobi(const LieAlgebra& L) {
    int n = L.dim();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
                std::vector<Rational> acc(n);
                auto term = [&](int a, int b, int c0) {
                    for (int m = 0; m < n; ++m) {
                        Rational f = L.c(m, a, b);
                        if (f.is_zero())
                            continue;
                        for (int t = 0; t < n; ++t)
                            acc[t] += f * L.c(t, m, c0);
                    }
                };
                term(i, j, k);
                term(j, k, i);
                term(k, i, j);
                for (int t = 0; t < n; ++t)
                    if (!acc[t].is_zero())
                        return {false, {i, j, k}};
            }
    return {};
}

BilinearForm::BilinearForm(SparseMatrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols())
        throw error("BilinearForm: matrix not square");
    if (!(mat_ == mat_.transpose()))
        throw error("BilinearForm: matrix not symmetric");
}

void BilinearForm::set(int i, int j, const Rational& v) {
    mat_.set(i, j, v);
    mat_.set(j, i, v);
}

bool BilinearForm::is_invariant(const LieAlgebra& L) const {
    int n = L.dim();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                // kappa([e_a,e_b],e_c) - kappa(e_a,[e_b,e_c])
                Rational lhs, rhs;
                for (int m = 0; m < n; ++m) {
                    lhs += L.c(m, a, b) * at(m, c);
                    rhs += L.c(m, b, c) * at(a, m);
                }
                if (lhs != rhs)
                    return false;
            }
    return true;
}

bool BilinearForm::is_nondegenerate() const {
    return rank(mat_) == mat_.rows();
}

bool BilinearForm::is_quadratic(const LieAlgebra& L) const {
    return is_invariant(L) && is_nondegenerate();
}

BilinearForm killing_form(const LieAlgebra& L) {
    int n = L.dim();
    BilinearForm k(n);
    for (int i = 0; i < n; ++i) {
        SparseMatrix ai = L.ad(i);
        for (int j = i; j < n; ++j) {
            SparseMatrix prod = ai * L.ad(j);
            Rational tr;
            for (int t = 0; t < n; ++t)
                tr += prod.at(t, t);
            k.set(i, j, tr);
        }
    }
    return k;
}

SparseMatrix casimir_components(const LieAlgebra& L, const BilinearForm& kappa) {
    if (kappa.dim() != L.dim())
        throw error("casimir: kappa dimension mismatch");
    if (!kappa.is_nondegenerate())
        throw error("casimir: kappa singular");
    return inverse(kappa.matrix());
}

CasimirPolynomial::CasimirPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back().is_zero())
        coeffs_.pop_back();
}

CasimirPolynomial CasimirPolynomial::q_power(int a) {
    std::vector<Rational> c(a + 1);
    c[a] = Rational(1);
    return CasimirPolynomial(std::move(c));
}

int CasimirPolynomial::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

const Rational& CasimirPolynomial::coeff(int a) const {
    static const Rational zero;
    if (a < 0 || a >= static_cast<int>(coeffs_.size()))
        return zero;
    return coeffs_[a];
}

CasimirPolynomial CasimirPolynomial::derivative() const {
    if (coeffs_.size() <= 1)
        return CasimirPolynomial();
    std::vector<Rational> d(coeffs_.size() - 1);
    for (size_t a = 1; a < coeffs_.size(); ++a)
        d[a - 1] = Rational(static_cast<long long>(a)) * coeffs_[a];
    return CasimirPolynomial(std::move(d));
}

CasimirPolynomial operator*(const CasimirPolynomial& a, const CasimirPolynomial& b) {
    if (a.degree() < 0 || b.degree() < 0)
        return CasimirPolynomial();
    std::vector<Rational> c(a.degree() + b.degree() + 1);
    for (int i = 0; i <= a.degree(); ++i)
        for (int j = 0; j <= b.degree(); ++j)
            c[i + j] += a.coeff(i) * b.coeff(j);
    return CasimirPolynomial(std::move(c));
}

CasimirPolynomial operator-(const CasimirPolynomial& a, const CasimirPolynomial& b) {
    std::vector<Rational> c(static_cast<size_t>(std::max(a.degree(), b.degree()) + 1));
    for (int i = 0; i < static_cast<int>(c.size()); ++i)
        c[i] = a.coeff(i) - b.coeff(i);
    return CasimirPolynomial(std::move(c));
}

bool operator==(const CasimirPolynomial& a, const CasimirPolynomial& b) {
    int d = std::max(a.degree(), b.degree());
    for (int i = 0; i <= d; ++i)
        if (a.coeff(i) != b.coeff(i))
            return false;
    return true;
}

namespace {

// Derivation equations plus the kappa-symmetrization constraint
// kappa(D xi, xi') + kappa(xi, D xi') = 2*lambda*kappa(xi, xi'), as one linear
// system in the n^2 unknowns D_{ij} (D e_j = sum_i D_{ij} e_i).
RegularityReport scaled_derivation_search(const LieAlgebra& L, const BilinearForm& kappa,
                                          long long lambda) {
    if (!kappa.is_quadratic(L))
        throw error("cartan_3_regular: kappa is not invariant nondegenerate");
    int n = L.dim();
    auto unknown = [n](int i, int j) { return i * n + j; };

    std::vector<std::map<int, Rational>> eqs;
    std::vector<Rational> rhs;

    // D[e_a,e_b] = [D e_a, e_b] + [e_a, D e_b], componentwise in e_t.
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int t = 0; t < n; ++t) {
                std::map<int, Rational> row;
                auto add = [&](int u, const Rational& v) {
                    if (v.is_zero())
                        return;
                    row[u] += v;
                    if (row[u].is_zero())
                        row.erase(u);
                };
                for (int m = 0; m < n; ++m) {
                    add(unknown(t, m), Rational(-1) * L.c(m, a, b));  // -D_{tm} c^m_{ab}
                    add(unknown(m, a), L.c(t, m, b));                 // c^t_{mb} D_{ma}
                    add(unknown(m, b), L.c(t, a, m));                 // c^t_{am} D_{mb}
                }
                eqs.push_back(std::move(row));
                rhs.push_back(Rational());
            }
    // Symmetrization: sum_m (kappa_{ma} D_{mb} + kappa_{mb} D_{ma}) = 2 lambda kappa_{ab}.
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            std::map<int, Rational> row;
            for (int m = 0; m < n; ++m) {
                if (!kappa.at(m, a).is_zero())
                    row[unknown(m, b)] += kappa.at(m, a);
                if (!kappa.at(m, b).is_zero())
                    row[unknown(m, a)] += kappa.at(m, b);
            }
            for (auto it = row.begin(); it != row.end();)
                it = it->second.is_zero() ? row.erase(it) : std::next(it);
            eqs.push_back(std::move(row));
            rhs.push_back(Rational(2 * lambda) * kappa.at(a, b));
        }

    SparseMatrix M(static_cast<int>(eqs.size()), n * n);
    for (int r = 0; r < static_cast<int>(eqs.size()); ++r)
        for (const auto& [c, v] : eqs[r])
            M.set(r, c, v);

    RegularityReport rep;
    rep.system_cols = n * n;
    rep.system_rank = rank(M);
    auto sol = solve(M, rhs);
    if (sol) {
        SparseMatrix D(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                D.set(i, j, (*sol)[unknown(i, j)]);
        rep.regular = false;
        rep.witness = std::move(D);
    } else {
        rep.regular = true;
    }
    return rep;
}

}  // namespace

RegularityReport cartan_3_regular(const LieAlgebra& L, const BilinearForm& kappa) {
    return scaled_derivation_search(L, kappa, 1);
}

RegularityReport derivation_scaling_check(const LieAlgebra& L, const BilinearForm& kappa) {
    return scaled_derivation_search(L, kappa, 2);
}

LieAlgebra abelian(int n) {
    if (n < 0)
        throw error("abelian: negative dimension");
    return LieAlgebra(n);
}

LieAlgebra heisenberg3() {
    LieAlgebra L(3);
    L.names = {"x", "y", "z"};
    L.set_c(2, 0, 1, Rational(1));  // [x,y] = z
    return L;
}

LieAlgebra so3() {
    LieAlgebra L(3);
    L.names = {"e1", "e2", "e3"};
    L.set_c(2, 0, 1, Rational(1));  // [e1,e2] = e3
    L.set_c(0, 1, 2, Rational(1));  // [e2,e3] = e1
    L.set_c(1, 2, 0, Rational(1));  // [e3,e1] = e2
    return L;
}

LieAlgebra affine(int m) {
    if (m < 1)
        throw error("affine: dimension must be >= 1");
    // Basis: E_{ab} (a,b = 1..m) flattened row-major, then translations f_c.
    int n = m * m + m;
    LieAlgebra L(n);
    auto E = [m](int a, int b) { return a * m + b; };
    auto f = [m](int c) { return m * m + c; };
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            L.names.push_back("E" + std::to_string(a + 1) + std::to_string(b + 1));
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    if (E(a, b) >= E(c, d))
                        continue;
                    // [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
                    std::vector<Rational> out(n);
                    if (b == c)
                        out[E(a, d)] += Rational(1);
                    if (d == a)
                        out[E(c, b)] -= Rational(1);
                    for (int t = 0; t < n; ++t)
                        if (!out[t].is_zero())
                            L.set_c(t, E(a, b), E(c, d), out[t]);
                }
        }
    for (int c = 0; c < m; ++c)
        L.names.push_back("f" + std::to_string(c + 1));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                if (b == c)
                    L.set_c(f(a), E(a, b), f(c), Rational(1));  // [E_ab, f_b] = f_a
    return L;
}

LieAlgebra builtin_algebra(const std::string& name) {
    auto paren = name.find('(');
    std::string head = paren == std::string::npos ? name : name.substr(0, paren);
    int arg = 0;
    if (paren != std::string::npos) {
        auto close = name.find(')', paren);
        if (close == std::string::npos)
            throw error("builtin_algebra: malformed name " + name);
        arg = std::stoi(name.substr(paren + 1, close - paren - 1));
    }
    if (head == "abelian")
        return abelian(paren == std::string::npos ? 2 : arg);
    if (head == "heisenberg3")
        return heisenberg3();
    if (head == "so3")
        return so3();
    if (head == "affine")
        return affine(paren == std::string::npos ? 1 : arg);
    throw error("builtin_algebra: unknown builtin " + name);
}

AlgebraInput load_algebra_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("dim"))
        throw error("algebra json: missing dim");
    int n = j.at("dim").get<int>();
    LieAlgebra L(n);
    std::map<std::pair<int, int>, bool> seen;
    if (j.contains("brackets"))
        for (const auto& entry : j.at("brackets")) {
            int a = entry.at("i").get<int>() - 1;
            int b = entry.at("j").get<int>() - 1;
            if (a < 0 || a >= n || b < 0 || b >= n)
                throw error("algebra json: bracket index out of range");
            auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
            if (seen.count(key))
                throw error("algebra json: duplicate bracket entry");
            seen[key] = true;
            for (const auto& [is, coef] : entry.at("out").items()) {
                int i = std::stoi(is) - 1;
                if (i < 0 || i >= n)
                    throw error("algebra json: output index out of range");
                L.set_c(i, a, b, Rational::parse(coef.get<std::string>()));
            }
        }
    AlgebraInput input{std::move(L), std::nullopt};
    if (j.contains("kappa")) {
        BilinearForm k(n);
        const auto& rows = j.at("kappa");
        if (static_cast<int>(rows.size()) != n)
            throw error("algebra json: kappa shape mismatch");
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                k.set(a, b, Rational::parse(rows.at(a).at(b).get<std::string>()));
        input.kappa = std::move(k);
    }
    return input;
}

}  // namespace forma
