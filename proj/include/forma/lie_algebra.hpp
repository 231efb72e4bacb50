// Lie algebra data: structure constants, Jacobi validation, bilinear forms.
#pragma once

#include "forma/rational.hpp"
#include "forma/sparse_matrix.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace forma {

/// Finite-dimensional Lie algebra given by structure constants
/// c^i_{jk} = eps^i([e_j, e_k]), stored for j < k; antisymmetry is implicit.
class LieAlgebra {
public:
    explicit LieAlgebra(int dim) : dim_(dim) {}

    int dim() const { return dim_; }

    /// Sets c^i_{jk} for j != k (the j > k entry is derived by antisymmetry).
    void set_c(int i, int j, int k, const Rational& v);
    Rational c(int i, int j, int k) const;

    /// [e_j, e_k] as a coefficient vector in the basis.
    std::vector<Rational> bracket(int j, int k) const;

    /// Matrix of ad_{e_j} acting on the basis.
    SparseMatrix ad(int j) const;

    std::vector<std::string> names;  // optional basis labels

private:
    int dim_;
    std::map<std::array<int, 3>, Rational> c_;  // {i,j,k} with j < k
};

struct JacobiReport {
    bool ok = true;
    std::array<int, 3> violating_triple{-1, -1, -1};
};

/// Pass iff the cyclic Jacobi contraction vanishes on every basis triple.
JacobiReport check_jacobi(const LieAlgebra& L);

/// Symmetric bilinear form on the algebra; kappa when flagged quadratic.
class BilinearForm {
public:
    BilinearForm() = default;
    explicit BilinearForm(int dim) : mat_(dim, dim) {}
    explicit BilinearForm(SparseMatrix m);

    int dim() const { return mat_.rows(); }
    const Rational& at(int i, int j) const { return mat_.at(i, j); }
    void set(int i, int j, const Rational& v);
    const SparseMatrix& matrix() const { return mat_; }

    bool is_invariant(const LieAlgebra& L) const;
    bool is_nondegenerate() const;

    /// Invariant and nondegenerate.
    bool is_quadratic(const LieAlgebra& L) const;

private:
    SparseMatrix mat_;
};

BilinearForm killing_form(const LieAlgebra& L);

/// Components q^{ij} of the Casimir bivector: the inverse of kappa, so
/// sum_j kappa(xi, e_i) q^{ij} e_j = xi. Throws on singular kappa.
SparseMatrix casimir_components(const LieAlgebra& L, const BilinearForm& kappa);

/// Univariate polynomial in the abstract Casimir variable q.
class CasimirPolynomial {
public:
    CasimirPolynomial() = default;
    explicit CasimirPolynomial(std::vector<Rational> coeffs);
    static CasimirPolynomial q_power(int a);

    int degree() const;
    const Rational& coeff(int a) const;
    CasimirPolynomial derivative() const;

    friend CasimirPolynomial operator*(const CasimirPolynomial& a, const CasimirPolynomial& b);
    friend CasimirPolynomial operator-(const CasimirPolynomial& a, const CasimirPolynomial& b);
    friend bool operator==(const CasimirPolynomial& a, const CasimirPolynomial& b);

private:
    std::vector<Rational> coeffs_;  // coeffs_[a] * q^a
};

struct RegularityReport {
    bool regular = false;
    // When not regular: a derivation D with kappa-symmetric part the identity.
    std::optional<SparseMatrix> witness;
    // Rank data of the infeasible linear system, the certificate when regular.
    int system_rank = 0;
    int system_cols = 0;
};

/// Cartan-3-regularity: no derivation has kappa-symmetric part a nonzero
/// multiple of the identity. The search is scale-normalized to symmetric
/// part exactly the identity. Throws on singular kappa.
RegularityReport cartan_3_regular(const LieAlgebra& L, const BilinearForm& kappa);

/// The obstruction-side variant: a derivation with kappa-symmetric part 2*id,
/// the finite check behind the D(q) = 4q argument. Infeasible iff regular.
RegularityReport derivation_scaling_check(const LieAlgebra& L, const BilinearForm& kappa);

// Built-in registry: abelian(n), heisenberg3, so3, affine(m) = gl(m) |x K^m.
LieAlgebra abelian(int n);
LieAlgebra heisenberg3();
LieAlgebra so3();
LieAlgebra affine(int m);

/// Resolves "abelian", "abelian(n)", "heisenberg3", "so3", "affine(m)".
LieAlgebra builtin_algebra(const std::string& name);

/// Loads the JSON input schema: {"dim": n, "brackets": [{"i":,"j":,"out":
/// {"1": "p/q", ...}}], "kappa": [[...]]}. 1-based indices; antisymmetric
/// completion on load; duplicate (i,j) pairs rejected.
struct AlgebraInput {
    LieAlgebra algebra;
    std::optional<BilinearForm> kappa;
};
AlgebraInput load_algebra_json(const std::string& text);

}  // namespace forma
