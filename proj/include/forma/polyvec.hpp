// Polynomial polyvector fields on g*: the Chevalley-Eilenberg complex
// ChE(g, Sym g) = Sym g (x) Lambda g*, with wedge, interior products, the
// Schouten bracket, the differential delta = [pi, .]_s, and per-bidegree
// cohomology over Q.
//
// Sign conventions, pinned once: the interior product iota_{e_i} removes the
// index j_r sitting in slot r of an increasing k-tuple with sign (-1)^(k-r),
// i.e. it contracts from the right; wedge sorts concatenated tuples counting
// transpositions; the Schouten bracket is
//   [F,G]_s = sum_i iota_{e_i}(F) ^ d^i G
//           - (-1)^((|F|-1)(|G|-1)) sum_i iota_{e_i}(G) ^ d^i F
// with |.| the form degree. The quadratic identity suite ([E,Omega] = -3
// Omega, delta(alpha E) = alpha pi, ...) acts as the sign oracle for these
// choices; see the polyvec tests.
#pragma once

#include "forma/lie_algebra.hpp"

#include <compare>
#include <map>
#include <memory>
#include <vector>

namespace forma {

/// Monomial key: exponent vector for the Sym factor and a strictly increasing
/// 0-based index tuple for the Lambda factor. Ordered exponent-lex, then
/// tuple-lex; this single order drives every echelon in the project.
struct PVKey {
    std::vector<int> exp;
    std::vector<int> form;
    auto operator<=>(const PVKey&) const = default;
};

/// Shared ambient for PolyVectors: the algebra plus the polynomial truncation
/// bound. Results exceeding dmax raise truncation_error, never drop terms.
class CEContext {
public:
    static std::shared_ptr<const CEContext> make(LieAlgebra L, int dmax);

    const LieAlgebra& algebra() const { return L_; }
    int dim() const { return L_.dim(); }
    int dmax() const { return dmax_; }

private:
    CEContext(LieAlgebra L, int dmax) : L_(std::move(L)), dmax_(dmax) {}
    LieAlgebra L_;
    int dmax_;
};

using Ctx = std::shared_ptr<const CEContext>;

class PolyVector {
public:
    PolyVector() = default;
    explicit PolyVector(Ctx ctx) : ctx_(std::move(ctx)) {}

    static PolyVector term(Ctx ctx, const PVKey& key, const Rational& coef);

    const Ctx& ctx() const { return ctx_; }
    const std::map<PVKey, Rational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    void add_term(const PVKey& key, const Rational& coef);

    /// Form degree when homogeneous; throws otherwise. Zero vector: -1.
    int form_degree() const;
    /// Polynomial degree when homogeneous; throws otherwise. Zero vector: -1.
    int poly_degree() const;
    bool is_form_homogeneous() const;

    PolyVector& operator+=(const PolyVector& o);
    PolyVector& operator-=(const PolyVector& o);
    friend PolyVector operator+(PolyVector a, const PolyVector& b) { return a += b; }
    friend PolyVector operator-(PolyVector a, const PolyVector& b) { return a -= b; }
    friend PolyVector operator*(const Rational& s, const PolyVector& a);
    friend bool operator==(const PolyVector& a, const PolyVector& b) {
        return a.terms_ == b.terms_;
    }

    std::string str() const;

private:
    Ctx ctx_;
    std::map<PVKey, Rational> terms_;
};

PolyVector wedge(const PolyVector& f, const PolyVector& g);
PolyVector interior_vec(int i, const PolyVector& f);
PolyVector partial(int i, const PolyVector& f);
PolyVector schouten(const PolyVector& f, const PolyVector& g);
PolyVector ce_differential(const PolyVector& f);

// Distinguished elements of the quadratic toolkit.
PolyVector poisson_structure(Ctx ctx, bool require_jacobi = true);
PolyVector euler_field(Ctx ctx);
PolyVector cartan_cocycle(Ctx ctx, const BilinearForm& kappa);
PolyVector casimir_polyvector(Ctx ctx, const BilinearForm& kappa);
/// alpha(q) as an element of Sym g, for alpha a polynomial in the Casimir.
PolyVector embed_casimir(Ctx ctx, const BilinearForm& kappa, const CasimirPolynomial& alpha);

/// Monomial basis of the bidegree (form k, poly m), in the global order.
std::vector<PVKey> monomial_basis(const Ctx& ctx, int k, int m);

/// Coordinates of a cohomology class in the deterministic representative
/// basis of one bidegree.
struct CohomologyClass {
    int form = 0;
    int poly = 0;
    std::vector<Rational> coords;
    bool is_zero() const;
};

/// Per-bidegree cohomology of (ChE(g, Sym g), delta), computed lazily: kernel
/// of delta modulo image, with echelon-pivot representatives in the global
/// monomial order.
class CohomologyTable {
public:
    explicit CohomologyTable(Ctx ctx);

    int dim(int k, int m);
    const std::vector<PolyVector>& representatives(int k, int m);

    /// Express a cocycle in representative coordinates. Throws if the input
    /// is not a cocycle of a single bidegree (zero input allowed).
    CohomologyClass project(const PolyVector& f);

    PolyVector lift(const CohomologyClass& cls);

    const Ctx& ctx() const { return ctx_; }

private:
    struct Bidegree {
        std::vector<PVKey> basis;
        std::map<PVKey, int> index;
        // Columns: raw coboundary images first, then the representatives.
        // Projection solves against this matrix; rep coordinates are unique
        // because the representatives are independent modulo the boundaries.
        SparseMatrix proj;
        int n_cob = 0;
        std::vector<PolyVector> reps;
    };
    Bidegree& data(int k, int m);

    Ctx ctx_;
    std::map<std::pair<int, int>, Bidegree> table_;
};

/// Bracket of two classes via representatives, re-projected; the result is
/// independent of the chosen representatives.
CohomologyClass cohomology_bracket(CohomologyTable& table, const CohomologyClass& a,
                                   const CohomologyClass& b);

}  // namespace forma
