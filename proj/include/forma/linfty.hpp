// Coderivations, coalgebra morphisms, the Nijenhuis-Richardson bracket,
// L-infinity checks and residuals, and the homotopy-transfer evaluator built
// on the geometric series of the perturbation lemma.
#pragma once

#include "forma/chain_complex.hpp"
#include "forma/sym_coalgebra.hpp"

#include <functional>
#include <optional>

namespace forma {

/// Arity-indexed family of graded-symmetric multilinear maps, evaluated on
/// canonical words. Implementations may be explicit tables or lazy rules.
class TaylorEval {
public:
    virtual ~TaylorEval() = default;
    virtual int degree() const = 0;
    virtual int min_arity() const = 0;
    virtual int max_arity() const = 0;
    /// Value of the arity-|w| coefficient on the canonical word w (in the
    /// codomain basis span); zero outside [min_arity, max_arity].
    virtual VecSum eval(const SymWord& w) const = 0;
};

/// Explicit sparse tables keyed by canonical words.
class TaylorMap : public TaylorEval {
public:
    TaylorMap() = default;
    TaylorMap(BasisPtr domain, BasisPtr codomain, int degree)
        : domain_(std::move(domain)), codomain_(std::move(codomain)), degree_(degree) {}

    int degree() const override { return degree_; }
    int min_arity() const override;
    int max_arity() const override;
    VecSum eval(const SymWord& w) const override;

    void set(const SymWord& w, VecSum v);
    const std::map<int, std::map<SymWord, VecSum>>& components() const { return comp_; }
    const BasisPtr& domain() const { return domain_; }
    const BasisPtr& codomain() const { return codomain_; }
    bool is_zero() const;

private:
    BasisPtr domain_, codomain_;
    int degree_ = 0;
    std::map<int, std::map<SymWord, VecSum>> comp_;
};

/// DGLA package on a shifted basis: arity 1 is the differential b[1]
/// (letterwise, no sign), arity 2 is the shifted bracket
/// D_2(x_i . x_j) = (-1)^(|x_i|+1) [x_i, x_j], |.| the shifted degree.
/// The bracket callback receives letter indices and returns the unshifted
/// bracket in basis coordinates; results are cached.
class DglaPackage : public TaylorEval {
public:
    DglaPackage(BasisPtr basis, std::function<VecSum(int)> diff,
                std::function<VecSum(int, int)> bracket, bool include_diff = true,
                bool include_bracket = true);

    int degree() const override { return 1; }
    int min_arity() const override { return include_diff_ ? 1 : 2; }
    int max_arity() const override { return include_bracket_ ? 2 : 1; }
    VecSum eval(const SymWord& w) const override;

private:
    BasisPtr basis_;
    std::function<VecSum(int)> diff_;
    std::function<VecSum(int, int)> bracket_;
    bool include_diff_, include_bracket_;
    mutable std::map<SymWord, VecSum> cache_;
};

/// Caching adapter turning a callable into a TaylorEval; handy for lazily
/// evaluated transferred coefficients.
class LambdaTaylor : public TaylorEval {
public:
    LambdaTaylor(int degree, int min_arity, int max_arity,
                 std::function<VecSum(const SymWord&)> fn)
        : degree_(degree), min_(min_arity), max_(max_arity), fn_(std::move(fn)) {}
    int degree() const override { return degree_; }
    int min_arity() const override { return min_; }
    int max_arity() const override { return max_; }
    VecSum eval(const SymWord& w) const override {
        int k = static_cast<int>(w.size());
        if (k < min_ || k > max_)
            return {};
        auto it = cache_.find(w);
        if (it != cache_.end())
            return it->second;
        VecSum v = fn_(w);
        cache_[w] = v;
        return v;
    }

private:
    int degree_, min_, max_;
    std::function<VecSum(const SymWord&)> fn_;
    mutable std::map<SymWord, VecSum> cache_;
};

/// Canonical words of the given weight using only the allowed letters.
std::vector<SymWord> words_of_weight_over(const GradedBasis& B, int weight,
                                          const std::vector<int>& letters);

/// Coderivation extension along the identity, applied to one canonical word:
/// sum over sub-words of f on the sub-word times the remaining letters.
WordSum coderivation_apply(const GradedBasis& B, const TaylorEval& f, const SymWord& w);
WordSum coderivation_apply(const GradedBasis& B, const TaylorEval& f, const WordSum& x);

/// Morphism e^{*phi} applied to one canonical word: sum over set partitions
/// of the letters, each block mapped by the matching Taylor coefficient.
WordSum morphism_apply(const GradedBasis& dom, const GradedBasis& cod, const TaylorEval& phi,
                       const SymWord& w);
WordSum morphism_apply(const GradedBasis& dom, const GradedBasis& cod, const TaylorEval& phi,
                       const WordSum& x);

/// Taylor family applied to a word sum: sum of f on each whole word.
VecSum taylor_apply(const TaylorEval& f, const WordSum& x);

/// [f, g]_NR = f o g-bar - (-1)^(|f||g|) g o f-bar, materialized up to
/// max_arity over the given domain basis.
TaylorMap nr_bracket(BasisPtr B, const TaylorEval& f, const TaylorEval& g, int max_arity);

struct LinftyReport {
    bool ok = true;
    SymWord first_failure;
};

/// D-bar squared = 0 on every word up to max_weight.
LinftyReport check_linfty(const GradedBasis& B, const TaylorEval& D, int max_weight);
/// Same, over words drawn from a restricted letter set.
LinftyReport check_linfty(const GradedBasis& B, const TaylorEval& D, int max_weight,
                          const std::vector<int>& letters);

/// Residual P_r(phi) = D o e^{*phi} - phi o d-bar restricted to weight-r
/// words; all zero up to order r certifies an L-infinity morphism of order r.
TaylorMap residual(BasisPtr domain, BasisPtr codomain, const TaylorEval& phi, const TaylorEval& D,
                   const TaylorEval& d, int r);
/// Same, over words drawn from a restricted letter set.
TaylorMap residual(BasisPtr domain, BasisPtr codomain, const TaylorEval& phi, const TaylorEval& D,
                   const TaylorEval& d, int r, const std::vector<int>& letters);

/// Inverse of a coalgebra morphism with invertible first coefficient,
/// computed weight by weight; composing gives the identity up to max_weight.
TaylorMap invert_morphism(BasisPtr domain, BasisPtr codomain, const TaylorEval& phi,
                          int max_weight);

// ---------------------------------------------------------------------------
// Generic shift of multilinear tables (Eqs-of-shift bookkeeping): values on
// ordered tuples, with the transposition-counted sign. Used by the tests and
// by the unshifted evaluation of transferred coefficients.

struct MultiTable {
    BasisPtr domain, codomain;
    int arity = 0;
    int degree = 0;
    std::map<std::vector<int>, VecSum> values;  // ordered tuples
};

/// phi[j] as a table over the shifted bases (degrees lowered by j), with
/// sign (-1)^(j(j-1)/2 * k(k-1)/2 + j * sum_r (k-r) |x_r|).
MultiTable shift_multitable(const MultiTable& t, int j);

/// The shift sign alone, for callers evaluating shifted maps on tuples.
int shift_sign(const GradedBasis& domain, const std::vector<int>& tuple, int j);

// ---------------------------------------------------------------------------
// Homotopy transfer.

/// Splitting of a complex's letters for the symmetric-coalgebra side of the
/// perturbation lemma: U-part letters span ker[h,b], acyclic letters span
/// im[h,b]; i1/p1/h1 act letterwise in these coordinates.
struct AdaptedBasis {
    BasisPtr UB;  // letters of U[1]
    BasisPtr VB;  // letters of V[1], each purely U-part or purely acyclic
    std::vector<bool> acyclic;    // per VB letter
    std::vector<VecSum> i1;       // per UB letter -> VB span
    std::vector<VecSum> p1;       // per VB letter -> UB span
    std::vector<VecSum> h1;       // per VB letter -> VB span, degree -1
    std::vector<VecSum> b1;       // per VB letter -> VB span, the differential
    std::vector<VecSum> bU1;      // per UB letter -> UB span (zero when minimal)

    // Complex-coordinate realization, filled by adapt_contraction: per VB
    // letter its complex degree and coordinate vector, plus the conversion
    // from a degree-homogeneous coordinate vector back to letters.
    std::vector<int> letter_complex_degree;
    std::vector<std::vector<Rational>> letter_vector;
    std::function<VecSum(int, const std::vector<Rational>&)> vector_to_letters;
};

/// Builds the adapted splitting from a verified contraction, taking ker/im
/// of the idempotent [h, b_V] with echelon-deterministic bases per degree.
AdaptedBasis adapt_contraction(const Contraction& c);

/// beta map: 1/l on words with l >= 1 acyclic letters, 0 otherwise.
WordSum beta_map(const GradedBasis& B, const std::vector<bool>& acyclic, const WordSum& x);

/// eta = h-bar[1] after beta.
WordSum eta_map(const AdaptedBasis& ab, const WordSum& x);

/// Lazy evaluator for the transferred structure
///   d'  = p1 o pr o (id + D'-bar o eta)^{-1} o D'-bar o e^{*i1},
///   phi = pr o (id + eta o D'-bar)^{-1} o e^{*i1},
///   psi = p1 o pr o (id + D'-bar o eta)^{-1},
/// each geometric series summed until the weight runs out.
class LinftyTransfer {
public:
    LinftyTransfer(AdaptedBasis ab, std::shared_ptr<const TaylorEval> Dprime);

    /// Transferred Taylor coefficient d'_{|w|}(w) on a word over UB.
    VecSum d(const SymWord& w) const;
    /// Transferred morphism coefficient phi_{|w|}(w), in the VB span.
    VecSum phi(const SymWord& w) const;
    /// Quasi-inverse coefficient psi_{|w|}(w) on a word over VB.
    VecSum psi(const SymWord& w) const;

    /// e^{*i1} of a UB word.
    WordSum lift(const SymWord& w) const;

    TaylorMap materialize_d(int max_arity) const;
    TaylorMap materialize_phi(int max_arity) const;
    /// Same, over words drawn from a restricted letter set.
    TaylorMap materialize_d(int max_arity, const std::vector<int>& letters) const;
    TaylorMap materialize_phi(int max_arity, const std::vector<int>& letters) const;

    /// Lazy views, usable wherever a TaylorEval is expected.
    std::shared_ptr<TaylorEval> d_eval(int max_arity) const;
    std::shared_ptr<TaylorEval> phi_eval(int max_arity) const;

    const AdaptedBasis& basis() const { return ab_; }

private:
    AdaptedBasis ab_;
    std::shared_ptr<const TaylorEval> Dp_;
};

}  // namespace forma
