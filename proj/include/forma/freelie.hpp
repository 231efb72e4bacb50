// The free-algebra derivation complex: tensor words, derivations Hom(V, TV),
// inner derivations, the first-factor trace S_n with its cyclic inverse Q_n,
// the reduced two-term complex TV + Hom(V, TV) with its bracket and homotopy
// h(x, psi) = (Q(psi), 0), the scalar 3-cocycle sigma, and the finite
// exactness solve behind the non-formality verdict.
#pragma once

#include "forma/linfty.hpp"

#include <optional>

namespace forma {

using Word = std::vector<int>;  // letters 0..N-1

/// Element of the free associative algebra TV, words of length <= tmax.
class TensorPoly {
public:
    TensorPoly() : n_(0), tmax_(0) {}
    TensorPoly(int n, int tmax) : n_(n), tmax_(tmax) {}

    int generators() const { return n_; }
    int tmax() const { return tmax_; }
    const std::map<Word, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Word& w, const Rational& c);
    /// Coefficient of the empty word: the counit.
    Rational counit() const;

    TensorPoly& operator+=(const TensorPoly& o);
    friend TensorPoly operator*(const Rational& s, const TensorPoly& a);
    friend TensorPoly operator*(const TensorPoly& a, const TensorPoly& b);  // concatenation
    friend TensorPoly operator-(const TensorPoly& a, const TensorPoly& b);
    friend bool operator==(const TensorPoly& a, const TensorPoly& b) {
        return a.terms_ == b.terms_;
    }

private:
    int n_, tmax_;
    std::map<Word, Rational> terms_;
};

/// Element of Hom(V, TV) = der: sparse map (input index, output word) ->
/// coefficient; the tensor grade of a term is |output| - 1.
class FreeDeriv {
public:
    FreeDeriv() : n_(0), tmax_(0) {}
    FreeDeriv(int n, int tmax) : n_(n), tmax_(tmax) {}

    int generators() const { return n_; }
    int tmax() const { return tmax_; }
    const std::map<std::pair<int, Word>, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(int input, const Word& out, const Rational& c);
    TensorPoly value_on(int input) const;
    /// Tensor grade when homogeneous; throws otherwise; -2 for zero.
    int grade() const;

    FreeDeriv& operator+=(const FreeDeriv& o);
    friend FreeDeriv operator*(const Rational& s, const FreeDeriv& a);
    friend FreeDeriv operator-(const FreeDeriv& a, const FreeDeriv& b);
    friend bool operator==(const FreeDeriv& a, const FreeDeriv& b) {
        return a.terms_ == b.terms_;
    }

private:
    int n_, tmax_;
    std::map<std::pair<int, Word>, Rational> terms_;
};

/// Leibniz extension: psi-bar(x_1...x_k) = sum_r x_1...(psi(x_r))...x_k.
TensorPoly deriv_extend(const FreeDeriv& psi, const TensorPoly& a);

/// [psi, chi]_D = psi-bar o chi - chi-bar o psi on generators.
FreeDeriv d_bracket(const FreeDeriv& psi, const FreeDeriv& chi);

/// b'(x) = ad_x restricted to the generators.
FreeDeriv inner(const TensorPoly& x);

/// Cyclic rotation per word: x_1...x_k -> x_2...x_k x_1.
TensorPoly zeta(const TensorPoly& a);

/// S_n on the grade-n part: alpha(v_0) v_1...v_n; S_{-1} = S_0 = 0.
TensorPoly first_factor_trace(const FreeDeriv& psi, int grade);
/// S = sum of all S_n.
TensorPoly s_map(const FreeDeriv& psi);

/// Q_n = -1/(N^n - 1) sum_{r=0}^{n-1} N^(n-r-1) zeta^r o S_n, Q_{-1} = Q_0 = 0;
/// inverts b' on inner derivations. Requires N >= 2.
TensorPoly q_map(const FreeDeriv& psi);

/// The reduced complex bracket [(x,psi),(y,chi)] = (psi-bar y - chi-bar x,
/// [psi,chi]_D); the differential is (x,psi) -> (0, b'(x)).
std::pair<TensorPoly, FreeDeriv> reduced_bracket(const std::pair<TensorPoly, FreeDeriv>& a,
                                                 const std::pair<TensorPoly, FreeDeriv>& b);

/// sigma(psi_1, psi_2, psi_3) = -counit(psibar_1(Q([psi_2,psi_3]_D)) + cycl.)
/// for arguments in the S-kernel; nonzero tensor grade totals give 0.
Rational sigma_general(const FreeDeriv& p1, const FreeDeriv& p2, const FreeDeriv& p3);

/// Closed form sigma(alpha, beta, psi) =
///   1/(N-1) sum alpha_l beta_k (psi_j^{ljk} - psi_j^{kjl}).
Rational sigma_closed_form(const std::vector<Rational>& alpha, const std::vector<Rational>& beta,
                           const FreeDeriv& psi);

/// Cohomology bracket [alpha, psi]_H for alpha a covector and psi of grade 2,
/// with the 1/(N-1) correction; the result lies in the S-kernel.
FreeDeriv cohomology_bracket_free(const std::vector<Rational>& alpha, const FreeDeriv& psi);

/// Projection onto the S-kernel complement: P = id - b' o Q.
FreeDeriv outer_project(const FreeDeriv& psi);

// ---------------------------------------------------------------------------

struct SigmaCertificate {
    bool exact = false;  // expected false for all N >= 2
    int system_rank = 0;
    int system_rows = 0;
    int system_cols = 0;
    Rational probe;  // sigma(eps^1, eps^2, e1 (x) e2 (x) e2 (x) eps^2)
    std::vector<std::pair<std::string, Rational>> witness;
};

/// Model of the truncated reduced complex for fixed N: deterministic bases of
/// ker S_n per grade, the b'-image letters, the chain contraction, and the
/// adapted coalgebra basis for homotopy transfer.
class FreeLieModel {
public:
    /// Keeps TV words of length <= tmax-1 and derivation grades -1..tmax-1.
    FreeLieModel(int N, int tmax);

    int N() const { return n_; }
    int tmax() const { return tmax_; }

    // outder basis: ker S_n vectors, flattened over grades -1..tmax-1
    int outder_dim() const { return static_cast<int>(outder_.size()); }
    const FreeDeriv& outder_basis(int i) const { return outder_[i]; }
    int outder_grade(int i) const { return outder_grade_[i]; }
    /// Coordinates of an S-kernel element in the outder basis; throws when
    /// the element is not in the kernel span.
    VecSum outder_coords(const FreeDeriv& psi) const;

    /// Cohomology bracket in outder coordinates (projection of [.,.]_D).
    VecSum outder_bracket(int i, int j) const;

    /// sigma on outder basis triples.
    Rational sigma(int i, int j, int k) const;

    /// The chain-level contraction (H, 0) <- (G_red, b) with h = (Q, 0).
    const Contraction& chain_contraction() const { return chain_; }

    /// Adapted coalgebra basis: UB = unit + outder letters, VB adds the TV
    /// words and the b'-image letters.
    const AdaptedBasis& adapted() const { return ab_; }
    int u_unit_letter() const { return 0; }
    int u_outder_letter(int i) const { return 1 + i; }
    std::shared_ptr<DglaPackage> package(bool include_diff) const;

    /// delta_H theta = sigma over all tensor-degree-0 unknowns; expected
    /// infeasible for N >= 2. `rhs_override` replaces sigma for sanity tests.
    SigmaCertificate sigma_nonexact(
        const std::optional<std::function<Rational(int, int, int)>>& rhs_override =
            std::nullopt) const;

private:
    VecSum decompose_der(const FreeDeriv& psi) const;   // into VB letters
    VecSum decompose_tv(const TensorPoly& x) const;     // into VB letters

    int n_, tmax_;
    std::vector<FreeDeriv> outder_;
    std::vector<int> outder_grade_;
    std::map<int, SparseMatrix> kernel_solver_;  // per grade: [basis columns]
    std::map<int, std::vector<int>> kernel_letters_;  // grade -> outder range
    std::vector<Word> tv_words_;                 // length 0..tmax-1, unit first
    std::map<Word, int> tv_index_;
    Contraction chain_;
    AdaptedBasis ab_;
    // VB letter ranges
    int vb_tv_first_ = 0;      // tv letters
    int vb_outer_first_ = 0;   // ker S letters
    int vb_inner_first_ = 0;   // b'(word) letters, aligned with tv words 1..
};

}  // namespace forma
