// The characteristic 3-class machinery: sections phi_1, homotopy phi_2,
// the 3-cochain w_3 and its projection z_3, the graded Chevalley-Eilenberg
// differential on cohomology cochains, and the exactness decision that
// certifies (non-)formality at order 3.
#pragma once

#include "forma/linfty.hpp"
#include "forma/polyvec.hpp"

#include <functional>
#include <optional>

namespace forma {

// ---------------------------------------------------------------------------
// Graded CE calculus on a cohomology Lie algebra given by basis + bracket.

struct HView {
    std::vector<int> degrees;                 // Z-degrees of the basis
    std::function<VecSum(int, int)> bracket;  // [e_i, e_j]_H in basis coords
};

/// Exterior-side canonicalization: ascending letters, a swap costs
/// -(-1)^(|x||y|), and a repeated even letter kills the word.
Canon lambda_canonicalize(const std::vector<int>& degrees, const std::vector<int>& letters);

/// Graded-antisymmetric k-cochain on H with values in the H span, stored on
/// canonical tuples.
struct HCochain {
    int arity = 0;
    int degree = 0;
    std::map<std::vector<int>, VecSum> values;

    VecSum eval(const std::vector<int>& degrees, const std::vector<int>& args) const;
    void set(const std::vector<int>& degrees, const std::vector<int>& args, VecSum v);
    bool is_zero() const;
};

/// The printed graded CE differential: on a k-cochain phi and arguments
/// y_1..y_{k+1},
///   sum_i (-1)^(i-1) (-1)^(|phi||y_i|) (-1)^(|y_i|(|y_1|+..+|y_{i-1}|))
///         [y_i, phi(.., no y_i, ..)]
/// + sum_{i<j} (-1)^(i+j) (-1)^((|y_i|+|y_j|)(|y_1|+..+|y_{i-1}|))
///         (-1)^(|y_j|(|y_{i+1}|+..+|y_{j-1}|)) phi([y_i,y_j], rest).
VecSum graded_ce_differential_H(const HView& H, const HCochain& phi,
                                const std::vector<int>& args);

// ---------------------------------------------------------------------------
// The quadratic reduced complex K[q]1 + K[q]E + K[q]pi + K[q]Omega, with the
// homotopy h(alpha pi) = alpha E, packaged for the coalgebra-side transfer.

class QuadraticReduced {
public:
    /// amax: highest Casimir power kept; the ambient context needs
    /// dmax >= 2 amax + 1.
    QuadraticReduced(Ctx ctx, BilinearForm kappa, int amax);

    enum Type { One = 0, Euler = 1, Pi = 2, Omega = 3 };
    int letter(Type t, int a) const;
    int u_letter(Type t, int a) const;  // One and Omega only
    int amax() const { return amax_; }

    const AdaptedBasis& adapted() const { return ab_; }
    PolyVector letter_polyvector(int vb_letter) const;
    /// Expresses an element of the reduced subalgebra in letter coordinates;
    /// throws if it does not lie there.
    VecSum decompose(const PolyVector& f) const;

    /// Shifted Schouten bracket package over the reduced letters; with the
    /// differential included it is the full DGLA coderivation.
    std::shared_ptr<DglaPackage> package(bool include_diff) const;

    const Ctx& ctx() const { return ctx_; }
    const BilinearForm& kappa() const { return kappa_; }

private:
    Ctx ctx_;
    BilinearForm kappa_;
    int amax_;
    AdaptedBasis ab_;
    std::vector<PolyVector> letter_pv_;
    PolyVector q_;
};

/// Evaluates the unshifted multilinear map underlying a Sym-side Taylor
/// coefficient on an ordered tuple of letters: canonicalizes the word and
/// multiplies by the shift sign.
VecSum eval_unshifted(const GradedBasis& shifted_basis, const TaylorEval& f,
                      const std::vector<int>& tuple);

// ---------------------------------------------------------------------------
// The obstruction pipeline over the full truncated complex.

struct HBasisElement {
    int form = 0;
    int poly = 0;
    int index = 0;  // within the bidegree's representative list
    int degree = 0;  // Z-degree in H = CE[1]: form - 1
    std::string key;
    PolyVector section;  // phi_1 value, a cocycle
};

struct C3Certificate {
    bool exact = false;      // true: formal at order 3 within the truncation
    int system_rank = 0;
    int system_rows = 0;
    int system_cols = 0;
    // exact: the theta witness coordinates per unknown key; nonexact: empty.
    std::vector<std::pair<std::string, Rational>> witness;
    // z3 samples on the probe triples, in section coordinates.
    std::vector<std::tuple<std::vector<int>, VecSum>> z3_samples;
    bool z3_all_zero = true;
};

class ObstructionPipeline {
public:
    /// kappa, when given and quadratic, activates the natural section
    /// phi_1([q^a]) = q^a, phi_1([q^a Omega]) = q^a Omega on the bidegrees
    /// where those classes span.
    ObstructionPipeline(Ctx ctx, std::optional<BilinearForm> kappa);

    const std::vector<HBasisElement>& hbasis() const { return hbasis_; }
    HView hview();

    const PolyVector& phi1(int i) const { return hbasis_[i].section; }
    /// phi_2(y_i, y_j) = -h([phi_1 y_i, phi_1 y_j]_s), the homotopy-derived
    /// arity-2 correction, using
    /// the per-poly-degree contraction of the full complex.
    PolyVector phi2(int i, int j);
    /// The six-term w_3 expression; its values are cocycles.
    PolyVector w3(int i, int j, int k);
    /// z_3 = projection of w_3 to section coordinates.
    VecSum z3(int i, int j, int k);
    /// Cohomology bracket in section coordinates.
    VecSum h_bracket(int i, int j);

    VecSum project_to_section(const PolyVector& cocycle);

    /// Canonical probe triples: all Lambda-canonical triples with total
    /// polynomial degree <= dmax - 2.
    std::vector<std::vector<int>> probe_triples();

    /// Solve delta_H theta = z3 over all degree -1, poly-shift -1 unknowns.
    C3Certificate c3_vanishes();

    CohomologyTable& table() { return table_; }

private:
    Contraction& graded_contraction(int poly);

    Ctx ctx_;
    std::optional<BilinearForm> kappa_;
    CohomologyTable table_;
    std::vector<HBasisElement> hbasis_;
    std::map<std::pair<int, int>, std::vector<int>> by_bidegree_;  // -> hbasis indices
    // change of basis: section coords <- echelon coords, per bidegree
    std::map<std::pair<int, int>, SparseMatrix> section_from_echelon_;
    std::map<int, Contraction> contractions_;  // per poly degree
    std::map<std::pair<int, int>, PolyVector> phi2_cache_;
    std::map<std::pair<int, int>, VecSum> bracket_cache_;
};

}  // namespace forma
