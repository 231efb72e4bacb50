// Finite chain complexes, homotopy contractions, and the chain-level
// perturbation lemma with geometric series summed under a filtration bound.
#pragma once

#include "forma/sparse_matrix.hpp"

#include <map>
#include <string>
#include <vector>

namespace forma {

/// Degreewise map between complexes. mats[d] sends the degree-d basis of the
/// source to the degree-(d+shift) basis of the target; absent degrees are
/// zero maps.
struct DegMap {
    int shift = 0;
    std::map<int, SparseMatrix> mats;
    const SparseMatrix* at(int d) const;
};

/// Chain complex on finite per-degree bases, differential of degree +1,
/// with an optional secondary (filtration) grade per basis element.
class FiniteComplex {
public:
    FiniteComplex() = default;

    void set_basis(int degree, std::vector<std::string> keys, std::vector<int> grades = {});
    void set_differential(int degree, SparseMatrix m);

    /// Checks b compose b = 0 and shape consistency; call after assembly.
    void validate() const;

    int dim(int degree) const;
    const std::vector<std::string>& basis(int degree) const;
    const std::vector<int>& grades(int degree) const;
    bool has_degree(int degree) const;
    std::vector<int> degrees() const;
    const SparseMatrix* differential(int degree) const;
    /// Differential as a DegMap of shift +1.
    DegMap diff_map() const;

    int max_grade() const;

private:
    std::map<int, std::vector<std::string>> basis_;
    std::map<int, std::vector<int>> grades_;
    std::map<int, SparseMatrix> diff_;
};

/// Homotopy contraction (i, p, h) between (U, b_U) and (V, b_V):
/// chain maps, p i = id, id - i p = [b_V, h], and the side conditions
/// h h = 0, h i = 0, p h = 0.
struct Contraction {
    FiniteComplex U, V;
    DegMap i;  // shift 0, U -> V
    DegMap p;  // shift 0, V -> U
    DegMap h;  // shift -1, V -> V
};

struct ContractionReport {
    bool ok = true;
    std::string first_violation;  // empty when ok
};

ContractionReport verify_contraction(const Contraction& c);

/// Builds p and h from an injective chain map i : (U, b_U) -> (V, b_V) that
/// is a quasi-isomorphism onto its image, choosing the complement W of
/// i(U) + b(V) by echelon pivots in the basis order. Throws if i is not
/// injective, not a chain map, or the construction fails verification.
Contraction contraction_from_injection(const FiniteComplex& U, const FiniteComplex& V,
                                       const DegMap& i);

/// Side-condition forcing: given (i, p, h_raw) satisfying everything except
/// possibly h h = 0, h i = 0, p h = 0, returns
/// h' = P h b h b h b h P with P = [b, h], which satisfies them all.
DegMap force_side_conditions(const FiniteComplex& U, const FiniteComplex& V, const DegMap& i,
                             const DegMap& p, const DegMap& h_raw);

struct PerturbResult {
    Contraction contraction;  // with differentials b_U + delta_U, b_V + delta_V
    DegMap delta_U;
};

/// Chain-level perturbation lemma. delta_V must satisfy
/// (b_V + delta_V)^2 = 0 and strictly lower the secondary grade; the
/// geometric series for (id + h delta)^{-1} is summed until it vanishes,
/// with a hard cap, and exceeding the cap is an error.
PerturbResult perturb(const Contraction& c, const DegMap& delta_V);

}  // namespace forma
