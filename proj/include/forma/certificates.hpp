// JSON certificates for every pipeline, plus re-verification by
// deterministic recomputation. All rationals serialize as "p/q" ("p" when
// q = 1); output field order is fixed, so two runs are byte-identical.
#pragma once

#include "forma/freelie.hpp"
#include "forma/obstruction.hpp"

#include <json.hpp>

namespace forma {

using Json = nlohmann::ordered_json;

Json polyvector_to_json(const PolyVector& f);
PolyVector polyvector_from_json(const Ctx& ctx, const Json& j);

Json taylor_to_json(const TaylorMap& t);
Json contraction_to_json(const Contraction& c);
Contraction contraction_from_json(const Json& j);

Json algebra_to_json(const LieAlgebra& L, const std::optional<BilinearForm>& kappa);

/// Resolution order for the quadratic form: supplied, else the Killing form
/// when quadratic, else the identity when quadratic (abelian), else none.
std::optional<BilinearForm> resolve_kappa(const LieAlgebra& L,
                                          std::optional<BilinearForm> supplied);

struct RunConfig {
    std::string command;
    std::string builtin;  // or empty when input came from a file
    std::string input_text;
    int dmax = 6;
    int max_arity = 4;
    int max_weight = 5;
    int tmax = 4;
    int dim_n = 2;
};

Json cmd_jacobi(const LieAlgebra& L);
Json cmd_quadratic_info(const LieAlgebra& L, std::optional<BilinearForm> kappa);
Json cmd_cohomology(const LieAlgebra& L, int dmax);
Json cmd_transfer(const LieAlgebra& L, std::optional<BilinearForm> kappa, int dmax,
                  int max_arity, int max_weight);
Json cmd_c3(const LieAlgebra& L, std::optional<BilinearForm> kappa, int dmax);
Json cmd_free_sigma(int N, int tmax);

struct VerifyResult {
    bool ok = false;
    std::string detail;
};

/// Re-runs the pipeline recorded in the certificate and compares the result
/// byte for byte.
VerifyResult verify_certificate(const Json& cert);

}  // namespace forma
