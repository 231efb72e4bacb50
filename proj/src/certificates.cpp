#include "forma/certificates.hpp"

#include <numeric>

namespace forma {

Json polyvector_to_json(const PolyVector& f) {
    Json out = Json::array();
    for (const auto& [key, c] : f.terms()) {
        Json term;
        term["sym"] = key.exp;
        Json form = Json::array();
        for (int i : key.form)
            form.push_back(i + 1);  // 1-based on the wire
        term["form"] = form;
        term["coef"] = c.str();
        out.push_back(term);
    }
    return out;
}

PolyVector polyvector_from_json(const Ctx& ctx, const Json& j) {
    PolyVector f(ctx);
    for (const auto& term : j) {
        PVKey key;
        for (const auto& e : term.at("sym"))
            key.exp.push_back(e.get<int>());
        for (const auto& i : term.at("form"))
            key.form.push_back(i.get<int>() - 1);
        f.add_term(key, Rational::parse(term.at("coef").get<std::string>()));
    }
    return f;
}

Json taylor_to_json(const TaylorMap& t) {
    Json out;
    out["degree"] = t.degree();
    Json comps;
    for (const auto& [arity, tab] : t.components()) {
        Json entries = Json::array();
        for (const auto& [word, val] : tab) {
            Json e;
            Json w = Json::array();
            for (int i : word)
                w.push_back(t.domain() ? t.domain()->keys[i] : std::to_string(i));
            e["word"] = w;
            Json v;
            for (const auto& [i, c] : val)
                v[t.codomain() ? t.codomain()->keys[i] : std::to_string(i)] = c.str();
            e["value"] = v;
            entries.push_back(e);
        }
        comps[std::to_string(arity)] = entries;
    }
    out["components"] = comps;
    return out;
}

namespace {

Json matrix_to_json(const SparseMatrix& m) {
    Json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    Json entries = Json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (const auto& [c, v] : m.row(r))
            entries.push_back(Json::array({r, c, v.str()}));
    out["entries"] = entries;
    return out;
}

SparseMatrix matrix_from_json(const Json& j) {
    SparseMatrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
    for (const auto& e : j.at("entries"))
        m.set(e.at(0).get<int>(), e.at(1).get<int>(),
              Rational::parse(e.at(2).get<std::string>()));
    return m;
}

Json complex_to_json(const FiniteComplex& c) {
    Json out;
    Json degrees = Json::array();
    for (int d : c.degrees()) {
        Json deg;
        deg["degree"] = d;
        deg["basis"] = c.basis(d);
        deg["grades"] = c.grades(d);
        if (c.differential(d))
            deg["differential"] = matrix_to_json(*c.differential(d));
        degrees.push_back(deg);
    }
    out["degrees"] = degrees;
    return out;
}

FiniteComplex complex_from_json(const Json& j) {
    FiniteComplex c;
    for (const auto& deg : j.at("degrees")) {
        int d = deg.at("degree").get<int>();
        std::vector<std::string> basis = deg.at("basis").get<std::vector<std::string>>();
        std::vector<int> grades = deg.at("grades").get<std::vector<int>>();
        c.set_basis(d, std::move(basis), std::move(grades));
    }
    for (const auto& deg : j.at("degrees"))
        if (deg.contains("differential"))
            c.set_differential(deg.at("degree").get<int>(),
                               matrix_from_json(deg.at("differential")));
    return c;
}

Json degmap_to_json(const DegMap& m) {
    Json out;
    out["shift"] = m.shift;
    Json mats;
    for (const auto& [d, mat] : m.mats)
        mats[std::to_string(d)] = matrix_to_json(mat);
    out["mats"] = mats;
    return out;
}

DegMap degmap_from_json(const Json& j) {
    DegMap m;
    m.shift = j.at("shift").get<int>();
    for (const auto& [k, v] : j.at("mats").items())
        m.mats[std::stoi(k)] = matrix_from_json(v);
    return m;
}

}  // namespace

Json contraction_to_json(const Contraction& c) {
    Json out;
    out["U"] = complex_to_json(c.U);
    out["V"] = complex_to_json(c.V);
    out["i"] = degmap_to_json(c.i);
    out["p"] = degmap_to_json(c.p);
    out["h"] = degmap_to_json(c.h);
    return out;
}

Contraction contraction_from_json(const Json& j) {
    Contraction c;
    c.U = complex_from_json(j.at("U"));
    c.V = complex_from_json(j.at("V"));
    c.i = degmap_from_json(j.at("i"));
    c.p = degmap_from_json(j.at("p"));
    c.h = degmap_from_json(j.at("h"));
    return c;
}

Json algebra_to_json(const LieAlgebra& L, const std::optional<BilinearForm>& kappa) {
    Json out;
    out["dim"] = L.dim();
    Json brackets = Json::array();
    for (int j = 0; j < L.dim(); ++j)
        for (int k = j + 1; k < L.dim(); ++k) {
            Json outv;
            for (int i = 0; i < L.dim(); ++i) {
                Rational c = L.c(i, j, k);
                if (!c.is_zero())
                    outv[std::to_string(i + 1)] = c.str();
            }
            if (!outv.empty()) {
                Json b;
                b["i"] = j + 1;
                b["j"] = k + 1;
                b["out"] = outv;
                brackets.push_back(b);
            }
        }
    out["brackets"] = brackets;
    if (kappa) {
        Json rows = Json::array();
        for (int a = 0; a < L.dim(); ++a) {
            Json row = Json::array();
            for (int b = 0; b < L.dim(); ++b)
                row.push_back(kappa->at(a, b).str());
            rows.push_back(row);
        }
        out["kappa"] = rows;
    }
    return out;
}

std::optional<BilinearForm> resolve_kappa(const LieAlgebra& L,
                                          std::optional<BilinearForm> supplied) {
    if (supplied) {
        if (!supplied->is_quadratic(L))
            throw error("kappa: the supplied form is not invariant nondegenerate");
        return supplied;
    }
    BilinearForm killing = killing_form(L);
    if (killing.is_quadratic(L))
        return killing;
    BilinearForm id(L.dim());
    for (int i = 0; i < L.dim(); ++i)
        id.set(i, i, Rational(1));
    if (id.is_quadratic(L))
        return id;
    return std::nullopt;
}

Json cmd_jacobi(const LieAlgebra& L) {
    Json out;
    out["kind"] = "jacobi";
    out["algebra"] = algebra_to_json(L, std::nullopt);
    auto rep = check_jacobi(L);
    out["jacobi"] = rep.ok ? "pass" : "fail";
    if (!rep.ok)
        out["violating_triple"] =
            Json::array({rep.violating_triple[0] + 1, rep.violating_triple[1] + 1,
                         rep.violating_triple[2] + 1});
    return out;
}

Json cmd_quadratic_info(const LieAlgebra& L, std::optional<BilinearForm> kappa) {
    Json out;
    out["kind"] = "quadratic-info";
    out["algebra"] = algebra_to_json(L, kappa);
    out["jacobi"] = check_jacobi(L).ok ? "pass" : "fail";
    BilinearForm killing = killing_form(L);
    Json krows = Json::array();
    for (int a = 0; a < L.dim(); ++a) {
        Json row = Json::array();
        for (int b = 0; b < L.dim(); ++b)
            row.push_back(killing.at(a, b).str());
        krows.push_back(row);
    }
    out["killing"] = krows;
    auto resolved = resolve_kappa(L, std::move(kappa));
    if (!resolved) {
        out["kappa_status"] = "no invariant nondegenerate form available";
        return out;
    }
    out["kappa_status"] = "quadratic";
    auto reg = cartan_3_regular(L, *resolved);
    out["cartan3regular"] = reg.regular ? "yes" : "no";
    out["regularity_system"] = Json{{"rank", reg.system_rank}, {"cols", reg.system_cols}};
    if (!reg.regular && reg.witness)
        out["witness_derivation"] = matrix_to_json(*reg.witness);
    auto scal = derivation_scaling_check(L, *resolved);
    out["derivation_scaling_check"] = scal.regular ? "infeasible" : "witness";
    return out;
}

Json cmd_cohomology(const LieAlgebra& L, int dmax) {
    Json out;
    out["kind"] = "cohomology";
    out["algebra"] = algebra_to_json(L, std::nullopt);
    out["dmax"] = dmax;
    auto ctx = CEContext::make(L, dmax);
    CohomologyTable table(ctx);
    Json dims = Json::array();
    for (int m = 0; m <= dmax; ++m) {
        Json row = Json::array();
        for (int k = 0; k <= L.dim(); ++k)
            row.push_back(table.dim(k, m));
        dims.push_back(row);
    }
    out["dims"] = dims;  // dims[m][k]
    return out;
}

Json cmd_transfer(const LieAlgebra& L, std::optional<BilinearForm> kappa, int dmax,
                  int max_arity, int max_weight) {
    Json out;
    out["kind"] = "transfer";
    auto resolved = resolve_kappa(L, std::move(kappa));
    if (!resolved)
        throw error("transfer: the reduced model needs an invariant nondegenerate form");
    out["algebra"] = algebra_to_json(L, resolved);
    out["dmax"] = dmax;
    out["max_arity"] = max_arity;
    out["max_weight"] = max_weight;

    // probe letters q^a with 2a <= dmax; the model itself carries enough
    // Casimir head-room for every series the probes can reach
    int aprobe = dmax / 2;
    int amax = std::max(2 * aprobe * std::max(max_arity, max_weight) / 2, aprobe + 1);
    auto ctx = CEContext::make(L, 2 * amax + 2);
    QuadraticReduced R(ctx, *resolved, amax);
    LinftyTransfer tr(R.adapted(), R.package(false));
    std::vector<int> probe;
    for (int a = 0; a <= aprobe; ++a) {
        probe.push_back(R.u_letter(QuadraticReduced::One, a));
        probe.push_back(R.u_letter(QuadraticReduced::Omega, a));
    }
    TaylorMap d = tr.materialize_d(max_arity, probe);
    TaylorMap phi = tr.materialize_phi(std::min(max_arity, 3), probe);
    out["d"] = taylor_to_json(d);
    out["phi"] = taylor_to_json(phi);
    bool d2_zero = true, d4_zero = true;
    for (const auto& [arity, tab] : d.components()) {
        if (arity == 2 && !tab.empty())
            d2_zero = false;
        if (arity >= 4 && !tab.empty())
            d4_zero = false;
    }
    out["d2_zero"] = d2_zero;
    out["d_n_zero_for_n_ge_4"] = d4_zero;

    auto D_full = R.package(true);
    auto d_lazy = tr.d_eval(max_arity);
    auto phi_lazy = tr.phi_eval(max_arity);
    bool residuals_vanish = true;
    for (int r = 1; r <= max_arity; ++r)
        if (!residual(R.adapted().UB, R.adapted().VB, *phi_lazy, *D_full, *d_lazy, r, probe)
                 .is_zero())
            residuals_vanish = false;
    out["residuals_vanish_to_order"] = residuals_vanish ? max_arity : 0;
    auto lrep = check_linfty(*R.adapted().UB, *tr.d_eval(max_weight), max_weight, probe);
    out["transferred_square_zero_to_weight"] = lrep.ok ? max_weight : 0;
    return out;
}

Json cmd_c3(const LieAlgebra& L, std::optional<BilinearForm> kappa, int dmax) {
    Json out;
    out["kind"] = "c3";
    auto resolved = resolve_kappa(L, std::move(kappa));
    out["algebra"] = algebra_to_json(L, resolved);
    out["dmax"] = dmax;
    auto ctx = CEContext::make(L, dmax);
    ObstructionPipeline P(ctx, resolved);
    auto cert = P.c3_vanishes();
    out["verdict"] = cert.exact ? "formal-order-3" : "non-formal";
    Json samples = Json::array();
    for (const auto& [args, val] : cert.z3_samples) {
        Json s;
        Json a = Json::array();
        for (int i : args)
            a.push_back(P.hbasis()[i].key);
        s["args"] = a;
        Json v;
        for (const auto& [i, c] : val)
            v[P.hbasis()[i].key] = c.str();
        s["value"] = v;
        samples.push_back(s);
    }
    out["z3_samples"] = samples;
    out["system_rank"] = cert.system_rank;
    if (cert.exact) {
        Json w = Json::array();
        for (const auto& [key, c] : cert.witness)
            w.push_back(Json::array({key, c.str()}));
        out["witness_or_core"] =
            Json{{"type", "theta_witness"}, {"entries", w}};
    } else {
        out["witness_or_core"] = Json{{"type", "infeasibility_core"},
                                      {"rows", cert.system_rows},
                                      {"cols", cert.system_cols},
                                      {"rank", cert.system_rank},
                                      {"z3_nonzero", !cert.z3_all_zero}};
    }
    if (resolved) {
        auto scal = derivation_scaling_check(L, *resolved);
        out["derivation_scaling_check"] = scal.regular ? "infeasible" : "witness";
    }
    return out;
}

Json cmd_free_sigma(int N, int tmax) {
    Json out;
    out["kind"] = "free-sigma";
    out["N"] = N;
    out["Tmax"] = tmax;
    if (N <= 1) {
        // T(K e) is commutative, inner derivations vanish, and the cohomology
        // injects as a Lie subalgebra: formality holds trivially.
        out["formality"] = "formal";
        out["note"] = "cohomology injects as a subalgebra; nothing to obstruct";
        return out;
    }
    FreeLieModel M(N, tmax);
    auto cert = M.sigma_nonexact();
    out["sigma_probe"] = cert.probe.str();
    out["exactness"] = cert.exact ? "feasible" : "infeasible";
    out["rank"] = cert.system_rank;
    out["rows"] = cert.system_rows;
    out["cols"] = cert.system_cols;
    out["verdict"] = cert.exact ? "formal-order-3" : "non-formal";
    return out;
}

VerifyResult verify_certificate(const Json& cert) {
    if (!cert.contains("kind"))
        return {false, "certificate has no kind field"};
    std::string kind = cert.at("kind").get<std::string>();
    Json fresh;
    if (kind == "free-sigma") {
        fresh = cmd_free_sigma(cert.at("N").get<int>(), cert.at("Tmax").get<int>());
    } else {
        auto input = load_algebra_json(cert.at("algebra").dump());
        if (kind == "jacobi") {
            fresh = cmd_jacobi(input.algebra);
        } else if (kind == "quadratic-info") {
            fresh = cmd_quadratic_info(input.algebra, input.kappa);
        } else if (kind == "cohomology") {
            fresh = cmd_cohomology(input.algebra, cert.at("dmax").get<int>());
        } else if (kind == "transfer") {
            fresh = cmd_transfer(input.algebra, input.kappa, cert.at("dmax").get<int>(),
                                 cert.at("max_arity").get<int>(),
                                 cert.at("max_weight").get<int>());
        } else if (kind == "c3") {
            fresh = cmd_c3(input.algebra, input.kappa, cert.at("dmax").get<int>());
        } else {
            return {false, "unknown certificate kind: " + kind};
        }
    }
    if (fresh == cert)
        return {true, ""};
    for (const auto& [key, val] : cert.items())
        if (!fresh.contains(key) || fresh.at(key) != val)
            return {false, "field mismatch: " + key};
    return {false, "recomputation added fields"};
}

}  // namespace forma
