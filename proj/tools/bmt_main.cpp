// Command-line driver: formality verdicts for sphere bundles over formal
// bases, tensor dumps, the unit-tangent-bundle classifier, the reducible
// Euler-class obstruction, and certificate re-verification.
//
// Exit codes: 0 formal / no obstruction, 1 non-formal, 2 input or usage error.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "bmt/algebra_io.hpp"
#include "bmt/report.hpp"
#include "bmt/verdicts.hpp"

using namespace bmt;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    ~Timer() {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        std::cerr << "elapsed: " << ms.count() << " ms\n";  // stderr: stdout stays reproducible
    }
};

GradedAlgebra load_algebra(const std::string& path, std::string* digest) {
    std::string text = read_file(path);
    if (digest)
        *digest = digest_hex(text);
    return parse_algebra(text);
}

int run_check(const std::string& path) {
    Report rep;
    rep.add("command", "check");
    rep.add("input", path);
    std::string digest;
    GradedAlgebra a = load_algebra(path, &digest);
    rep.add("input-digest", digest);
    auto bad = validate(a);
    if (!bad.empty()) {
        rep.add("verdict", "invalid");
        for (const auto& b : bad)
            rep.add("violation", b);
        std::cout << rep.str();
        return 2;
    }
    rep.add("validate", "ok");
    if (a.orientation) {
        auto pc = poincare_check(a);
        if (std::holds_alternative<std::string>(pc)) {
            rep.add("poincare", "failed: " + std::get<std::string>(pc));
            std::cout << rep.str();
            return 2;
        }
        rep.add("poincare", "ok (dimension " + std::to_string(a.formal_dim) + ")");
    } else {
        rep.add("poincare", "skipped (no orientation declared)");
    }
    rep.add("euler-characteristic", std::to_string(euler_characteristic(a)));
    std::cout << rep.str();
    return 0;
}

std::string euler_expr_or_zero(const GradedAlgebra& a, const std::string& expr, int degree, Vec* out) {
    if (expr.empty()) {
        *out = zero_vec(a.dim());
        return "0";
    }
    Vec e = parse_combination(name_table(a.names), a.dim(), expr);
    for (int i = 0; i < a.dim(); ++i)
        if (e[i] != 0 && a.degs[i] != degree)
            throw InputError("euler class must be homogeneous of degree " + std::to_string(degree));
    *out = e;
    return render_combination(a.names, e);
}

int run_formality(const std::string& path, int sphere_dim, const std::string& euler_expr, bool base_formal,
                  bool all_degrees, const std::string& cert_path, std::uint64_t seed, int check_choices) {
    Report rep;
    rep.add("command", "formality");
    rep.add("input", path);
    std::string digest;
    GradedAlgebra a = load_algebra(path, &digest);
    rep.add("input-digest", digest);
    rep.add("sphere-dim", std::to_string(sphere_dim));

    BundleSpec spec;
    spec.base = &a;
    spec.sphere_dim = sphere_dim;
    spec.base_formal_attested = base_formal;
    std::string euler_rendered = "0";
    if (sphere_dim % 2 == 1)
        euler_rendered = euler_expr_or_zero(a, euler_expr, sphere_dim + 1, &spec.euler);
    else if (!euler_expr.empty())
        euler_rendered = "ignored (even sphere dimension)";
    rep.add("euler", euler_rendered);
    rep.add("base-formal", base_formal ? "attested" : "missing");

    FormalityVerdict v = sphere_bundle_formality(spec);
    if (v.extension) {
        const auto& g = *v.extension;
        rep.add("decision-degree", std::to_string(g.top_degree + 1));
        for (const auto& [d, vals] : v.tensor->values) {
            if (!all_degrees && d != g.top_degree + 1 && v.tensor->zero_at(d))
                continue;
            int nonzero = 0;
            for (const auto& bv : vals)
                if (!is_zero(bv.value_class))
                    ++nonzero;
            rep.add("bm[" + std::to_string(d) + "]",
                    "dim " + std::to_string(vals.size()) + ", nonzero " + std::to_string(nonzero));
            if (all_degrees)
                for (const auto& bv : vals)
                    rep.add("  F(" + render_g22(*v.kernel_data, g.cohom, bv.g22_coords) + ")",
                            render_class(g.cohom, bv.value_class));
        }
    }
    rep.add("verdict", v.outcome == Outcome::Formal ? "Formal" : "NonFormal");
    rep.add("reason", reason_name(v.reason));
    if (v.witness) {
        rep.add("witness-degree", std::to_string(v.witness->degree));
        rep.add("witness", v.witness->element);
        rep.add("witness-value", v.witness->value);
    }
    for (const auto& f : v.findings)
        rep.add("flagged", f);
    if (v.certificate) {
        for (const auto& r : v.certificate->residuals)
            rep.add("certificate-residuals-p" + std::to_string(r.p),
                    "checked " + std::to_string(r.tuples) + ", nonzero " + std::to_string(r.nonzero));
        if (!cert_path.empty()) {
            write_file(cert_path,
                       serialize_certificate(*v.extension, *v.certificate, digest, sphere_dim, euler_rendered));
            rep.add("certificate", cert_path);
        }
    }
    if (check_choices > 0 && v.extension) {
        auto ci = choice_independence(*v.extension, *v.kernel_data, check_choices, seed, tensor_degrees(*v.extension));
        rep.add("choice-independence",
                (ci.identical ? "identical" : "DEVIATED") + std::string(" over ") + std::to_string(ci.trials) +
                    " randomized re-derivations");
        if (!ci.identical)
            throw InvariantError("tensor deviated under re-choices");
    }
    rep.add("seed", std::to_string(seed));
    std::cout << rep.str();
    return v.outcome == Outcome::Formal ? 0 : 1;
}

int run_bm_tensor(const std::string& path, int sphere_dim, const std::string& euler_expr, bool all_degrees) {
    Report rep;
    rep.add("command", "bm-tensor");
    rep.add("input", path);
    std::string digest;
    GradedAlgebra a = load_algebra(path, &digest);
    rep.add("input-digest", digest);
    if (sphere_dim % 2 == 0)
        throw InputError("bm-tensor applies to odd sphere dimensions (even fibers are formal by the theorem)");
    Vec euler;
    rep.add("euler", euler_expr_or_zero(a, euler_expr, sphere_dim + 1, &euler));
    GysinExtension g = extend(a, sphere_dim + 1, euler, false);
    ProductKernelData pk = product_kernel(g.cohom);
    int decision = g.top_degree + 1;
    std::set<int> degrees = all_degrees ? tensor_degrees(g) : std::set<int>{decision};
    BianchiMasseyTensor t = bm_tensor(g, pk, degrees);
    rep.add("decision-degree", std::to_string(decision));
    bool any_nonzero = false;
    for (const auto& [d, vals] : t.values) {
        rep.add("bm[" + std::to_string(d) + "]", "dim " + std::to_string(vals.size()));
        for (const auto& bv : vals) {
            rep.add("  F(" + render_g22(pk, g.cohom, bv.g22_coords) + ")", render_class(g.cohom, bv.value_class));
            if (!is_zero(bv.value_class))
                any_nonzero = true;
        }
    }
    rep.add("tensor", any_nonzero ? "nonzero" : "zero");
    std::cout << rep.str();
    return any_nonzero ? 1 : 0;
}

int run_utm(const std::string& path) {
    Report rep;
    rep.add("command", "utm");
    rep.add("input", path);
    std::string digest;
    GradedAlgebra a = load_algebra(path, &digest);
    rep.add("input-digest", digest);
    rep.add("euler-characteristic", std::to_string(euler_characteristic(a)));
    FormalityVerdict v = utm_classify(a);
    rep.add("verdict", v.outcome == Outcome::Formal ? "Formal" : "NonFormal");
    rep.add("route", reason_name(v.reason));
    if (v.witness) {
        rep.add("witness-degree", std::to_string(v.witness->degree));
        rep.add("witness", v.witness->element);
        rep.add("witness-value", v.witness->value);
        rep.add("witness-note", v.witness->note);
    }
    for (const auto& f : v.findings)
        rep.add("note", f);
    std::cout << rep.str();
    return v.outcome == Outcome::Formal ? 0 : 1;
}

int run_hl(const std::string& path, const std::string& omega_expr, int r, const std::string& decomposition) {
    Report rep;
    rep.add("command", "hl");
    rep.add("input", path);
    std::string digest;
    GradedAlgebra a = load_algebra(path, &digest);
    rep.add("input-digest", digest);
    HLInput inp;
    inp.h = &a;
    inp.r = r;
    inp.omega_degree = 2 * r;
    inp.omega = parse_combination(name_table(a.names), a.dim(), omega_expr);
    rep.add("omega", render_combination(a.names, inp.omega));
    rep.add("r", std::to_string(r));
    if (!decomposition.empty()) {
        std::vector<std::pair<Vec, Vec>> pairs;
        std::string rest = decomposition;
        while (!rest.empty()) {
            auto semi = rest.find(';');
            std::string item = semi == std::string::npos ? rest : rest.substr(0, semi);
            rest = semi == std::string::npos ? "" : rest.substr(semi + 1);
            auto comma = item.find(',');
            if (comma == std::string::npos)
                throw InputError("decomposition items must look like 'xEXPR,yEXPR'");
            pairs.emplace_back(parse_combination(name_table(a.names), a.dim(), item.substr(0, comma)),
                               parse_combination(name_table(a.names), a.dim(), item.substr(comma + 1)));
        }
        inp.decomposition = std::move(pairs);
    }
    HLResult res = hl_obstruction(inp);
    if (res.non_formal) {
        rep.add("verdict", "NonFormal");
        rep.add("reason", "HLObstruction");
        std::string dec;
        for (const auto& [x, y] : res.transcript.decomposition) {
            if (!dec.empty())
                dec += " ; ";
            dec += "(" + render_combination(a.names, x) + ") * (" + render_combination(a.names, y) + ")";
        }
        rep.add("decomposition", dec);
        rep.add("s", std::to_string(res.transcript.s));
        rep.add("transcript", res.transcript.detail);
        std::cout << rep.str();
        return 1;
    }
    rep.add("verdict", "NotApplicable");
    rep.add("note", "the obstruction is one-directional; NotApplicable is not a formality verdict");
    rep.add("transcript", res.transcript.detail);
    std::cout << rep.str();
    return 0;
}

int run_certify_verify(const std::string& path) {
    Report rep;
    rep.add("command", "certify-verify");
    rep.add("input", path);
    std::string text = read_file(path);
    ParsedCertificate pc = parse_certificate(text);
    GradedAlgebra base = parse_algebra(pc.base_text);
    rep.add("base-digest", pc.base_digest);
    rep.add("sphere-dim", std::to_string(pc.sphere_dim));
    Vec euler;
    euler_expr_or_zero(base, pc.euler_expr == "0" ? "" : pc.euler_expr, pc.sphere_dim + 1, &euler);
    GysinExtension g = extend(base, pc.sphere_dim + 1, euler, true);
    auto chain_names = name_table(g.chain.names);
    auto h_names = name_table(g.cohom.names);
    std::vector<Vec> f1(g.cohom.dim(), zero_vec(g.chain.dim()));
    std::vector<bool> seen(g.cohom.dim(), false);
    for (const auto& [hname, expr] : pc.f1_lines) {
        if (!h_names.count(hname))
            throw InputError("certificate names unknown class '" + hname + "'");
        f1[h_names.at(hname)] = parse_combination(chain_names, g.chain.dim(), expr);
        seen[h_names.at(hname)] = true;
    }
    for (int i = 0; i < g.cohom.dim(); ++i)
        if (!seen[i])
            throw InputError("certificate is missing f1 on '" + g.cohom.names[i] + "'");
    std::map<std::pair<int, int>, Vec> f2;
    for (const auto& [key, expr] : pc.f2_lines) {
        auto comma = key.find(',');
        if (comma == std::string::npos)
            throw InputError("bad f2 key '" + key + "'");
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(' ');
            size_t b = s.find_last_not_of(' ');
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string nx = trim(key.substr(0, comma)), ny = trim(key.substr(comma + 1));
        if (!h_names.count(nx) || !h_names.count(ny))
            throw InputError("certificate f2 names unknown class");
        f2[{h_names.at(nx), h_names.at(ny)}] = parse_combination(chain_names, g.chain.dim(), expr);
    }
    AInfinityCertificate cert = verify_certificate_tables(g, std::move(f1), std::move(f2));
    for (const auto& r : cert.residuals)
        rep.add("residuals-p" + std::to_string(r.p),
                "checked " + std::to_string(r.tuples) + ", nonzero " + std::to_string(r.nonzero));
    rep.add("certificate", cert.ok ? "verified" : "FAILED");
    std::cout << rep.str();
    return cert.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Formality of sphere bundles via the Bianchi-Massey tensor"};
    app.require_subcommand(1);

    std::string path, euler_expr, cert_path, omega_expr, decomposition;
    int sphere_dim = 1, r = 1, check_choices = 0;
    std::uint64_t seed = 0;
    bool base_formal = false, all_degrees = false;

    auto* c_check = app.add_subcommand("check", "validate an algebra file");
    c_check->add_option("file", path)->required();

    auto* c_form = app.add_subcommand("formality", "decide formality of a sphere bundle");
    c_form->add_option("file", path)->required();
    c_form->add_option("--sphere-dim", sphere_dim, "fiber sphere dimension k")->required();
    c_form->add_option("--euler", euler_expr, "Euler class as a combination of basis names");
    c_form->add_flag("--base-formal", base_formal, "attest that the base manifold is formal");
    c_form->add_flag("--all-degrees", all_degrees, "print the tensor in every degree");
    c_form->add_option("--certificate", cert_path, "write the formality certificate here");
    c_form->add_option("--seed", seed, "seed recorded in the report and used by --check-choices");
    c_form->add_option("--check-choices", check_choices, "re-derive the tensor under N randomized choices");

    auto* c_bm = app.add_subcommand("bm-tensor", "evaluate the tensor");
    c_bm->add_option("file", path)->required();
    c_bm->add_option("--sphere-dim", sphere_dim)->required();
    c_bm->add_option("--euler", euler_expr);
    c_bm->add_flag("--all-degrees", all_degrees);

    auto* c_utm = app.add_subcommand("utm", "classify the unit tangent bundle");
    c_utm->add_option("file", path)->required();

    auto* c_hl = app.add_subcommand("hl", "reducible Euler-class obstruction");
    c_hl->add_option("file", path)->required();
    c_hl->add_option("--omega", omega_expr)->required();
    c_hl->add_option("--r", r)->required();
    c_hl->add_option("--decomposition", decomposition, "pairs 'x,y;x,y' multiplying to omega");

    auto* c_cv = app.add_subcommand("certify-verify", "re-check a serialized certificate");
    c_cv->add_option("cert", path)->required();

    CLI11_PARSE(app, argc, argv);

    Timer timer;
    try {
        if (c_check->parsed())
            return run_check(path);
        if (c_form->parsed())
            return run_formality(path, sphere_dim, euler_expr, base_formal, all_degrees, cert_path, seed,
                                 check_choices);
        if (c_bm->parsed())
            return run_bm_tensor(path, sphere_dim, euler_expr, all_degrees);
        if (c_utm->parsed())
            return run_utm(path);
        if (c_hl->parsed())
            return run_hl(path, omega_expr, r, decomposition);
        if (c_cv->parsed())
            return run_certify_verify(path);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
