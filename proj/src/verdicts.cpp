#include "bmt/verdicts.hpp"

#include <algorithm>

#include "bmt/report.hpp"

namespace bmt {

std::string reason_name(Reason r) {
    switch (r) {
        case Reason::EvenSphere: return "EvenSphere";
        case Reason::ZeroTensorCertificate: return "ZeroTensor+Certificate";
        case Reason::NonzeroTensor: return "NonzeroTensor";
        case Reason::EulerCharZero: return "ChiZero";
        case Reason::SingleGenerator: return "SingleGenerator";
        case Reason::OddClass: return "OddClass";
        case Reason::ProductKernel: return "ProductKernel";
        case Reason::HLObstruction: return "HLObstruction";
    }
    return "?";
}

namespace {

// gamma as a linear map on arbitrary E-vectors (canonical choice).
Vec gamma_linear(const GysinExtension& g, const ProductKernelData& pk, const Vec& e_coords) {
    return g.gamma_canonical(pk.sym2, e_coords);
}

void require_valid(const GradedAlgebra& a, const char* who) {
    auto bad = validate(a);
    if (!bad.empty())
        throw InputError(std::string(who) + ": algebra fails validation: " + bad.front());
}

std::string render_witness_element(const ProductKernelData& pk, const GradedAlgebra& h, const WitnessData& data) {
    std::string out;
    for (const auto& [coeff, u, v] : data.pairs) {
        std::string term = "((" + render_sym2_vector(pk, h, u) + ").(" + render_sym2_vector(pk, h, v) + "))";
        if (out.empty()) {
            if (coeff == 1)
                out = term;
            else
                out = to_string(coeff) + "*" + term;
        } else if (coeff == 1) {
            out += " + " + term;
        } else if (coeff == -1) {
            out += " - " + term;
        } else {
            out += " + " + to_string(coeff) + "*" + term;
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace

Vec evaluate_witness(const GysinExtension& g, const ProductKernelData& pk, const WitnessData& data) {
    Vec chain = zero_vec(g.chain.dim());
    for (const auto& [coeff, u, v] : data.pairs) {
        Vec gu = gamma_linear(g, pk, u);
        Vec gv = gamma_linear(g, pk, v);
        Vec au = g.alpha2(pk.sym2, u);
        Vec av = g.alpha2(pk.sym2, v);
        int du = 0, dv = 0;
        for (int q = 0; q < pk.sym2.size(); ++q) {
            if (u[q] != 0)
                du = pk.sym2.degs[q];
            if (v[q] != 0)
                dv = pk.sym2.degs[q];
        }
        Vec term = g.chain_mul(gu, av);
        add_scaled(term, Rational(parity_sign(1LL * du * dv)), g.chain_mul(gv, au));
        add_scaled(chain, coeff, term);
    }
    if (!g.chain_closed(chain))
        throw InvariantError("witness evaluation is not closed");
    return g.project_class(chain);
}

FormalityVerdict sphere_bundle_formality(const BundleSpec& spec) {
    if (!spec.base)
        throw InputError("sphere_bundle_formality: missing base");
    require_valid(*spec.base, "sphere_bundle_formality");
    if (!spec.base_formal_attested)
        throw InputError(
            "base formality must be attested explicitly (--base-formal): it is a hypothesis about the manifold, "
            "not decidable from its cohomology ring");
    if (spec.sphere_dim < 1)
        throw InputError("sphere dimension must be at least 1");

    FormalityVerdict v;
    if (spec.sphere_dim % 2 == 0) {
        v.outcome = Outcome::Formal;
        v.reason = Reason::EvenSphere;
        return v;
    }

    Vec euler = spec.euler.empty() ? zero_vec(spec.base->dim()) : spec.euler;
    auto g = std::make_shared<GysinExtension>(extend(*spec.base, spec.sphere_dim + 1, euler, true));
    auto pk = std::make_shared<ProductKernelData>(product_kernel(g->cohom));
    const int decision = g->top_degree + 1;
    auto tensor = std::make_shared<BianchiMasseyTensor>(bm_tensor(*g, *pk, tensor_degrees(*g)));

    v.extension = g;
    v.kernel_data = pk;
    v.tensor = tensor;
    for (int d : tensor->nonzero_degrees_besides(decision))
        v.findings.push_back("nonzero tensor value in degree " + std::to_string(d) +
                             " away from the decision degree " + std::to_string(decision));

    if (const BmValue* bad = tensor->first_nonzero(decision)) {
        v.outcome = Outcome::NonFormal;
        v.reason = Reason::NonzeroTensor;
        Witness w;
        w.degree = decision;
        w.element = render_g22(*pk, g->cohom, bad->g22_coords);
        w.value_class = bad->value_class;
        w.value = render_class(g->cohom, bad->value_class);
        const auto& pairs = tensor->pair_lists.at(decision);
        for (size_t c = 0; c < pairs.size(); ++c)
            if (bad->pair_coeffs[c] != 0)
                w.data.pairs.emplace_back(bad->pair_coeffs[c], pk->e_vec(pairs[c].first), pk->e_vec(pairs[c].second));
        v.witness = std::move(w);
        return v;
    }

    auto corrected = eta_correct(*g, *pk);
    if (std::holds_alternative<EtaRefusal>(corrected))
        throw InvariantError("eta_correct refused after the decision degree was checked zero");
    auto cert = std::make_shared<AInfinityCertificate>(
        build_certificate(*g, *pk, std::get<UniformMassey>(corrected)));
    if (!cert->ok)
        throw InvariantError("certificate residuals are nonzero despite vanishing tensor");
    v.outcome = Outcome::Formal;
    v.reason = Reason::ZeroTensorCertificate;
    v.certificate = cert;
    return v;
}

std::optional<std::pair<int, int>> single_generator_check(const GradedAlgebra& h) {
    auto dims = h.degree_dims();
    for (const auto& [d, m] : dims)
        if (m > 1)
            return std::nullopt;
    std::vector<int> positive;
    for (const auto& [d, m] : dims)
        if (d > 0 && m == 1)
            positive.push_back(d);
    if (positive.empty())
        return std::make_pair(0, 1);  // the ground field itself
    int d = positive.front();
    int x = h.degree_indices(d).front();
    Vec cur = h.basis_vec(x);
    std::vector<int> power_degrees = {0};
    int p = 1;
    while (!is_zero(cur)) {
        power_degrees.push_back(p * d);
        if (!dims.count(p * d) || dims.at(p * d) != 1)
            return std::nullopt;
        cur = h.multiply(cur, h.basis_vec(x));
        ++p;
    }
    // nonzero components must be exactly the powers of the generator
    std::vector<int> present = {0};
    present.insert(present.end(), positive.begin(), positive.end());
    std::sort(present.begin(), present.end());
    std::sort(power_degrees.begin(), power_degrees.end());
    if (present != power_degrees)
        return std::nullopt;
    return std::make_pair(d, p);
}

namespace {

// x* with x_t * x* = delta_{t,which} * nu, via the nondegenerate pairing.
Vec dual_for(const GradedAlgebra& h, int orientation, const std::vector<Vec>& xs, size_t which, int xdeg) {
    auto cands = h.degree_indices(h.formal_dim - xdeg);
    Matrix m(int(xs.size()), int(cands.size()));
    for (size_t r = 0; r < xs.size(); ++r)
        for (size_t c = 0; c < cands.size(); ++c)
            m(int(r), int(c)) = h.multiply(xs[r], h.basis_vec(cands[c]))[orientation];
    Vec rhs = zero_vec(int(xs.size()));
    rhs[which] = 1;
    auto sol = solve_particular(m, rhs);
    if (!sol)
        throw InvariantError("Poincare duality failed to produce a dual class");
    Vec out = zero_vec(h.dim());
    for (size_t c = 0; c < cands.size(); ++c)
        out[cands[c]] = (*sol)[c];
    return out;
}

Vec sym2_of(const ProductKernelData& pk, const GradedAlgebra& h, const Vec& u, const Vec& v) {
    return pk.sym2.pair_of_vectors(u, v, h.degs);
}

}  // namespace

FormalityVerdict utm_classify(const GradedAlgebra& h) {
    require_valid(h, "utm_classify");
    auto pc = poincare_check(h);
    if (std::holds_alternative<std::string>(pc))
        throw InputError("utm_classify requires a Poincare algebra: " + std::get<std::string>(pc));
    const int orientation = std::get<PoincareStructure>(pc).orientation;

    FormalityVerdict v;
    long long chi = euler_characteristic(h);
    if (chi == 0) {
        v.outcome = Outcome::Formal;
        v.reason = Reason::EulerCharZero;
        return v;
    }
    if (h.formal_dim % 2 != 0)
        throw InvariantError("nonzero Euler characteristic on an odd-dimensional Poincare algebra");
    if (auto sg = single_generator_check(h)) {
        v.outcome = Outcome::Formal;
        v.reason = Reason::SingleGenerator;
        v.findings.push_back("cohomology ring is generated by one class of degree " + std::to_string(sg->first) +
                             " with p = " + std::to_string(sg->second));
        return v;
    }

    // Non-formal; produce the constructive witness on the volume-form
    // extension and cross-check it on the actual chi * volume extension.
    const int n2 = h.formal_dim;
    Vec nu = h.basis_vec(orientation);
    auto g_vol = std::make_shared<GysinExtension>(extend(h, n2, nu, true));
    auto pk = std::make_shared<ProductKernelData>(product_kernel(g_vol->cohom));
    GysinExtension g_utm = extend(h, n2, scaled(nu, Rational(chi)), true);

    v.outcome = Outcome::NonFormal;
    v.extension = g_vol;
    v.kernel_data = pk;
    Witness w;
    w.degree = g_vol->top_degree + 1;  // decision degree of the circle-bundle extension
    auto h_class = [&](const GysinExtension& g, const Vec& base_vec) {
        return g.project_class(g.embed_base(base_vec));
    };

    // Route 1: an odd-degree class x with x x* = nu.
    int odd_deg = -1;
    for (int d = 1; d < n2; d += 2)
        if (!h.degree_indices(d).empty()) {
            odd_deg = d;
            break;
        }
    if (odd_deg >= 0) {
        v.reason = Reason::OddClass;
        Vec x = h.basis_vec(h.degree_indices(odd_deg).front());
        Vec xstar = dual_for(h, orientation, {x}, 0, odd_deg);
        Vec e = sym2_of(*pk, g_vol->cohom, h_class(*g_vol, x), h_class(*g_vol, xstar));
        w.data.pairs.emplace_back(Rational(1), e, e);
    } else {
        // Route 2: a kernel element of H^i (x) H^j -> H^{i+j} with i, j <= n.
        v.reason = Reason::ProductKernel;
        bool found = false;
        for (int i = 2; i <= n2 / 2 && !found; i += 2)
            for (int j = i; j <= n2 / 2 && !found; j += 2) {
                auto bi = h.degree_indices(i);
                auto bj = h.degree_indices(j);
                if (bi.empty() || bj.empty())
                    continue;
                Matrix m(h.dim(), int(bi.size() * bj.size()));
                for (size_t a = 0; a < bi.size(); ++a)
                    for (size_t b = 0; b < bj.size(); ++b) {
                        Vec p = h.basis_product(bi[a], bj[b]);
                        for (int t = 0; t < h.dim(); ++t)
                            m(t, int(a * bj.size() + b)) = p[t];
                    }
                Subspace ker = kernel_basis(m);
                if (ker.basis.empty())
                    continue;
                found = true;
                // pairs (x_t, y_t) from the first kernel vector
                std::vector<Vec> xs, ys;
                for (size_t a = 0; a < bi.size(); ++a) {
                    Vec y = zero_vec(h.dim());
                    bool nonzero = false;
                    for (size_t b = 0; b < bj.size(); ++b) {
                        const Rational& c = ker.basis.front()[a * bj.size() + b];
                        if (c != 0) {
                            y[bj[b]] = c;
                            nonzero = true;
                        }
                    }
                    if (nonzero) {
                        xs.push_back(h.basis_vec(bi[a]));
                        ys.push_back(std::move(y));
                    }
                }
                // make {y_t} linearly independent, preserving the tensor
                for (bool again = true; again;) {
                    again = false;
                    for (size_t s = 0; s < ys.size() && !again; ++s) {
                        std::vector<Vec> prefix(ys.begin(), ys.begin() + s);
                        if (!contains(span_of(h.dim(), prefix), ys[s]))
                            continue;
                        auto coeff = solve_particular(Matrix::from_columns(h.dim(), prefix), ys[s]);
                        for (size_t t = 0; t < s; ++t)
                            add_scaled(xs[t], (*coeff)[t], xs[s]);
                        xs.erase(xs.begin() + s);
                        ys.erase(ys.begin() + s);
                        again = true;
                    }
                }
                if (xs.empty())
                    throw InvariantError("kernel element reduced to nothing");
                Vec xstar = dual_for(h, orientation, xs, 0, i);
                Vec ystar = dual_for(h, orientation, ys, 0, j);
                // (sum (x_t . y_t)) . (x* . y*)  -  sum ((x_t . x*) . (y_t . y*))
                const GradedAlgebra& H = g_vol->cohom;
                Vec e0 = zero_vec(pk->sym2.size());
                for (size_t t = 0; t < xs.size(); ++t)
                    add_scaled(e0, Rational(1), sym2_of(*pk, H, h_class(*g_vol, xs[t]), h_class(*g_vol, ys[t])));
                Vec e1 = sym2_of(*pk, H, h_class(*g_vol, xstar), h_class(*g_vol, ystar));
                w.data.pairs.emplace_back(Rational(1), e0, e1);
                for (size_t t = 0; t < xs.size(); ++t) {
                    Vec ex = sym2_of(*pk, H, h_class(*g_vol, xs[t]), h_class(*g_vol, xstar));
                    Vec ey = sym2_of(*pk, H, h_class(*g_vol, ys[t]), h_class(*g_vol, ystar));
                    w.data.pairs.emplace_back(Rational(-1), ex, ey);
                }
            }
        if (!found)
            throw InvariantError(
                "classification says non-formal but neither the odd-class nor the product-kernel route fired");
    }

    // Evaluate on the volume extension and cross-check on chi * volume.
    Vec value_vol = evaluate_witness(*g_vol, *pk, w.data);
    if (is_zero(value_vol))
        throw InvariantError("classification witness evaluates to zero on the volume extension");
    ProductKernelData pk_utm = product_kernel(g_utm.cohom);
    Vec value_utm = evaluate_witness(g_utm, pk_utm, w.data);
    if (is_zero(value_utm))
        throw InvariantError("classification witness evaluates to zero on the unit-tangent extension");
    w.value_class = value_vol;
    w.value = render_class(g_vol->cohom, value_vol);
    w.element = render_witness_element(*pk, g_vol->cohom, w.data);
    w.note = "evaluated on the volume-form extension; re-checked nonzero on the chi*volume extension (chi = " +
             std::to_string(chi) + ")";
    v.witness = std::move(w);
    return v;
}

HLResult hl_obstruction(const HLInput& inp) {
    if (!inp.h)
        throw InputError("hl_obstruction: missing algebra");
    const GradedAlgebra& h = *inp.h;
    require_valid(h, "hl_obstruction");
    if (inp.r < 1 || inp.r % 2 == 0)
        throw InputError("hl_obstruction: the Euler degree must be 2r with r odd (degree 0 mod 4 inputs are "
                         "excluded: the obstruction's degree condition is necessary, as the formal CP^2 bundle "
                         "with |omega| = 4 shows)");
    if (inp.omega_degree != 2 * inp.r)
        throw InputError("hl_obstruction: omega degree must equal 2r");
    for (int i = 0; i < h.dim(); ++i)
        if (inp.omega[i] != 0 && h.degs[i] != inp.omega_degree)
            throw InputError("hl_obstruction: omega is not homogeneous of degree 2r");

    HLResult res;
    HLTranscript& tr = res.transcript;

    // Condition 1: reducibility in degree r.
    if (inp.decomposition) {
        Vec sum = zero_vec(h.dim());
        for (const auto& [x, y] : *inp.decomposition) {
            for (int i = 0; i < h.dim(); ++i)
                if ((x[i] != 0 || y[i] != 0) && h.degs[i] != inp.r)
                    throw InputError("hl_obstruction: decomposition classes must be homogeneous of degree r");
            add_scaled(sum, Rational(1), h.multiply(x, y));
        }
        if (sum != inp.omega)
            throw InputError("hl_obstruction: the supplied decomposition does not multiply to omega");
        tr.decomposition = *inp.decomposition;
    } else {
        auto br = h.degree_indices(inp.r);
        std::vector<std::pair<int, int>> pairs;
        std::vector<Vec> cols;
        for (size_t a = 0; a < br.size(); ++a)
            for (size_t b = a; b < br.size(); ++b) {
                pairs.emplace_back(br[a], br[b]);
                cols.push_back(h.basis_product(br[a], br[b]));
            }
        auto sol = cols.empty() ? std::nullopt : solve_particular(Matrix::from_columns(h.dim(), cols), inp.omega);
        if (!sol) {
            tr.detail = "condition 1 fails: [omega] is not a sum of products of degree-" + std::to_string(inp.r) +
                        " classes";
            return res;
        }
        for (size_t c = 0; c < pairs.size(); ++c)
            if ((*sol)[c] != 0)
                tr.decomposition.emplace_back(scaled(h.basis_vec(pairs[c].first), (*sol)[c]),
                                              h.basis_vec(pairs[c].second));
    }

    // Condition 2: scan for s with omega iso on H^s and injective one step below.
    auto rank_block = [&](int src_deg, const Vec& mult) {
        auto idx = h.degree_indices(src_deg);
        std::vector<Vec> cols;
        for (int i : idx)
            cols.push_back(h.multiply(mult, h.basis_vec(i)));
        return std::make_pair(int(idx.size()), span_of(h.dim(), cols).dim());
    };
    for (int s = 0; s <= h.formal_dim; ++s) {
        auto src = h.degree_indices(s);
        if (src.empty())
            continue;
        auto [dim_s, rank_s] = rank_block(s, inp.omega);
        int dim_target = int(h.degree_indices(s + 2 * inp.r).size());
        bool iso = (dim_s == dim_target) && (rank_s == dim_s);
        if (!iso)
            continue;
        auto [dim_lo, rank_lo] = rank_block(s - inp.r, inp.omega);
        bool injective = (rank_lo == dim_lo);  // vacuous when the block is empty
        if (!injective)
            continue;
        tr.applicable = true;
        tr.s = s;
        tr.detail = "omega: H^" + std::to_string(s) + " -> H^" + std::to_string(s + 2 * inp.r) +
                    " is an isomorphism (rank " + std::to_string(rank_s) + "); omega: H^" +
                    std::to_string(s - inp.r) + " -> H^" + std::to_string(s + inp.r) + " is injective (rank " +
                    std::to_string(rank_lo) + " of " + std::to_string(dim_lo) + ")";
        res.non_formal = true;
        return res;
    }
    tr.detail = "condition 2 fails: no degree s with omega an isomorphism on H^s and injective on H^{s-r}";
    return res;
}

HLCheckReport hard_lefschetz_check(const GradedAlgebra& h, const Vec& omega2) {
    require_valid(h, "hard_lefschetz_check");
    if (h.formal_dim % 2 != 0)
        throw InputError("hard_lefschetz_check requires even formal dimension");
    {
        auto pc = poincare_check(h);
        if (std::holds_alternative<std::string>(pc))
            throw InputError("hard_lefschetz_check requires a Poincare algebra: " + std::get<std::string>(pc));
    }
    for (int i = 0; i < h.dim(); ++i)
        if (omega2[i] != 0 && h.degs[i] != 2)
            throw InputError("hard_lefschetz_check: omega must be homogeneous of degree 2");
    const int n = h.formal_dim / 2;
    HLCheckReport rep;
    for (int i = 0; i <= n; ++i) {
        Vec power = h.basis_vec(h.unit);
        for (int t = 0; t < n - i; ++t)
            power = h.multiply(power, omega2);
        auto idx = h.degree_indices(i);
        std::vector<Vec> cols;
        for (int b : idx)
            cols.push_back(h.multiply(power, h.basis_vec(b)));
        HLCheckRow row;
        row.i = i;
        row.dim_low = int(idx.size());
        row.dim_high = int(h.degree_indices(2 * n - i).size());
        row.rank = span_of(h.dim(), cols).dim();
        row.iso = (row.dim_low == row.dim_high) && (row.rank == row.dim_low);
        if (!row.iso)
            rep.all = false;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace bmt
