#include "bmt/gysin.hpp"

#include <algorithm>
#include <sstream>

namespace bmt {

namespace {

std::string render_base_combination(const GradedAlgebra& a, const Vec& v) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < a.dim(); ++i) {
        if (v[i] == 0)
            continue;
        if (!first)
            os << "+";
        first = false;
        if (v[i] != 1)
            os << to_string(v[i]) << "*";
        os << a.names[i];
    }
    return first ? "0" : os.str();
}

}  // namespace

Vec GysinExtension::chain_d(const Vec& u) const {
    Vec out = zero_vec(chain.dim());
    for (int i = 0; i < chain.dim(); ++i)
        if (u[i] != 0)
            add_scaled(out, u[i], diff[i]);
    return out;
}

Vec GysinExtension::base_part(const Vec& chain_vec) const {
    const int m = base.dim();
    return Vec(chain_vec.begin(), chain_vec.begin() + m);
}

Vec GysinExtension::theta_part(const Vec& chain_vec) const {
    const int m = base.dim();
    return Vec(chain_vec.begin() + m, chain_vec.end());
}

Vec GysinExtension::embed_base(const Vec& base_vec) const {
    Vec out = zero_vec(chain.dim());
    std::copy(base_vec.begin(), base_vec.end(), out.begin());
    return out;
}

Vec GysinExtension::embed_theta(const Vec& base_vec) const {
    Vec out = zero_vec(chain.dim());
    std::copy(base_vec.begin(), base_vec.end(), out.begin() + base.dim());
    return out;
}

bool GysinExtension::chain_exact(const Vec& chain_vec) const {
    if (!is_zero(theta_part(chain_vec)))
        return false;
    Vec x = base_part(chain_vec);
    for (const auto& [d, sub] : im_omega_) {
        Vec comp = base.degree_component(x, d);
        if (!contains(sub, comp))
            return false;
        for (int i = 0; i < base.dim(); ++i)
            if (base.degs[i] == d)
                x[i] = 0;
    }
    return is_zero(x);
}

Vec GysinExtension::omega_inverse(const Vec& base_vec) const {
    Vec out = zero_vec(base.dim());
    for (int d = 0; d <= base.formal_dim; ++d) {
        Vec comp = base.degree_component(base_vec, d);
        if (is_zero(comp))
            continue;
        auto rows = base.degree_indices(d);
        Vec rhs(rows.size());
        for (size_t r = 0; r < rows.size(); ++r)
            rhs[r] = comp[rows[r]];
        auto it = omega_solver_.find(d - omega_degree);
        if (it == omega_solver_.end())
            throw InvariantError("omega_inverse: vector not in the image of omega");
        auto sol = it->second.solve(rhs);
        if (!sol)
            throw InvariantError("omega_inverse: vector not in the image of omega");
        auto src = base.degree_indices(d - omega_degree);
        for (size_t c = 0; c < src.size(); ++c)
            out[src[c]] += (*sol)[c];
    }
    return out;
}

Vec GysinExtension::project_class(const Vec& chain_vec) const {
    if (!chain_closed(chain_vec))
        throw InvariantError("project_class: chain vector is not closed");
    Vec h = zero_vec(cohom.dim());
    Vec x = base_part(chain_vec);
    Vec y = theta_part(chain_vec);
    for (int d = 0; d <= base.formal_dim; ++d) {
        Vec comp = base.degree_component(x, d);
        if (!is_zero(comp)) {
            auto rows = base.degree_indices(d);
            Vec rhs(rows.size());
            for (size_t r = 0; r < rows.size(); ++r)
                rhs[r] = comp[rows[r]];
            auto it = class_solver_.find(d);
            if (it == class_solver_.end())
                throw InvariantError("project_class: missing class solver");
            auto sol = it->second.solve(rhs);
            if (!sol)
                throw InvariantError("project_class: decomposition failed");
            // Solution layout: [im-omega coefficients | coker coefficients].
            int im_dim = im_omega_.count(d) ? im_omega_.at(d).dim() : 0;
            const auto& hs = h_of_coker_.count(d) ? h_of_coker_.at(d) : std::vector<int>{};
            for (size_t c = 0; c < hs.size(); ++c)
                h[hs[c]] = (*sol)[im_dim + c];
        }
        Vec ycomp = base.degree_component(y, d);
        if (!is_zero(ycomp)) {
            auto rows = base.degree_indices(d);
            Vec rhs(rows.size());
            for (size_t r = 0; r < rows.size(); ++r)
                rhs[r] = ycomp[rows[r]];
            auto it = ker_solver_.find(d);
            if (it == ker_solver_.end())
                throw InvariantError("project_class: theta part outside ker omega");
            auto sol = it->second.solve(rhs);
            if (!sol)
                throw InvariantError("project_class: theta part outside ker omega");
            const auto& hs = h_of_ker_.count(d + theta_degree) ? h_of_ker_.at(d + theta_degree) : std::vector<int>{};
            if (hs.size() != sol->size())
                throw InvariantError("project_class: kernel bookkeeping mismatch");
            for (size_t c = 0; c < hs.size(); ++c)
                h[hs[c]] = (*sol)[c];
        }
    }
    return h;
}

Vec GysinExtension::alpha(const Vec& h_coords) const {
    Vec out = zero_vec(chain.dim());
    for (int i = 0; i < cohom.dim(); ++i)
        if (h_coords[i] != 0)
            add_scaled(out, h_coords[i], alpha_table[i]);
    return out;
}

Vec GysinExtension::alpha2_with(const std::vector<Vec>& alpha_tab, const PairBasis& sym2, const Vec& g2_coords) const {
    Vec out = zero_vec(chain.dim());
    for (int p = 0; p < sym2.size(); ++p) {
        if (g2_coords[p] == 0)
            continue;
        auto [i, j] = sym2.elems[p];
        add_scaled(out, g2_coords[p], chain_mul(alpha_tab[i], alpha_tab[j]));
    }
    return out;
}

Vec GysinExtension::alpha2(const PairBasis& sym2, const Vec& g2_coords) const {
    return alpha2_with(alpha_table, sym2, g2_coords);
}

Vec GysinExtension::gamma_canonical(const PairBasis& sym2, const Vec& e_coords) const {
    Vec a2 = alpha2(sym2, e_coords);
    if (!is_zero(theta_part(a2)))
        throw InvariantError("gamma_canonical: alpha^2 of an E-vector has a theta component");
    return embed_theta(omega_inverse(base_part(a2)));
}

int GysinExtension::expected_h_dim(int degree) const {
    auto dims = base.degree_dims();
    auto dim_of = [&](int d) { return dims.count(d) ? dims.at(d) : 0; };
    // rank of omega landing in this degree
    auto src = base.degree_indices(degree - omega_degree);
    int rank_in = 0;
    if (!src.empty()) {
        std::vector<Vec> cols;
        for (int i : src)
            cols.push_back(base.multiply(omega, base.basis_vec(i)));
        rank_in = span_of(base.dim(), cols).dim();
    }
    // kernel of omega on degree - theta_degree
    int ker = 0;
    auto ksrc = base.degree_indices(degree - theta_degree);
    if (!ksrc.empty()) {
        std::vector<Vec> cols;
        for (int i : ksrc)
            cols.push_back(base.multiply(omega, base.basis_vec(i)));
        ker = int(ksrc.size()) - span_of(base.dim(), cols).dim();
    }
    return dim_of(degree) - rank_in + ker;
}

GysinExtension extend(const GradedAlgebra& a, int omega_degree, Vec omega, bool require_poincare) {
    {
        auto bad = validate(a);
        if (!bad.empty())
            throw InputError("base algebra fails validation: " + bad.front());
    }
    if (omega_degree % 2 != 0 || omega_degree <= 0)
        throw InputError("omega must have positive even degree (odd-degree Euler classes give theta^2 != 0)");
    if (int(omega.size()) != a.dim())
        throw InputError("omega has the wrong length");
    for (int i = 0; i < a.dim(); ++i)
        if (omega[i] != 0 && a.degs[i] != omega_degree)
            throw InputError("omega is not homogeneous of the declared degree");
    std::optional<PoincareStructure> ps;
    if (require_poincare) {
        auto r = poincare_check(a);
        if (std::holds_alternative<std::string>(r))
            throw InputError("base algebra is not Poincare: " + std::get<std::string>(r));
        ps = std::get<PoincareStructure>(r);
    }

    GysinExtension g;
    g.base = a;
    g.omega_degree = omega_degree;
    g.omega = omega;
    g.theta_degree = omega_degree - 1;
    g.top_degree = a.formal_dim + g.theta_degree;
    const int m = a.dim();

    // Chain ring: basis elements, then theta * basis elements.
    GradedAlgebra& ch = g.chain;
    for (int i = 0; i < m; ++i) {
        ch.names.push_back(a.names[i]);
        ch.degs.push_back(a.degs[i]);
    }
    for (int i = 0; i < m; ++i) {
        ch.names.push_back("t{" + a.names[i] + "}");
        ch.degs.push_back(a.degs[i] + g.theta_degree);
    }
    ch.formal_dim = g.top_degree;
    ch.unit = a.unit;
    ch.init_table();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const Vec& p = a.basis_product(i, j);
            // x_i * x_j
            Vec xx = zero_vec(2 * m);
            std::copy(p.begin(), p.end(), xx.begin());
            ch.set_product_raw(i, j, xx);
            // (theta x_i) * x_j = theta(x_i x_j)
            Vec tx = zero_vec(2 * m);
            std::copy(p.begin(), p.end(), tx.begin() + m);
            ch.set_product_raw(m + i, j, tx);
            // x_i * (theta x_j) = (-1)^{|x_i|} theta(x_i x_j)
            Vec xt = zero_vec(2 * m);
            Rational s(parity_sign(a.degs[i]));
            for (int t = 0; t < m; ++t)
                xt[m + t] = s * p[t];
            ch.set_product_raw(i, m + j, xt);
            // (theta x_i) * (theta x_j) = 0
            ch.set_product_raw(m + i, m + j, zero_vec(2 * m));
        }

    // Differential.
    g.diff.assign(2 * m, zero_vec(2 * m));
    for (int i = 0; i < m; ++i) {
        Vec w = a.multiply(omega, a.basis_vec(i));
        Vec dv = zero_vec(2 * m);
        std::copy(w.begin(), w.end(), dv.begin());
        g.diff[m + i] = std::move(dv);
    }

    // Per-degree data: image, kernel, coker representatives.
    std::map<int, std::vector<int>> coker_reps;
    std::map<int, std::vector<Vec>> ker_basis;
    for (int d = 0; d <= a.formal_dim; ++d) {
        auto idx = a.degree_indices(d);
        if (idx.empty())
            continue;
        // omega: A^d -> A^{d+|omega|} as a block matrix
        auto tgt = a.degree_indices(d + omega_degree);
        Matrix block(int(tgt.size()), int(idx.size()));
        for (size_t c = 0; c < idx.size(); ++c) {
            Vec w = a.multiply(omega, a.basis_vec(idx[c]));
            for (size_t r = 0; r < tgt.size(); ++r)
                block(int(r), int(c)) = w[tgt[r]];
        }
        if (!tgt.empty())
            g.omega_solver_.emplace(d, LinearSolver(block));
        // kernel in base coordinates
        Subspace kb = kernel_basis(block);
        std::vector<Vec> kvecs;
        for (const Vec& kv : kb.basis) {
            Vec v = zero_vec(m);
            for (size_t c = 0; c < idx.size(); ++c)
                v[idx[c]] = kv[c];
            kvecs.push_back(std::move(v));
        }
        ker_basis[d] = kvecs;
        // kernel solver (block coordinates)
        if (!kvecs.empty()) {
            Matrix km(int(idx.size()), int(kvecs.size()));
            for (size_t c = 0; c < kvecs.size(); ++c)
                for (size_t r = 0; r < idx.size(); ++r)
                    km(int(r), int(c)) = kvecs[c][idx[r]];
            g.ker_solver_.emplace(d, LinearSolver(km));
        }
        // image of omega landing in degree d
        auto src = a.degree_indices(d - omega_degree);
        std::vector<Vec> im_block;
        if (!src.empty()) {
            for (int i : src) {
                Vec w = a.multiply(omega, a.basis_vec(i));
                Vec v(idx.size());
                for (size_t r = 0; r < idx.size(); ++r)
                    v[r] = w[idx[r]];
                im_block.push_back(std::move(v));
            }
        }
        Subspace im = span_of(int(idx.size()), im_block);
        Subspace comp = complement_in(im, full_space(int(idx.size())));
        std::vector<int> reps;
        for (const Vec& cv : comp.basis) {
            int lead = -1;
            for (size_t t = 0; t < cv.size(); ++t)
                if (cv[t] != 0) {
                    if (lead >= 0)
                        throw InvariantError("coker complement picked a non-standard vector");
                    lead = int(t);
                }
            reps.push_back(idx[lead]);
        }
        coker_reps[d] = reps;
        // class decomposition solver: columns = im basis then coker reps
        std::vector<Vec> cols;
        for (const Vec& v : im.basis)
            cols.push_back(v);
        for (int repi : reps) {
            Vec v = zero_vec(int(idx.size()));
            for (size_t r = 0; r < idx.size(); ++r)
                if (idx[r] == repi)
                    v[r] = 1;
            cols.push_back(std::move(v));
        }
        g.class_solver_.emplace(d, LinearSolver(Matrix::from_columns(int(idx.size()), cols)));
        // store image in full base coordinates
        std::vector<Vec> im_full;
        for (const Vec& v : im.basis) {
            Vec f = zero_vec(m);
            for (size_t r = 0; r < idx.size(); ++r)
                f[idx[r]] = v[r];
            im_full.push_back(std::move(f));
        }
        if (!im_full.empty())
            g.im_omega_[d] = Subspace{m, im_full};
    }

    // Cohomology basis: (degree, coker-first) ordering.
    struct HElem {
        int degree;
        bool theta;
        int pos;  // base index (coker) or kernel position (theta)
        int src_degree;
    };
    std::vector<HElem> helems;
    for (const auto& [d, reps] : coker_reps)
        for (int r : reps)
            helems.push_back({d, false, r, d});
    for (const auto& [d, kvecs] : ker_basis)
        for (size_t p = 0; p < kvecs.size(); ++p)
            helems.push_back({d + g.theta_degree, true, int(p), d});
    std::stable_sort(helems.begin(), helems.end(), [](const HElem& x, const HElem& y) {
        if (x.degree != y.degree)
            return x.degree < y.degree;
        return x.theta < y.theta;
    });

    GradedAlgebra& H = g.cohom;
    H.formal_dim = g.top_degree;
    for (const HElem& e : helems) {
        if (!e.theta) {
            H.names.push_back(a.names[e.pos]);
            H.degs.push_back(e.degree);
            g.h_is_theta.push_back(false);
            g.h_coker_base.push_back(e.pos);
            g.h_ker_rep.push_back({});
            g.h_of_coker_[e.degree].push_back(H.dim() - 1);
        } else {
            const Vec& rep = ker_basis.at(e.src_degree)[e.pos];
            H.names.push_back("t{" + render_base_combination(a, rep) + "}");
            H.degs.push_back(e.degree);
            g.h_is_theta.push_back(true);
            g.h_coker_base.push_back(-1);
            g.h_ker_rep.push_back(rep);
            g.h_of_ker_[e.degree].push_back(H.dim() - 1);
        }
    }
    // Unit: the degree-0 coker representative (im omega misses degree 0).
    {
        auto it = g.h_of_coker_.find(0);
        if (it == g.h_of_coker_.end() || it->second.empty())
            throw InvariantError("extension lost the unit");
        H.unit = it->second.front();
    }

    // Section alpha.
    for (int i = 0; i < H.dim(); ++i) {
        if (!g.h_is_theta[i])
            g.alpha_table.push_back(g.embed_base(a.basis_vec(g.h_coker_base[i])));
        else
            g.alpha_table.push_back(g.embed_theta(g.h_ker_rep[i]));
    }

    // Induced products.
    H.init_table();
    for (int i = 0; i < H.dim(); ++i)
        for (int j = 0; j < H.dim(); ++j) {
            if (g.h_is_theta[i] && g.h_is_theta[j]) {
                H.set_product_raw(i, j, zero_vec(H.dim()));
                continue;
            }
            Vec prod = g.chain_mul(g.alpha_table[i], g.alpha_table[j]);
            H.set_product_raw(i, j, g.project_class(prod));
        }

    // Orientation: theta * nu when the base is oriented.
    if (a.orientation) {
        Vec nu = a.basis_vec(*a.orientation);
        for (int i = 0; i < H.dim(); ++i)
            if (g.h_is_theta[i] && g.h_ker_rep[i] == nu)
                H.orientation = i;
    }

    {
        auto bad = validate(H);
        if (!bad.empty())
            throw InvariantError("constructed cohomology ring fails validation: " + bad.front());
    }
    if (require_poincare) {
        if (!H.orientation)
            throw InvariantError("extension of an oriented base lost its orientation");
        auto r = poincare_check(H);
        if (std::holds_alternative<std::string>(r))
            throw InputError("extension cohomology is not Poincare: " + std::get<std::string>(r));
    }
    return g;
}

}  // namespace bmt
