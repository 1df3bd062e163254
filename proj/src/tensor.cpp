#include "bmt/tensor.hpp"

#include <algorithm>
#include <random>

namespace bmt {

bool BianchiMasseyTensor::zero_at(int degree) const {
    auto it = values.find(degree);
    if (it == values.end())
        return true;
    for (const BmValue& v : it->second)
        if (!is_zero(v.value_class))
            return false;
    return true;
}

bool BianchiMasseyTensor::zero_everywhere() const {
    for (const auto& [d, _] : values)
        if (!zero_at(d))
            return false;
    return true;
}

const BmValue* BianchiMasseyTensor::first_nonzero(int degree) const {
    auto it = values.find(degree);
    if (it == values.end())
        return nullptr;
    for (const BmValue& v : it->second)
        if (!is_zero(v.value_class))
            return &v;
    return nullptr;
}

std::vector<int> BianchiMasseyTensor::nonzero_degrees_besides(int decision) const {
    std::vector<int> out;
    for (const auto& [d, _] : values)
        if (d != decision && !zero_at(d))
            out.push_back(d);
    return out;
}

GammaTable gamma_canonical_table(const GysinExtension& g, const ProductKernelData& pk) {
    GammaTable t;
    for (int id = 0; id < pk.total_e(); ++id)
        t.push_back(g.gamma_canonical(pk.sym2, pk.e_vec(id)));
    return t;
}

std::set<int> tensor_degrees(const GysinExtension& g) {
    // B^m maps into H^{m-1}; degrees past the top are structurally zero.
    std::set<int> out;
    for (int m = 2; m <= g.top_degree + 1; ++m)
        out.insert(m);
    return out;
}

BianchiMasseyTensor bm_tensor_with(const GysinExtension& g, const ProductKernelData& pk,
                                   const std::set<int>& degrees, const std::vector<Vec>& alpha_tab,
                                   const GammaTable& gamma_tab) {
    BianchiMasseyTensor out;
    // alpha^2 of every flattened E vector, with the substituted section.
    std::vector<Vec> a2_of_e(pk.total_e());
    for (int id = 0; id < pk.total_e(); ++id)
        a2_of_e[id] = g.alpha2_with(alpha_tab, pk.sym2, pk.e_vec(id));

    for (int m : degrees) {
        auto pairs = g2e_pairs(pk, m);
        auto bb = b_basis(pk, g.cohom, m);
        out.pair_lists[m] = pairs;
        std::vector<BmValue>& vals = out.values[m];
        if (bb.empty())
            continue;
        // chain value of each contributing pair
        std::map<std::pair<int, int>, Vec> pair_value;
        for (const BBasisElem& b : bb) {
            Vec chain = zero_vec(g.chain.dim());
            for (size_t c = 0; c < pairs.size(); ++c) {
                if (b.pair_coeffs[c] == 0)
                    continue;
                auto key = pairs[c];
                auto it = pair_value.find(key);
                if (it == pair_value.end()) {
                    auto [k, l] = key;
                    Vec v = g.chain_mul(gamma_tab[k], a2_of_e[l]);
                    Rational s(parity_sign(static_cast<long long>(pk.e_degree(k)) * pk.e_degree(l)));
                    add_scaled(v, s, g.chain_mul(gamma_tab[l], a2_of_e[k]));
                    it = pair_value.emplace(key, std::move(v)).first;
                }
                add_scaled(chain, b.pair_coeffs[c], it->second);
            }
            if (!g.chain_closed(chain))
                throw InvariantError("tensor value is not closed on a B-basis vector");
            BmValue v;
            v.degree = m;
            v.pair_coeffs = b.pair_coeffs;
            v.g22_coords = b.g22_coords;
            v.value_class = g.project_class(chain);
            vals.push_back(std::move(v));
        }
    }
    return out;
}

BianchiMasseyTensor bm_tensor(const GysinExtension& g, const ProductKernelData& pk, const std::set<int>& degrees) {
    return bm_tensor_with(g, pk, degrees, g.alpha_table, gamma_canonical_table(g, pk));
}

namespace {

// Columns of K[E ⊗ H] in one degree with the symmetrisation matrix into G3.
struct EHBlock {
    std::vector<std::pair<int, int>> columns;  // (e_id, h index)
    std::vector<Vec> kernel;                   // kernel vectors over columns
};

EHBlock eh_kernel_block(const GysinExtension& g, const ProductKernelData& pk, int degree) {
    EHBlock blk;
    const GradedAlgebra& H = g.cohom;
    for (int id = 0; id < pk.total_e(); ++id) {
        int rest = degree - pk.e_degree(id);
        for (int h = 0; h < H.dim(); ++h)
            if (H.degs[h] == rest)
                blk.columns.emplace_back(id, h);
    }
    if (blk.columns.empty())
        return blk;
    auto rows_it = pk.g3.by_degree.find(degree);
    std::vector<int> rows = rows_it == pk.g3.by_degree.end() ? std::vector<int>{} : rows_it->second;
    std::map<int, int> row_of;
    for (size_t r = 0; r < rows.size(); ++r)
        row_of[rows[r]] = int(r);
    Matrix m(int(rows.size()), int(blk.columns.size()));
    for (size_t c = 0; c < blk.columns.size(); ++c) {
        auto [id, h] = blk.columns[c];
        const Vec& ev = pk.e_vec(id);
        for (int q = 0; q < pk.sym2.size(); ++q) {
            if (ev[q] == 0)
                continue;
            auto [i, j] = pk.sym2.elems[q];
            auto hit = pk.g3.locate({i, j, h}, g.cohom.degs);
            if (hit)
                m(row_of.at(hit->first), int(c)) += ev[q] * hit->second;
        }
    }
    blk.kernel = kernel_basis(m).basis;
    return blk;
}

// Sweep of the triple product for a given gamma table; records every value.
UniformMassey sweep_triple_product(const GysinExtension& g, const ProductKernelData& pk,
                                   const GammaTable& gamma_tab) {
    UniformMassey um;
    um.gamma = gamma_tab;
    um.gamma_prime = gamma_tab;
    um.all_zero = true;
    std::set<int> degrees;
    for (int id = 0; id < pk.total_e(); ++id)
        for (int h = 0; h < g.cohom.dim(); ++h)
            degrees.insert(pk.e_degree(id) + g.cohom.degs[h]);
    for (int m : degrees) {
        EHBlock blk = eh_kernel_block(g, pk, m);
        if (blk.columns.empty())
            continue;
        um.kernel_columns[m] = blk.columns;
        for (const Vec& kv : blk.kernel) {
            Vec chain = zero_vec(g.chain.dim());
            for (size_t c = 0; c < blk.columns.size(); ++c) {
                if (kv[c] == 0)
                    continue;
                auto [id, h] = blk.columns[c];
                add_scaled(chain, kv[c], g.chain_mul(gamma_tab[id], g.alpha_table[h]));
            }
            if (!g.chain_closed(chain))
                throw InvariantError("triple product value is not closed on a kernel element");
            UniformMasseyValue v;
            v.degree = m;
            v.kernel_coords = kv;
            v.value_class = g.project_class(chain);
            if (!is_zero(v.value_class))
                um.all_zero = false;
            um.values[m].push_back(std::move(v));
        }
    }
    return um;
}

int content_of_sym2(const GysinExtension& g, const ProductKernelData& pk, int sym2_id) {
    auto [i, j] = pk.sym2.elems[sym2_id];
    return int(g.h_is_theta[i]) + int(g.h_is_theta[j]);
}

int content_of_e(const GysinExtension& g, const ProductKernelData& pk, int e_id) {
    const Vec& v = pk.e_vec(e_id);
    int content = -1;
    for (int q = 0; q < pk.sym2.size(); ++q) {
        if (v[q] == 0)
            continue;
        int c = content_of_sym2(g, pk, q);
        if (content >= 0 && content != c)
            throw InvariantError("E-basis vector mixes theta content");
        content = c;
    }
    return content;
}

}  // namespace

UniformMassey uniform_massey(const GysinExtension& g, const ProductKernelData& pk, const GammaTable& gamma_tab) {
    // Sanity: gamma must satisfy d gamma = alpha^2 on every E element.
    for (int id = 0; id < pk.total_e(); ++id) {
        Vec a2 = g.alpha2(pk.sym2, pk.e_vec(id));
        if (g.chain_d(gamma_tab[id]) != a2)
            throw InputError("uniform_massey: gamma does not satisfy d(gamma) = alpha^2");
    }
    return sweep_triple_product(g, pk, gamma_tab);
}

std::variant<UniformMassey, EtaRefusal> eta_correct(const GysinExtension& g, const ProductKernelData& pk) {
    const GradedAlgebra& H = g.cohom;
    auto pc = poincare_check(H);
    if (std::holds_alternative<std::string>(pc))
        throw InputError("eta_correct requires a Poincare extension: " + std::get<std::string>(pc));
    const int orient = std::get<PoincareStructure>(pc).orientation;
    const int n = g.top_degree;

    GammaTable gamma = gamma_canonical_table(g, pk);
    BianchiMasseyTensor decision = bm_tensor(g, pk, {n + 1});
    if (const BmValue* bad = decision.first_nonzero(n + 1))
        return EtaRefusal{*bad};

    // --- mu on K[E ⊗ G2H] in the decision degree --------------------------
    std::vector<std::pair<int, int>> cols;  // (e_id, sym2 id)
    for (int id = 0; id < pk.total_e(); ++id) {
        int rest = n + 1 - pk.e_degree(id);
        for (int p : pk.sym2.ids_of_degree(rest))
            cols.emplace_back(id, p);
    }
    // E ⊗ D index set
    std::vector<std::pair<int, int>> ed;  // (e_id, sym2 id of a D element)
    std::map<std::pair<int, int>, int> ed_of;
    for (int id = 0; id < pk.total_e(); ++id) {
        int rest = n + 1 - pk.e_degree(id);
        auto it = pk.d_elems.find(rest);
        if (it == pk.d_elems.end())
            continue;
        for (int p : it->second) {
            ed_of[{id, p}] = int(ed.size());
            ed.emplace_back(id, p);
        }
    }

    std::vector<Vec> proj_rows;
    Vec phis;
    if (!cols.empty()) {
        auto rows_it = pk.g4.by_degree.find(n + 1);
        std::vector<int> rows = rows_it == pk.g4.by_degree.end() ? std::vector<int>{} : rows_it->second;
        std::map<int, int> row_of;
        for (size_t r = 0; r < rows.size(); ++r)
            row_of[rows[r]] = int(r);
        Matrix sigma(int(rows.size()), int(cols.size()));
        for (size_t c = 0; c < cols.size(); ++c) {
            auto [id, p] = cols[c];
            const Vec& ev = pk.e_vec(id);
            auto [k, l] = pk.sym2.elems[p];
            for (int q = 0; q < pk.sym2.size(); ++q) {
                if (ev[q] == 0)
                    continue;
                auto [i, j] = pk.sym2.elems[q];
                auto hit = pk.g4.locate({i, j, k, l}, H.degs);
                if (hit)
                    sigma(row_of.at(hit->first), int(c)) += ev[q] * hit->second;
            }
        }
        Subspace kernel = kernel_basis(sigma);

        // D-decomposition of each sym2 basis element, per degree.
        std::map<int, LinearSolver> decomp;  // degree -> [E basis | D units] solver
        auto decomp_for = [&](int d) -> LinearSolver& {
            auto it = decomp.find(d);
            if (it != decomp.end())
                return it->second;
            auto ids = pk.sym2.ids_of_degree(d);
            std::map<int, int> pos_of;
            for (size_t t = 0; t < ids.size(); ++t)
                pos_of[ids[t]] = int(t);
            std::vector<Vec> columns;
            if (pk.e_basis.count(d))
                for (const Vec& e : pk.e_basis.at(d)) {
                    Vec blockv(ids.size(), Rational(0));
                    for (size_t t = 0; t < ids.size(); ++t)
                        blockv[t] = e[ids[t]];
                    columns.push_back(std::move(blockv));
                }
            for (int p : pk.d_elems.at(d)) {
                Vec blockv(ids.size(), Rational(0));
                blockv[pos_of.at(p)] = 1;
                columns.push_back(std::move(blockv));
            }
            return decomp.emplace(d, LinearSolver(Matrix::from_columns(int(ids.size()), columns))).first->second;
        };

        // alpha^2 per sym2 element appearing in cols
        std::map<int, Vec> a2_of_p;
        for (auto& [id, p] : cols)
            if (!a2_of_p.count(p)) {
                auto [i, j] = pk.sym2.elems[p];
                a2_of_p[p] = g.chain_mul(g.alpha_table[i], g.alpha_table[j]);
            }

        for (const Vec& kv : kernel.basis) {
            // value of mu on this kernel vector
            Vec chain = zero_vec(g.chain.dim());
            for (size_t c = 0; c < cols.size(); ++c) {
                if (kv[c] == 0)
                    continue;
                auto [id, p] = cols[c];
                add_scaled(chain, kv[c], g.chain_mul(gamma[id], a2_of_p.at(p)));
            }
            if (!g.chain_closed(chain))
                throw InvariantError("mu value is not closed on a kernel element");
            Rational phi = g.project_class(chain)[orient];
            // projection to E ⊗ D coordinates
            Vec w = zero_vec(ed.size());
            for (size_t c = 0; c < cols.size(); ++c) {
                if (kv[c] == 0)
                    continue;
                auto [id, p] = cols[c];
                int d = pk.sym2.degs[p];
                auto ids = pk.sym2.ids_of_degree(d);
                std::map<int, int> pos_of;
                for (size_t t = 0; t < ids.size(); ++t)
                    pos_of[ids[t]] = int(t);
                Vec unit(ids.size(), Rational(0));
                unit[pos_of.at(p)] = 1;
                auto sol = decomp_for(d).solve(unit);
                if (!sol)
                    throw InvariantError("sym2 decomposition failed");
                int e_count = pk.e_basis.count(d) ? int(pk.e_basis.at(d).size()) : 0;
                const auto& delems = pk.d_elems.at(d);
                for (size_t t = 0; t < delems.size(); ++t) {
                    const Rational& coeff = (*sol)[e_count + t];
                    if (coeff != 0)
                        w[ed_of.at({id, delems[t]})] += kv[c] * coeff;
                }
            }
            proj_rows.push_back(std::move(w));
            phis.push_back(phi);
        }
    }

    // Eliminate (proj_rows | phis): zero rows must carry zero phi.
    std::vector<Vec> w_rows;
    Vec w_phis;
    {
        std::vector<Vec> rows = proj_rows;
        Vec ph = phis;
        size_t pivot_row = 0;
        for (size_t col = 0; col < ed.size() && pivot_row < rows.size(); ++col) {
            size_t pr = pivot_row;
            while (pr < rows.size() && rows[pr][col] == 0)
                ++pr;
            if (pr == rows.size())
                continue;
            std::swap(rows[pr], rows[pivot_row]);
            std::swap(ph[pr], ph[pivot_row]);
            Rational inv = Rational(1) / rows[pivot_row][col];
            for (auto& x : rows[pivot_row])
                x *= inv;
            ph[pivot_row] *= inv;
            for (size_t r = 0; r < rows.size(); ++r) {
                if (r == pivot_row || rows[r][col] == 0)
                    continue;
                Rational f = rows[r][col];
                add_scaled(rows[r], -f, rows[pivot_row]);
                ph[r] -= f * ph[pivot_row];
            }
            ++pivot_row;
        }
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r < pivot_row) {
                w_rows.push_back(rows[r]);
                w_phis.push_back(ph[r]);
            } else if (ph[r] != 0) {
                throw InvariantError("mu is ill-defined modulo K[E x E]: nonzero value on a dropped row");
            }
        }
    }

    // Solve for the extended functional on E ⊗ D with the theta-content rows.
    Vec phi_tilde = zero_vec(ed.size());
    {
        std::vector<Vec> eqs = w_rows;
        Vec rhs = w_phis;
        for (size_t t = 0; t < ed.size(); ++t) {
            auto [id, p] = ed[t];
            if (content_of_e(g, pk, id) > 0 || content_of_sym2(g, pk, p) > 0) {
                Vec row = zero_vec(ed.size());
                row[t] = 1;
                eqs.push_back(std::move(row));
                rhs.push_back(0);
            }
        }
        if (!ed.empty() && !eqs.empty()) {
            auto sol = solve_particular(Matrix::from_rows(eqs, int(ed.size())), rhs);
            if (!sol)
                throw InvariantError("no admissible extension of mu-bar exists");
            phi_tilde = *sol;
        }
    }

    // eta per E element by the Poincare pairing.
    const GradedAlgebra& Hc = g.cohom;
    std::vector<Vec> eta(pk.total_e());
    GammaTable gamma_prime = gamma;
    for (int id = 0; id < pk.total_e(); ++id) {
        int i = pk.e_degree(id);
        auto delems_it = pk.d_elems.find(n + 1 - i);
        std::vector<int> delems = delems_it == pk.d_elems.end() ? std::vector<int>{} : delems_it->second;
        auto hs = Hc.degree_indices(i - 1);
        if (int(delems.size()) != int(hs.size()))
            throw InvariantError("Poincare pairing blocks out of balance in the eta solve");
        eta[id] = zero_vec(g.chain.dim());
        if (hs.empty())
            continue;
        Matrix P(int(delems.size()), int(hs.size()));
        Vec rhs(delems.size());
        for (size_t q = 0; q < delems.size(); ++q) {
            auto [pi, pj] = pk.sym2.elems[delems[q]];
            const Vec& cq = Hc.basis_product(pi, pj);
            for (size_t j = 0; j < hs.size(); ++j)
                P(int(q), int(j)) = Hc.multiply(Hc.basis_vec(hs[j]), cq)[orient];
            auto key = ed_of.find({id, delems[q]});
            rhs[q] = key == ed_of.end() ? Rational(0) : -phi_tilde[key->second];
        }
        LinearSolver solver(P);
        if (solver.rank() != int(hs.size()))
            throw InvariantError("degenerate Poincare pairing in the eta solve");
        auto x = solver.solve(rhs);
        if (!x)
            throw InvariantError("eta solve failed");
        Vec cls = zero_vec(Hc.dim());
        for (size_t j = 0; j < hs.size(); ++j)
            cls[hs[j]] = (*x)[j];
        for (int h = 0; h < Hc.dim(); ++h)
            if (cls[h] != 0 && !g.h_is_theta[h])
                throw InvariantError("eta class left the theta part of cohomology");
        eta[id] = g.alpha(cls);  // theta * kernel representative, closed
        gamma_prime[id] = vec_add(gamma[id], eta[id]);
    }

    // Certify the three conditions exactly.
    for (int id = 0; id < pk.total_e(); ++id) {
        if (!is_zero(g.base_part(gamma_prime[id])))
            throw InvariantError("gamma' left the theta ideal");
        if (g.chain_d(gamma_prime[id]) != g.alpha2(pk.sym2, pk.e_vec(id)))
            throw InvariantError("gamma' fails d(gamma') = alpha^2");
    }
    UniformMassey um = sweep_triple_product(g, pk, gamma_prime);
    um.gamma = gamma;
    um.eta = eta;
    um.gamma_prime = gamma_prime;
    if (!um.all_zero)
        throw InvariantError("corrected triple product failed to vanish");
    // The corrected values must vanish at chain level, not just in cohomology.
    for (const auto& [d, vals] : um.values)
        for (const UniformMasseyValue& v : vals)
            if (!is_zero(v.value_class))
                throw InvariantError("corrected triple product failed to vanish");
    return um;
}

ChoiceIndependenceReport choice_independence(const GysinExtension& g, const ProductKernelData& pk, int trials,
                                             std::uint64_t seed, const std::set<int>& degrees) {
    ChoiceIndependenceReport rep;
    rep.trials = trials;
    rep.seed = seed;
    BianchiMasseyTensor reference = bm_tensor(g, pk, degrees);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> small(-3, 3);
    auto rand_base_vec = [&](int degree) {
        Vec v = zero_vec(g.base.dim());
        for (int i : g.base.degree_indices(degree))
            v[i] = small(rng);
        return v;
    };
    auto rand_ker_vec = [&](int degree) {
        // random element of ker(omega) in the given degree
        Vec v = zero_vec(g.base.dim());
        auto idx = g.base.degree_indices(degree);
        if (idx.empty())
            return v;
        std::vector<Vec> cols;
        for (int i : idx)
            cols.push_back(g.base.multiply(g.omega, g.base.basis_vec(i)));
        Subspace ker = kernel_basis(Matrix::from_columns(g.base.dim(), cols));
        for (const Vec& kb : ker.basis) {
            int c = small(rng);
            for (size_t t = 0; t < idx.size(); ++t)
                v[idx[t]] += c * kb[t];
        }
        return v;
    };

    for (int t = 0; t < trials; ++t) {
        // Random admissible section: coker representatives shift by im omega,
        // theta classes stay in the theta ideal (their sections are rigid).
        std::vector<Vec> alpha_tab = g.alpha_table;
        for (int i = 0; i < g.cohom.dim(); ++i) {
            if (g.h_is_theta[i])
                continue;
            int d = g.cohom.degs[i];
            Vec shift = g.base.multiply(g.omega, rand_base_vec(d - g.omega_degree));
            add_scaled(alpha_tab[i], Rational(1), g.embed_base(shift));
        }
        // Random gamma: particular inverse plus a kernel branch plus a closed shift.
        GammaTable gamma_tab(pk.total_e());
        for (int id = 0; id < pk.total_e(); ++id) {
            Vec a2 = g.alpha2_with(alpha_tab, pk.sym2, pk.e_vec(id));
            if (!is_zero(g.theta_part(a2)))
                throw InvariantError("alpha^2 of an E-vector left the base under a random section");
            Vec u = g.omega_inverse(g.base_part(a2));
            // random branch of the right inverse
            add_scaled(u, Rational(1), rand_ker_vec(pk.e_degree(id) - g.omega_degree));
            // closed shift: any closed chain of degree |e| - 1
            Vec closed_shift = g.embed_base(rand_base_vec(pk.e_degree(id) - 1));
            add_scaled(closed_shift, Rational(1),
                       g.embed_theta(rand_ker_vec(pk.e_degree(id) - 1 - g.theta_degree)));
            gamma_tab[id] = vec_add(g.embed_theta(u), closed_shift);
        }
        BianchiMasseyTensor redo = bm_tensor_with(g, pk, degrees, alpha_tab, gamma_tab);
        bool same = true;
        for (int m : degrees) {
            const auto& a = reference.values.count(m) ? reference.values.at(m) : std::vector<BmValue>{};
            const auto& b = redo.values.count(m) ? redo.values.at(m) : std::vector<BmValue>{};
            if (a.size() != b.size()) {
                same = false;
                break;
            }
            for (size_t s = 0; s < a.size(); ++s)
                if (a[s].value_class != b[s].value_class) {
                    same = false;
                    break;
                }
        }
        if (!same)
            ++rep.deviating_trials;
    }
    rep.identical = rep.deviating_trials == 0;
    return rep;
}

}  // namespace bmt
