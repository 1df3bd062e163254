#include "bmt/sym_powers.hpp"

#include <algorithm>

namespace bmt {

PairBasis PairBasis::build(const std::vector<int>& under_degs) {
    PairBasis pb;
    const int m = int(under_degs.size());
    std::vector<std::tuple<int, int, int>> sorted;  // (deg, i, j)
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            if (i == j && under_degs[i] % 2 != 0)
                continue;  // odd square is zero
            sorted.emplace_back(under_degs[i] + under_degs[j], i, j);
        }
    std::sort(sorted.begin(), sorted.end());
    for (auto& [d, i, j] : sorted) {
        pb.index[{i, j}] = pb.size();
        pb.by_degree[d].push_back(pb.size());
        pb.elems.emplace_back(i, j);
        pb.degs.push_back(d);
    }
    return pb;
}

void PairBasis::accumulate(Vec& out, int i, int j, const Rational& c, const std::vector<int>& under_degs) const {
    if (c == 0)
        return;
    if (i == j && under_degs[i] % 2 != 0)
        return;
    Rational v = c;
    if (i > j) {
        std::swap(i, j);
        v *= koszul(under_degs[i], under_degs[j]);
    }
    out[index.at({i, j})] += v;
}

Vec PairBasis::pair_of_vectors(const Vec& u, const Vec& v, const std::vector<int>& under_degs) const {
    Vec out = zero_vec(size());
    const int m = int(under_degs.size());
    for (int i = 0; i < m; ++i) {
        if (u[i] == 0)
            continue;
        for (int j = 0; j < m; ++j) {
            if (v[j] == 0)
                continue;
            accumulate(out, i, j, u[i] * v[j], under_degs);
        }
    }
    return out;
}

std::vector<int> PairBasis::ids_of_degree(int d) const {
    auto it = by_degree.find(d);
    return it == by_degree.end() ? std::vector<int>{} : it->second;
}

std::optional<std::pair<std::vector<int>, int>> WordBasis::canonical_word(std::vector<int> w,
                                                                          const std::vector<int>& under_degs) {
    // Insertion sort by adjacent transpositions, accumulating Koszul signs.
    int sign = 1;
    for (size_t i = 1; i < w.size(); ++i) {
        for (size_t j = i; j > 0 && w[j] < w[j - 1]; --j) {
            sign *= koszul(under_degs[w[j]], under_degs[w[j - 1]]);
            std::swap(w[j], w[j - 1]);
        }
    }
    for (size_t i = 1; i < w.size(); ++i)
        if (w[i] == w[i - 1] && under_degs[w[i]] % 2 != 0)
            return std::nullopt;
    return std::make_pair(std::move(w), sign);
}

WordBasis WordBasis::build(const std::vector<int>& under_degs, int k) {
    WordBasis wb;
    wb.k = k;
    const int m = int(under_degs.size());
    std::vector<std::pair<int, std::vector<int>>> sorted;  // (deg, word)
    std::vector<int> w(k, 0);
    // Enumerate non-decreasing words.
    auto rec = [&](auto&& self, int pos, int start) -> void {
        if (pos == k) {
            for (int i = 1; i < k; ++i)
                if (w[i] == w[i - 1] && under_degs[w[i]] % 2 != 0)
                    return;
            int d = 0;
            for (int x : w)
                d += under_degs[x];
            sorted.emplace_back(d, w);
            return;
        }
        for (int i = start; i < m; ++i) {
            w[pos] = i;
            self(self, pos + 1, i);
        }
    };
    rec(rec, 0, 0);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [d, word] : sorted) {
        wb.index[word] = wb.size();
        wb.by_degree[d].push_back(wb.size());
        wb.words.push_back(word);
        wb.degs.push_back(d);
    }
    return wb;
}

std::optional<std::pair<int, int>> WordBasis::locate(std::vector<int> w, const std::vector<int>& under_degs) const {
    auto c = canonical_word(std::move(w), under_degs);
    if (!c)
        return std::nullopt;
    auto it = index.find(c->first);
    if (it == index.end())
        throw InvariantError("word not present in WordBasis");
    return std::make_pair(it->second, c->second);
}

int ProductKernelData::e_dim(int degree) const {
    auto it = e_basis.find(degree);
    return it == e_basis.end() ? 0 : int(it->second.size());
}

const Vec& ProductKernelData::e_vec(int id) const {
    auto [d, pos] = e_ids[id];
    return e_basis.at(d)[pos];
}

ProductKernelData product_kernel(const GradedAlgebra& h) {
    ProductKernelData pk;
    pk.sym2 = PairBasis::build(h.degs);
    pk.sym2sym2 = PairBasis::build(pk.sym2.degs);
    pk.g4 = WordBasis::build(h.degs, 4);
    pk.g3 = WordBasis::build(h.degs, 3);

    // Kernel and complement of the product map, degree by degree.
    for (const auto& [d, ids] : pk.sym2.by_degree) {
        auto rows = h.degree_indices(d);
        if (rows.empty()) {
            if (!ids.empty()) {
                // Whole block multiplies to zero.
                std::vector<Vec> basis;
                for (size_t c = 0; c < ids.size(); ++c) {
                    Vec v = zero_vec(pk.sym2.size());
                    v[ids[c]] = 1;
                    basis.push_back(std::move(v));
                }
                pk.e_basis[d] = std::move(basis);
                pk.d_elems[d] = {};
            }
            continue;
        }
        Matrix c_block(int(rows.size()), int(ids.size()));
        for (size_t col = 0; col < ids.size(); ++col) {
            auto [i, j] = pk.sym2.elems[ids[col]];
            Vec p = h.basis_product(i, j);
            for (size_t r = 0; r < rows.size(); ++r)
                c_block(int(r), int(col)) = p[rows[r]];
        }
        Subspace ker = kernel_basis(c_block);
        std::vector<Vec> basis;
        for (const Vec& kv : ker.basis) {
            Vec v = zero_vec(pk.sym2.size());
            for (size_t col = 0; col < ids.size(); ++col)
                v[ids[col]] = kv[col];
            basis.push_back(std::move(v));
        }
        Subspace block_ker{int(ids.size()), ker.basis};
        Subspace comp = complement_in(block_ker, full_space(int(ids.size())));
        std::vector<int> d_ids;
        for (const Vec& cv : comp.basis) {
            int lead = -1;
            for (size_t t = 0; t < cv.size(); ++t)
                if (cv[t] != 0) {
                    if (lead >= 0)
                        throw InvariantError("greedy complement produced a non-standard vector");
                    lead = int(t);
                }
            d_ids.push_back(ids[lead]);
        }
        if (!basis.empty())
            pk.e_basis[d] = std::move(basis);
        pk.d_elems[d] = std::move(d_ids);
    }

    for (const auto& [d, basis] : pk.e_basis)
        for (size_t pos = 0; pos < basis.size(); ++pos) {
            pk.e_id_of[{d, int(pos)}] = int(pk.e_ids.size());
            pk.e_ids.emplace_back(d, int(pos));
        }
    return pk;
}

std::optional<std::pair<int, int>> g4_of_pairpair(const ProductKernelData& pk, const GradedAlgebra& h, int pp) {
    auto [p, q] = pk.sym2sym2.elems[pp];
    auto [i, j] = pk.sym2.elems[p];
    auto [k, l] = pk.sym2.elems[q];
    return pk.g4.locate({i, j, k, l}, h.degs);
}

Matrix symmetrize_to_g4_block(const ProductKernelData& pk, const GradedAlgebra& h, int degree) {
    auto cols = pk.sym2sym2.ids_of_degree(degree);
    auto rows_it = pk.g4.by_degree.find(degree);
    std::vector<int> rows = rows_it == pk.g4.by_degree.end() ? std::vector<int>{} : rows_it->second;
    std::map<int, int> row_of;
    for (size_t r = 0; r < rows.size(); ++r)
        row_of[rows[r]] = int(r);
    Matrix m(int(rows.size()), int(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) {
        auto hit = g4_of_pairpair(pk, h, cols[c]);
        if (hit)
            m(row_of.at(hit->first), int(c)) = hit->second;
    }
    return m;
}

std::vector<std::pair<int, int>> g2e_pairs(const ProductKernelData& pk, int degree) {
    std::vector<std::pair<int, int>> out;
    for (int id1 = 0; id1 < pk.total_e(); ++id1) {
        int d1 = pk.e_degree(id1);
        for (int id2 = id1; id2 < pk.total_e(); ++id2) {
            int d2 = pk.e_degree(id2);
            if (d1 + d2 != degree)
                continue;
            if (id1 == id2 && d1 % 2 != 0)
                continue;
            out.emplace_back(id1, id2);
        }
    }
    return out;
}

Vec g2e_pair_coords(const ProductKernelData& pk, int id1, int id2) {
    return pk.sym2sym2.pair_of_vectors(pk.e_vec(id1), pk.e_vec(id2), pk.sym2.degs);
}

std::vector<BBasisElem> b_basis(const ProductKernelData& pk, const GradedAlgebra& h, int degree) {
    auto pairs = g2e_pairs(pk, degree);
    if (pairs.empty())
        return {};
    auto rows_it = pk.g4.by_degree.find(degree);
    std::vector<int> rows = rows_it == pk.g4.by_degree.end() ? std::vector<int>{} : rows_it->second;
    std::map<int, int> row_of;
    for (size_t r = 0; r < rows.size(); ++r)
        row_of[rows[r]] = int(r);

    std::vector<Vec> expansions;
    Matrix m(int(rows.size()), int(pairs.size()));
    for (size_t c = 0; c < pairs.size(); ++c) {
        Vec g22 = g2e_pair_coords(pk, pairs[c].first, pairs[c].second);
        for (int pp = 0; pp < pk.sym2sym2.size(); ++pp) {
            if (g22[pp] == 0)
                continue;
            auto hit = g4_of_pairpair(pk, h, pp);
            if (hit)
                m(row_of.at(hit->first), int(c)) += g22[pp] * hit->second;
        }
        expansions.push_back(std::move(g22));
    }
    Subspace ker = kernel_basis(m);
    std::vector<BBasisElem> out;
    for (const Vec& kv : ker.basis) {
        BBasisElem b;
        b.degree = degree;
        b.pair_coeffs = kv;
        b.g22_coords = zero_vec(pk.sym2sym2.size());
        for (size_t c = 0; c < pairs.size(); ++c)
            add_scaled(b.g22_coords, kv[c], expansions[c]);
        out.push_back(std::move(b));
    }
    return out;
}

Subspace b_basis_by_intersection(const ProductKernelData& pk, const GradedAlgebra& h, int degree) {
    auto pairs = g2e_pairs(pk, degree);
    std::vector<Vec> span_vecs;
    for (auto& [a, b] : pairs)
        span_vecs.push_back(g2e_pair_coords(pk, a, b));
    Subspace g2e = span_of(pk.sym2sym2.size(), span_vecs);

    // K[G2G2] in this degree, embedded in global coordinates.
    auto cols = pk.sym2sym2.ids_of_degree(degree);
    Matrix sym = symmetrize_to_g4_block(pk, h, degree);
    Subspace ker_block = kernel_basis(sym);
    std::vector<Vec> ker_vecs;
    for (const Vec& kv : ker_block.basis) {
        Vec v = zero_vec(pk.sym2sym2.size());
        for (size_t c = 0; c < cols.size(); ++c)
            v[cols[c]] = kv[c];
        ker_vecs.push_back(std::move(v));
    }
    Subspace k{pk.sym2sym2.size(), ker_vecs};
    return intersect(g2e, k);
}

}  // namespace bmt
