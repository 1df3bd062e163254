#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bmt/graded_algebra.hpp"

namespace bmt {

// Basis of a graded symmetric square: pairs (i,j) with i <= j, the diagonal
// (i,i) present only in even degree.  Ordered by (degree, i, j) so every
// downstream matrix is reproducible.
struct PairBasis {
    std::vector<std::pair<int, int>> elems;
    std::vector<int> degs;                       // per element
    std::map<std::pair<int, int>, int> index;    // stored pairs only
    std::map<int, std::vector<int>> by_degree;   // degree -> element ids (ascending)

    int size() const { return int(elems.size()); }
    static PairBasis build(const std::vector<int>& under_degs);

    // Accumulate c * (b_i . b_j) into out, canonicalizing the pair.
    void accumulate(Vec& out, int i, int j, const Rational& c, const std::vector<int>& under_degs) const;
    // Coordinates of the symmetric product (u . v) of two vectors.
    Vec pair_of_vectors(const Vec& u, const Vec& v, const std::vector<int>& under_degs) const;

    std::vector<int> ids_of_degree(int d) const;
};

// Basis of a graded symmetric power G^k as sorted index words with no
// repeated odd-degree letter.
struct WordBasis {
    int k = 0;
    std::vector<std::vector<int>> words;
    std::vector<int> degs;
    std::map<std::vector<int>, int> index;
    std::map<int, std::vector<int>> by_degree;

    int size() const { return int(words.size()); }
    static WordBasis build(const std::vector<int>& under_degs, int k);

    // Sorts the word with Koszul signs; nullopt when an odd letter repeats.
    static std::optional<std::pair<std::vector<int>, int>> canonical_word(std::vector<int> w,
                                                                          const std::vector<int>& under_degs);
    // (basis id, sign) of an arbitrary word, or nullopt when it dies.
    std::optional<std::pair<int, int>> locate(std::vector<int> w, const std::vector<int>& under_degs) const;
};

// E = ker(c), its complement D, and the symmetrisation bookkeeping needed by
// the tensor: everything indexed per degree.
struct ProductKernelData {
    PairBasis sym2;      // over the algebra basis
    PairBasis sym2sym2;  // over sym2 elements
    WordBasis g4;        // quadruple words over the algebra basis
    WordBasis g3;        // triple words

    std::map<int, std::vector<Vec>> e_basis;  // degree -> kernel vectors in global sym2 coords
    std::map<int, std::vector<int>> d_elems;  // degree -> sym2 element ids (greedy complement)

    // Flattened E enumeration: (degree, position) in (degree, position) order.
    std::vector<std::pair<int, int>> e_ids;
    std::map<std::pair<int, int>, int> e_id_of;

    int e_dim(int degree) const;
    const Vec& e_vec(int id) const;
    int e_degree(int id) const { return e_ids[id].first; }
    int total_e() const { return int(e_ids.size()); }
};

ProductKernelData product_kernel(const GradedAlgebra& h);

// Matrix of the full symmetrisation G2G2 -> G4 restricted to one degree.
Matrix symmetrize_to_g4_block(const ProductKernelData& pk, const GradedAlgebra& h, int degree);
// Column of the symmetrisation for a single G2G2 basis element, as sparse (g4 id, sign).
std::optional<std::pair<int, int>> g4_of_pairpair(const ProductKernelData& pk, const GradedAlgebra& h, int pp);

// Pair list for G2(E) in a given total degree: (e_id, e_id) with id1 <= id2,
// diagonal only in even degree.
std::vector<std::pair<int, int>> g2e_pairs(const ProductKernelData& pk, int degree);
// Expansion of one (e,e') pair into global sym2sym2 coordinates.
Vec g2e_pair_coords(const ProductKernelData& pk, int id1, int id2);

struct BBasisElem {
    int degree = 0;
    Vec pair_coeffs;  // over g2e_pairs(degree)
    Vec g22_coords;   // global sym2sym2 coordinates
};

// Basis of B^degree as the kernel of the symmetrisation restricted to G2(E).
std::vector<BBasisElem> b_basis(const ProductKernelData& pk, const GradedAlgebra& h, int degree);
// Reference route: intersect the span of G2(E) with K[G2G2] in ambient
// coordinates; used to cross-check b_basis.
Subspace b_basis_by_intersection(const ProductKernelData& pk, const GradedAlgebra& h, int degree);

}  // namespace bmt
