#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bmt/linalg.hpp"

namespace bmt {

// Finite-dimensional graded-commutative unital algebra over the rationals,
// given by a basis and a full structure-constant table.  The table is
// populated from index-ordered pairs; the flipped entries are derived with
// the Koszul sign, so file input cannot be inconsistent.  validate() still
// checks the whole table, which also catches deliberate mutations in tests.
struct GradedAlgebra {
    int formal_dim = 0;
    std::vector<std::string> names;
    std::vector<int> degs;
    int unit = -1;
    std::optional<int> orientation;
    std::vector<Vec> table;  // dense dim*dim table of coordinate vectors

    int dim() const { return int(names.size()); }
    const Vec& basis_product(int i, int j) const { return table[size_t(i) * dim() + j]; }

    // Sets (i,j) and derives (j,i) by graded commutativity.
    void set_product(int i, int j, Vec value);
    // Raw write of a single table entry (mutation hook for tests).
    void set_product_raw(int i, int j, Vec value) { table[size_t(i) * dim() + j] = std::move(value); }

    void init_table();  // all-zero products, unit row/col filled in

    Vec multiply(const Vec& u, const Vec& v) const;
    Vec basis_vec(int i) const { return unit_vec(dim(), i); }

    std::vector<int> degree_indices(int d) const;
    std::map<int, int> degree_dims() const;
    // Degree of a homogeneous vector; nullopt for 0 or mixed support.
    std::optional<int> homogeneous_degree(const Vec& v) const;
    // Restriction of v to a single degree.
    Vec degree_component(const Vec& v, int d) const;
};

std::vector<std::string> validate(const GradedAlgebra& a);

struct PoincareStructure {
    int dimension = 0;         // n
    int orientation = -1;      // basis index of the top class
    std::map<int, Matrix> pairing;  // degree i -> matrix of alpha_H(x*y) on H^i x H^{n-i}
};

// Poincaré class check: builds alpha_H = coefficient-of-orientation and
// verifies every pairing matrix is square and invertible.  Returns the
// failing degree's report otherwise.  Missing orientation is an input error.
std::variant<PoincareStructure, std::string> poincare_check(const GradedAlgebra& a);

// alpha_H applied to a top-degree vector: the coefficient of the orientation class.
Rational pairing_coefficient(const GradedAlgebra& a, int orientation, const Vec& top);

long long euler_characteristic(const GradedAlgebra& a);

// Graded tensor product with Koszul-signed products; orientation is the
// product of orientations when both factors carry one.
GradedAlgebra tensor_product(const GradedAlgebra& x, const GradedAlgebra& y);

}  // namespace bmt
