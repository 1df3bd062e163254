#include "bmt/graded_algebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bmt {

void GradedAlgebra::init_table() {
    table.assign(size_t(dim()) * dim(), zero_vec(dim()));
    for (int i = 0; i < dim(); ++i) {
        set_product_raw(unit, i, basis_vec(i));
        set_product_raw(i, unit, basis_vec(i));
    }
}

void GradedAlgebra::set_product(int i, int j, Vec value) {
    if (i > j)
        throw InputError("set_product expects index-ordered pairs");
    set_product_raw(i, j, value);
    if (i != j) {
        Rational s(koszul(degs[i], degs[j]));
        set_product_raw(j, i, scaled(value, s));
    }
}

Vec GradedAlgebra::multiply(const Vec& u, const Vec& v) const {
    Vec out = zero_vec(dim());
    for (int i = 0; i < dim(); ++i) {
        if (u[i] == 0)
            continue;
        for (int j = 0; j < dim(); ++j) {
            if (v[j] == 0)
                continue;
            add_scaled(out, u[i] * v[j], basis_product(i, j));
        }
    }
    return out;
}

std::vector<int> GradedAlgebra::degree_indices(int d) const {
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i)
        if (degs[i] == d)
            out.push_back(i);
    return out;
}

std::map<int, int> GradedAlgebra::degree_dims() const {
    std::map<int, int> out;
    for (int d : degs)
        out[d]++;
    return out;
}

std::optional<int> GradedAlgebra::homogeneous_degree(const Vec& v) const {
    std::optional<int> d;
    for (int i = 0; i < dim(); ++i) {
        if (v[i] == 0)
            continue;
        if (d && *d != degs[i])
            return std::nullopt;
        d = degs[i];
    }
    return d;
}

Vec GradedAlgebra::degree_component(const Vec& v, int d) const {
    Vec out = zero_vec(dim());
    for (int i = 0; i < dim(); ++i)
        if (degs[i] == d)
            out[i] = v[i];
    return out;
}

namespace {

std::string describe(const GradedAlgebra& a, int i) {
    return a.names[i] + "(#" + std::to_string(i) + ", deg " + std::to_string(a.degs[i]) + ")";
}

}  // namespace

std::vector<std::string> validate(const GradedAlgebra& a) {
    std::vector<std::string> bad;
    const int m = a.dim();
    if (m == 0)
        return {"empty basis"};
    if (int(a.degs.size()) != m || a.table.size() != size_t(m) * m)
        return {"inconsistent table sizes"};
    std::set<std::string> seen;
    for (int i = 0; i < m; ++i) {
        if (!seen.insert(a.names[i]).second)
            bad.push_back("duplicate basis name '" + a.names[i] + "'");
        if (a.degs[i] < 0)
            bad.push_back("negative degree at " + describe(a, i));
    }
    if (a.unit < 0 || a.unit >= m) {
        bad.push_back("missing unit");
        return bad;
    }
    if (a.degs[a.unit] != 0)
        bad.push_back("unit must have degree 0");
    for (int i = 0; i < m; ++i)
        if (a.degs[i] == 0 && i != a.unit)
            bad.push_back("degree-0 component is not spanned by the unit: " + describe(a, i));
    if (a.orientation && (*a.orientation < 0 || *a.orientation >= m))
        bad.push_back("orientation index out of range");

    // Products land in the right total degree.
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const Vec& p = a.basis_product(i, j);
            if (int(p.size()) != m) {
                bad.push_back("product table entry has wrong length at (" + std::to_string(i) + "," + std::to_string(j) + ")");
                return bad;
            }
            for (int t = 0; t < m; ++t)
                if (p[t] != 0 && a.degs[t] != a.degs[i] + a.degs[j]) {
                    bad.push_back("product " + describe(a, i) + "*" + describe(a, j) + " leaves its degree");
                    break;
                }
        }

    // Unit acts as the identity.
    for (int i = 0; i < m; ++i) {
        if (a.basis_product(a.unit, i) != a.basis_vec(i) || a.basis_product(i, a.unit) != a.basis_vec(i))
            bad.push_back("unit does not act as identity on " + describe(a, i));
    }

    // Graded commutativity across the whole table.
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            Vec expect = scaled(a.basis_product(i, j), Rational(koszul(a.degs[i], a.degs[j])));
            if (a.basis_product(j, i) != expect)
                bad.push_back("graded commutativity fails at (" + describe(a, i) + ", " + describe(a, j) + ")");
        }

    // Associativity on all basis triples.
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                if (a.degs[i] + a.degs[j] + a.degs[k] > *std::max_element(a.degs.begin(), a.degs.end()))
                    continue;  // both sides land in a zero component
                Vec left = a.multiply(a.basis_product(i, j), a.basis_vec(k));
                Vec right = a.multiply(a.basis_vec(i), a.basis_product(j, k));
                if (left != right)
                    bad.push_back("associativity fails at (" + describe(a, i) + ", " + describe(a, j) + ", " +
                                  describe(a, k) + ")");
            }
    return bad;
}

Rational pairing_coefficient(const GradedAlgebra& a, int orientation, const Vec& top) {
    return top[orientation];
}

std::variant<PoincareStructure, std::string> poincare_check(const GradedAlgebra& a) {
    if (!a.orientation)
        throw InputError("poincare_check requires an orientation class");
    const int nu = *a.orientation;
    const int n = a.formal_dim;
    PoincareStructure ps;
    ps.dimension = n;
    ps.orientation = nu;
    std::set<int> degrees;
    for (int d : a.degs)
        degrees.insert(d);
    for (int d : degrees)
        degrees.insert(n - d);  // partners must be checked even when empty
    for (int d : degrees) {
        if (d > n - d)
            continue;
        auto rows = a.degree_indices(d);
        auto cols = a.degree_indices(n - d);
        if (rows.size() != cols.size())
            return "pairing is not square at degree " + std::to_string(std::min(d, n - d)) + " (dim H^" +
                   std::to_string(d) + " = " + std::to_string(rows.size()) + ", dim H^" + std::to_string(n - d) +
                   " = " + std::to_string(cols.size()) + ")";
        Matrix p(int(rows.size()), int(cols.size()));
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < cols.size(); ++j)
                p(int(i), int(j)) = pairing_coefficient(a, nu, a.basis_product(rows[i], cols[j]));
        if (rank_of(p) != int(rows.size()))
            return "degenerate pairing at degree " + std::to_string(d);
        ps.pairing[d] = p;
        if (d != n - d) {
            Matrix q(int(cols.size()), int(rows.size()));
            for (size_t i = 0; i < cols.size(); ++i)
                for (size_t j = 0; j < rows.size(); ++j)
                    q(int(i), int(j)) = pairing_coefficient(a, nu, a.basis_product(cols[i], rows[j]));
            ps.pairing[n - d] = q;
        }
    }
    return ps;
}

long long euler_characteristic(const GradedAlgebra& a) {
    long long chi = 0;
    for (int d : a.degs)
        chi += (d % 2 == 0) ? 1 : -1;
    return chi;
}

GradedAlgebra tensor_product(const GradedAlgebra& x, const GradedAlgebra& y) {
    GradedAlgebra t;
    t.formal_dim = x.formal_dim + y.formal_dim;
    const int mx = x.dim(), my = y.dim();
    auto id = [&](int i, int j) { return i * my + j; };
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j) {
            t.names.push_back(x.names[i] + "|" + y.names[j]);
            t.degs.push_back(x.degs[i] + y.degs[j]);
        }
    t.unit = id(x.unit, y.unit);
    if (x.orientation && y.orientation)
        t.orientation = id(*x.orientation, *y.orientation);
    t.init_table();
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j)
            for (int k = 0; k < mx; ++k)
                for (int l = 0; l < my; ++l) {
                    // (a⊗b)(c⊗d) = (-1)^{|b||c|} ac ⊗ bd
                    Rational s(koszul(y.degs[j], x.degs[k]));
                    const Vec& pa = x.basis_product(i, k);
                    const Vec& pb = y.basis_product(j, l);
                    Vec out = zero_vec(t.dim());
                    for (int u = 0; u < mx; ++u) {
                        if (pa[u] == 0)
                            continue;
                        for (int v = 0; v < my; ++v) {
                            if (pb[v] == 0)
                                continue;
                            out[id(u, v)] += s * pa[u] * pb[v];
                        }
                    }
                    t.set_product_raw(id(i, j), id(k, l), std::move(out));
                }
    return t;
}

}  // namespace bmt
