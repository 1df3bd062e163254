#include <random>

#include "bmt/linalg.hpp"
#include "doctest.h"

using namespace bmt;

namespace {

Matrix mat(int r, int c, std::initializer_list<int> entries) {
    Matrix m(r, c);
    auto it = entries.begin();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            m(i, j) = Rational(*it++);
    return m;
}

Vec vec(std::initializer_list<int> entries) {
    Vec v;
    for (int x : entries)
        v.push_back(Rational(x));
    return v;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-4/2") == Rational(-2));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(to_string(Rational(-1, 2)) == "-1/2");
    CHECK(to_string(Rational(4)) == "4");
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("1/-2"), InputError);
    CHECK_THROWS_AS(parse_rational("x"), InputError);
    CHECK_THROWS_AS(parse_rational("1.5"), InputError);
}

TEST_CASE("kernel basis") {
    CHECK(kernel_basis(Matrix::identity(2)).dim() == 0);
    CHECK(kernel_basis(Matrix(2, 3)).dim() == 3);
    Subspace k = kernel_basis(mat(1, 2, {1, 1}));
    REQUIRE(k.dim() == 1);
    CHECK(k.basis[0] == vec({1, -1}));
}

TEST_CASE("solve_particular") {
    Vec b = vec({5, -3});
    auto s = solve_particular(Matrix::identity(2), b);
    REQUIRE(s);
    CHECK(*s == b);

    auto s2 = solve_particular(mat(1, 2, {1, 1}), vec({2}));
    REQUIRE(s2);
    CHECK(*s2 == vec({2, 0}));  // pivot-first: free variable gets zero

    CHECK_FALSE(solve_particular(Matrix(2, 2), vec({1, 0})));
}

TEST_CASE("intersect") {
    Subspace u{2, {vec({1, 0}), vec({0, 1})}};
    CHECK(subspace_equal(intersect(u, u), u));

    Subspace l1{2, {vec({1, 0})}};
    Subspace l2{2, {vec({0, 1})}};
    CHECK(intersect(l1, l2).dim() == 0);

    Subspace p1{3, {vec({1, 0, 0}), vec({0, 1, 0})}};  // z = 0
    Subspace p2{3, {vec({1, 0, 0}), vec({0, 0, 1})}};  // y = 0
    Subspace line = intersect(p1, p2);
    REQUIRE(line.dim() == 1);
    CHECK(line.basis[0] == vec({1, 0, 0}));

    Subspace other{3, {vec({1, 0, 0})}};
    CHECK_THROWS_AS(intersect(l1, other), InputError);
}

TEST_CASE("complement_in") {
    Subspace w = full_space(2);
    Subspace u{2, {vec({1, 1})}};
    Subspace c = complement_in(u, w);
    REQUIRE(c.dim() == 1);
    CHECK(c.basis[0] == vec({1, 0}));  // greedy standard coordinate

    CHECK(complement_in(w, w).dim() == 0);
    CHECK(complement_in(Subspace{2, {}}, w).dim() == 2);

    Subspace not_inside{2, {vec({1, 0})}};
    Subspace small{2, {vec({0, 1})}};
    CHECK_THROWS_AS(complement_in(not_inside, small), InputError);
}

TEST_CASE("rank-nullity and exactness on random matrices") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> entry(-4, 4);
    std::uniform_int_distribution<int> size(1, 6);
    for (int trial = 0; trial < 60; ++trial) {
        int r = size(rng), c = size(rng);
        Matrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                m(i, j) = Rational(entry(rng));
        Subspace k = kernel_basis(m);
        CHECK(rank_of(m) + k.dim() == c);
        for (const Vec& v : k.basis)
            CHECK(is_zero(m.apply(v)));

        // solve_particular finds a solution exactly when b is in the image
        Vec x(c);
        for (int j = 0; j < c; ++j)
            x[j] = Rational(entry(rng));
        Vec b = m.apply(x);
        auto s = solve_particular(m, b);
        REQUIRE(s);
        CHECK(m.apply(*s) == b);  // exact residual

        // rank raise detection
        Vec b2(r);
        for (int i = 0; i < r; ++i)
            b2[i] = Rational(entry(rng));
        auto s2 = solve_particular(m, b2);
        Matrix aug(r, c + 1);
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j)
                aug(i, j) = m(i, j);
            aug(i, c) = b2[i];
        }
        CHECK(s2.has_value() == (rank_of(aug) == rank_of(m)));
    }
}

TEST_CASE("complement direct sum property") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> entry(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
        int ambient = 1 + trial % 6;
        std::vector<Vec> vs;
        for (int i = 0; i < 1 + trial % 3; ++i) {
            Vec v(ambient);
            for (int j = 0; j < ambient; ++j)
                v[j] = Rational(entry(rng));
            vs.push_back(v);
        }
        Subspace u = span_of(ambient, vs);
        Subspace c = complement_in(u, full_space(ambient));
        CHECK(u.dim() + c.dim() == ambient);
        CHECK(intersect(u, c).dim() == 0);
        std::vector<Vec> all = u.basis;
        all.insert(all.end(), c.basis.begin(), c.basis.end());
        CHECK(span_of(ambient, all).dim() == ambient);
    }
}

TEST_CASE("LinearSolver matches solve_particular") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> entry(-4, 4);
    for (int trial = 0; trial < 30; ++trial) {
        int r = 1 + trial % 5, c = 1 + (trial * 3) % 5;
        Matrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                m(i, j) = Rational(entry(rng));
        LinearSolver solver(m);
        CHECK(solver.rank() == rank_of(m));
        for (int k = 0; k < 4; ++k) {
            Vec b(r);
            for (int i = 0; i < r; ++i)
                b[i] = Rational(entry(rng));
            auto a = solver.solve(b);
            auto e = solve_particular(m, b);
            CHECK(a.has_value() == e.has_value());
            if (a && e)
                CHECK(*a == *e);
        }
    }
}
