#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bmt/rational.hpp"

namespace bmt {

// Dense exact-rational matrix, row major.
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<Rational> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c), Rational(0)) {}

    Rational& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
    const Rational& operator()(int i, int j) const { return a[size_t(i) * cols + j]; }

    static Matrix identity(int n);
    static Matrix from_columns(int ambient, const std::vector<Vec>& columns);
    static Matrix from_rows(const std::vector<Vec>& rows, int ambient);

    Vec apply(const Vec& x) const;        // m * x
    Vec column(int j) const;
    Vec row(int i) const;
    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

// Reduced row echelon form with deterministic pivoting: leftmost nonzero
// column, topmost available row.
struct Rref {
    Matrix r;
    std::vector<int> pivot_cols;  // one per pivot row, increasing
    int rank = 0;
};
Rref rref(Matrix m);

struct Subspace {
    int ambient = 0;
    std::vector<Vec> basis;  // linearly independent, each of length ambient

    int dim() const { return int(basis.size()); }
};

// Canonical basis (reduced echelon rows) of the span of the given vectors.
Subspace span_of(int ambient, const std::vector<Vec>& vectors);

int rank_of(const Matrix& m);

// Canonical (reduced echelon) basis of the null space.
Subspace kernel_basis(const Matrix& m);

// Canonical basis of the column space.
Subspace image_basis(const Matrix& m);

// Some v with m*v = b; free variables are set to zero in reduced echelon
// order.  Empty when b is outside the image.
std::optional<Vec> solve_particular(const Matrix& m, const Vec& b);

bool contains(const Subspace& s, const Vec& v);
bool subspace_contains(const Subspace& outer, const Subspace& inner);
bool subspace_equal(const Subspace& u, const Subspace& v);

Subspace intersect(const Subspace& u, const Subspace& v);

// Deterministic complement c with u + c = w, u ∩ c = 0.  When w spans the
// whole ambient space the candidates are the standard coordinate vectors in
// index order; otherwise w's basis vectors are scanned in order.
Subspace complement_in(const Subspace& u, const Subspace& w);
Subspace full_space(int ambient);

// Reusable exact solver for repeated systems with one matrix: factors once,
// then each solve is a matrix-vector product plus back-substitution.
class LinearSolver {
  public:
    LinearSolver() = default;
    explicit LinearSolver(const Matrix& m);

    std::optional<Vec> solve(const Vec& b) const;
    int rank() const { return rank_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Subspace& kernel() const { return kernel_; }

  private:
    int rows_ = 0, cols_ = 0, rank_ = 0;
    Matrix r_;    // rref of m
    Matrix ops_;  // row operations: ops_ * m = r_
    std::vector<int> pivot_cols_;
    Subspace kernel_;
};

}  // namespace bmt
