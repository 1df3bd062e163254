#include "bmt/linalg.hpp"

#include <algorithm>
#include <cctype>

namespace bmt {
namespace {

// Incremental echelon of row vectors; reduce() returns the residue of v
// against the rows absorbed so far.
class Echelon {
  public:
    explicit Echelon(int ambient) : ambient_(ambient) {}

    Vec reduce(Vec v) const {
        for (const auto& [lead, row] : rows_) {
            if (v[lead] != 0)
                add_scaled(v, -v[lead], row);
        }
        return v;
    }

    // Returns true (and absorbs) when v is independent of the current rows.
    bool insert(Vec v) {
        v = reduce(std::move(v));
        int lead = -1;
        for (int i = 0; i < ambient_; ++i) {
            if (v[i] != 0) {
                lead = i;
                break;
            }
        }
        if (lead < 0)
            return false;
        Rational inv = Rational(1) / v[lead];
        for (auto& x : v)
            x *= inv;
        rows_.emplace(lead, std::move(v));
        return true;
    }

    int dim() const { return int(rows_.size()); }

  private:
    int ambient_;
    std::map<int, Vec> rows_;  // leading index -> reduced row
};

}  // namespace
}  // namespace bmt

namespace bmt {

Rational parse_rational(const std::string& s) {
    auto bad = [&]() -> Rational { throw InputError("malformed rational '" + s + "'"); };
    if (s.empty())
        return bad();
    size_t pos = 0;
    bool neg = false;
    if (s[pos] == '-') {
        neg = true;
        ++pos;
    }
    auto digits = [&](size_t& p) {
        size_t start = p;
        while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p])))
            ++p;
        return s.substr(start, p - start);
    };
    std::string num = digits(pos);
    if (num.empty())
        return bad();
    std::string den = "1";
    if (pos < s.size()) {
        if (s[pos] != '/')
            return bad();
        ++pos;
        den = digits(pos);
        if (den.empty() || pos != s.size())
            return bad();
    }
    BigInt n(num), d(den);
    if (d == 0)
        return bad();
    if (neg)
        n = -n;
    return Rational(n, d);
}

std::string to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1)
        s += "/" + denominator(q).str();
    return s;
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

Matrix Matrix::from_columns(int ambient, const std::vector<Vec>& columns) {
    Matrix m(ambient, int(columns.size()));
    for (int j = 0; j < int(columns.size()); ++j) {
        if (int(columns[j].size()) != ambient)
            throw InvariantError("from_columns: length mismatch");
        for (int i = 0; i < ambient; ++i)
            m(i, j) = columns[j][i];
    }
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, int ambient) {
    Matrix m(int(rows.size()), ambient);
    for (int i = 0; i < int(rows.size()); ++i) {
        if (int(rows[i].size()) != ambient)
            throw InvariantError("from_rows: length mismatch");
        for (int j = 0; j < ambient; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

Vec Matrix::apply(const Vec& x) const {
    if (int(x.size()) != cols)
        throw InvariantError("apply: size mismatch");
    Vec y = zero_vec(rows);
    for (int j = 0; j < cols; ++j) {
        if (x[j] == 0)
            continue;
        for (int i = 0; i < rows; ++i) {
            const Rational& m = (*this)(i, j);
            if (m != 0)
                y[i] += m * x[j];
        }
    }
    return y;
}

Vec Matrix::column(int j) const {
    Vec c(rows);
    for (int i = 0; i < rows; ++i)
        c[i] = (*this)(i, j);
    return c;
}

Vec Matrix::row(int i) const {
    Vec r(cols);
    for (int j = 0; j < cols; ++j)
        r[j] = (*this)(i, j);
    return r;
}

namespace {

// Shared elimination core; optionally carries a companion matrix through the
// same row operations (used by LinearSolver to record them).
void rref_inplace(Matrix& m, Matrix* companion, std::vector<int>& pivot_cols) {
    pivot_cols.clear();
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int pivot = -1;
        for (int i = row; i < m.rows; ++i) {
            if (m(i, col) != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0)
            continue;
        if (pivot != row) {
            for (int j = 0; j < m.cols; ++j)
                std::swap(m(pivot, j), m(row, j));
            if (companion)
                for (int j = 0; j < companion->cols; ++j)
                    std::swap((*companion)(pivot, j), (*companion)(row, j));
        }
        Rational inv = Rational(1) / m(row, col);
        if (inv != 1) {
            for (int j = 0; j < m.cols; ++j)
                m(row, j) *= inv;
            if (companion)
                for (int j = 0; j < companion->cols; ++j)
                    (*companion)(row, j) *= inv;
        }
        for (int i = 0; i < m.rows; ++i) {
            if (i == row)
                continue;
            Rational f = m(i, col);
            if (f == 0)
                continue;
            for (int j = 0; j < m.cols; ++j)
                m(i, j) -= f * m(row, j);
            if (companion)
                for (int j = 0; j < companion->cols; ++j)
                    (*companion)(i, j) -= f * (*companion)(row, j);
        }
        pivot_cols.push_back(col);
        ++row;
    }
}

}  // namespace

Rref rref(Matrix m) {
    Rref out;
    rref_inplace(m, nullptr, out.pivot_cols);
    out.rank = int(out.pivot_cols.size());
    out.r = std::move(m);
    return out;
}

int rank_of(const Matrix& m) { return rref(m).rank; }

Subspace span_of(int ambient, const std::vector<Vec>& vectors) {
    if (vectors.empty())
        return Subspace{ambient, {}};
    Rref rr = rref(Matrix::from_rows(vectors, ambient));
    Subspace s{ambient, {}};
    for (int i = 0; i < rr.rank; ++i)
        s.basis.push_back(rr.r.row(i));
    return s;
}

Subspace kernel_basis(const Matrix& m) {
    Rref rr = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : rr.pivot_cols)
        is_pivot[c] = true;
    std::vector<Vec> raw;
    for (int f = 0; f < m.cols; ++f) {
        if (is_pivot[f])
            continue;
        Vec v = zero_vec(m.cols);
        v[f] = 1;
        for (int r = 0; r < rr.rank; ++r)
            v[rr.pivot_cols[r]] = -rr.r(r, f);
        raw.push_back(std::move(v));
    }
    return span_of(m.cols, raw);
}

Subspace image_basis(const Matrix& m) {
    std::vector<Vec> cols;
    for (int j = 0; j < m.cols; ++j)
        cols.push_back(m.column(j));
    return span_of(m.rows, cols);
}

std::optional<Vec> solve_particular(const Matrix& m, const Vec& b) {
    if (int(b.size()) != m.rows)
        throw InputError("solve_particular: rhs length mismatch");
    Matrix aug(m.rows, m.cols + 1);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j)
            aug(i, j) = m(i, j);
        aug(i, m.cols) = b[i];
    }
    Rref rr = rref(std::move(aug));
    Vec x = zero_vec(m.cols);
    for (int r = 0; r < rr.rank; ++r) {
        if (rr.pivot_cols[r] == m.cols)
            return std::nullopt;  // pivot in the rhs column: inconsistent
        x[rr.pivot_cols[r]] = rr.r(r, m.cols);
    }
    return x;
}

bool contains(const Subspace& s, const Vec& v) {
    if (int(v.size()) != s.ambient)
        throw InputError("contains: ambient mismatch");
    if (is_zero(v))
        return true;
    if (s.basis.empty())
        return false;
    return solve_particular(Matrix::from_columns(s.ambient, s.basis), v).has_value();
}

bool subspace_contains(const Subspace& outer, const Subspace& inner) {
    for (const Vec& v : inner.basis)
        if (!contains(outer, v))
            return false;
    return true;
}

bool subspace_equal(const Subspace& u, const Subspace& v) {
    Subspace cu = span_of(u.ambient, u.basis);
    Subspace cv = span_of(v.ambient, v.basis);
    return cu.ambient == cv.ambient && cu.basis == cv.basis;
}

Subspace intersect(const Subspace& u, const Subspace& v) {
    if (u.ambient != v.ambient)
        throw InputError("intersect: ambient mismatch");
    if (u.basis.empty() || v.basis.empty())
        return Subspace{u.ambient, {}};
    Matrix m(u.ambient, u.dim() + v.dim());
    for (int j = 0; j < u.dim(); ++j)
        for (int i = 0; i < u.ambient; ++i)
            m(i, j) = u.basis[j][i];
    for (int j = 0; j < v.dim(); ++j)
        for (int i = 0; i < v.ambient; ++i)
            m(i, j + u.dim()) = -v.basis[j][i];
    Subspace ker = kernel_basis(m);
    std::vector<Vec> vectors;
    for (const Vec& w : ker.basis) {
        Vec x = zero_vec(u.ambient);
        for (int j = 0; j < u.dim(); ++j)
            add_scaled(x, w[j], u.basis[j]);
        vectors.push_back(std::move(x));
    }
    return span_of(u.ambient, vectors);
}

Subspace full_space(int ambient) {
    Subspace s{ambient, {}};
    for (int i = 0; i < ambient; ++i)
        s.basis.push_back(unit_vec(ambient, i));
    return s;
}

Subspace complement_in(const Subspace& u, const Subspace& w) {
    if (u.ambient != w.ambient)
        throw InputError("complement_in: ambient mismatch");
    if (!subspace_contains(w, u))
        throw InputError("complement_in: u is not contained in w");
    std::vector<Vec> candidates;
    if (w.dim() == w.ambient) {
        for (int i = 0; i < w.ambient; ++i)
            candidates.push_back(unit_vec(w.ambient, i));
    } else {
        candidates = w.basis;
    }
    // Greedy: grow an echelon seeded with u, keeping candidates that extend it.
    Echelon ech(u.ambient);
    for (const Vec& b : u.basis)
        ech.insert(b);
    Subspace out{u.ambient, {}};
    for (const Vec& c : candidates) {
        if (out.dim() + u.dim() == w.dim())
            break;
        if (ech.insert(c))
            out.basis.push_back(c);
    }
    if (u.dim() + out.dim() != w.dim())
        throw InvariantError("complement_in: failed to complete complement");
    return out;
}

LinearSolver::LinearSolver(const Matrix& m) : rows_(m.rows), cols_(m.cols) {
    r_ = m;
    ops_ = Matrix::identity(m.rows);
    rref_inplace(r_, &ops_, pivot_cols_);
    rank_ = int(pivot_cols_.size());
    kernel_ = kernel_basis(m);
}

std::optional<Vec> LinearSolver::solve(const Vec& b) const {
    if (int(b.size()) != rows_)
        throw InputError("LinearSolver::solve: rhs length mismatch");
    Vec c = ops_.apply(b);
    for (int i = rank_; i < rows_; ++i)
        if (c[i] != 0)
            return std::nullopt;
    Vec x = zero_vec(cols_);
    for (int r = 0; r < rank_; ++r)
        x[pivot_cols_[r]] = c[r];
    return x;
}

}  // namespace bmt
