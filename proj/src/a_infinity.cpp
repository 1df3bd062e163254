#include "bmt/a_infinity.hpp"

#include <algorithm>

namespace bmt {

Vec AInftyAlgebra::m1_of(const Vec& v) const {
    Vec out = zero_vec(dim());
    if (!m1)
        return out;
    for (int i = 0; i < dim(); ++i)
        if (v[i] != 0)
            add_scaled(out, v[i], (*m1)[i]);
    return out;
}

int AInftyAlgebra::max_degree() const {
    int m = 0;
    for (int d : degs)
        m = std::max(m, d);
    return m;
}

namespace {

// Enumerates basis tuples of length p, calling fn on each.
template <typename F>
void for_each_tuple(int dim, int p, F&& fn) {
    std::vector<int> t(p, 0);
    while (true) {
        fn(t);
        int pos = p - 1;
        while (pos >= 0 && t[pos] == dim - 1)
            t[pos--] = 0;
        if (pos < 0)
            break;
        ++t[pos];
    }
}

int tuple_degree(const std::vector<int>& degs, const std::vector<int>& t, int from, int count) {
    int d = 0;
    for (int i = from; i < from + count; ++i)
        d += degs[t[i]];
    return d;
}

}  // namespace

// One structure-relation residual: sum over r+s+t = p of
// (-1)^{r+st} m_{r+t+1}(1^r ⊗ m_s ⊗ 1^t) with Koszul signs from moving m_s
// past the first r inputs.
static Vec relation_residual(const AInftyAlgebra& a, const std::vector<int>& tuple) {
    const int p = int(tuple.size());
    Vec res = zero_vec(a.dim());
    for (int r = 0; r <= p; ++r)
        for (int s = 1; r + s <= p; ++s) {
            const int t = p - r - s;
            const int outer = r + t + 1;
            if (outer > 2 || s > 2)
                continue;  // all higher operations vanish
            if (s == 1 && !a.m1)
                continue;
            // inner value
            Vec mid;
            if (s == 1)
                mid = (*a.m1)[tuple[r]];
            else
                mid = a.ring->basis_product(tuple[r], tuple[r + 1]);
            long long sign_exp = r + 1LL * s * t;
            sign_exp += 1LL * (2 - s) * tuple_degree(a.degs, tuple, 0, r);  // |m_s| past x_1..x_r
            Vec term;
            if (outer == 1) {
                term = std::move(mid);
            } else {  // outer == 2, exactly one flanking input
                if (r == 1)
                    term = a.m2_of(unit_vec(a.dim(), tuple[0]), mid);
                else
                    term = a.m2_of(mid, unit_vec(a.dim(), tuple[p - 1]));
            }
            add_scaled(res, Rational(parity_sign(sign_exp)), term);
        }
    return res;
}

std::optional<RelationFailure> verify_relations(const AInftyAlgebra& a, int p_max) {
    const int maxdeg = a.max_degree();
    for (int p = 1; p <= p_max; ++p) {
        std::optional<RelationFailure> hit;
        for_each_tuple(a.dim(), p, [&](const std::vector<int>& t) {
            if (hit)
                return;
            int td = tuple_degree(a.degs, t, 0, p);
            if (td + 3 - p < 0 || td + 3 - p > maxdeg)
                return;  // every term lands in an empty degree
            Vec r = relation_residual(a, t);
            if (!is_zero(r))
                hit = RelationFailure{p, t, r};
        });
        if (hit)
            return hit;
    }
    return std::nullopt;
}

Vec AInftyMorphism::f1_of(const Vec& v) const {
    Vec out = zero_vec(dst->dim());
    for (int i = 0; i < src->dim(); ++i)
        if (v[i] != 0)
            add_scaled(out, v[i], f1[i]);
    return out;
}

Vec AInftyMorphism::f2_of(const Vec& u, const Vec& v) const {
    Vec out = zero_vec(dst->dim());
    for (int i = 0; i < src->dim(); ++i) {
        if (u[i] == 0)
            continue;
        for (int j = 0; j < src->dim(); ++j) {
            if (v[j] == 0)
                continue;
            auto it = f2.find({i, j});
            if (it != f2.end())
                add_scaled(out, u[i] * v[j], it->second);
        }
    }
    return out;
}

Vec morphism_residual(const AInftyMorphism& f, const std::vector<int>& tuple) {
    const AInftyAlgebra& H = *f.src;
    const AInftyAlgebra& B = *f.dst;
    const int p = int(tuple.size());
    Vec res = zero_vec(B.dim());

    // Left side: f_{r+t+1}(1^r ⊗ m_s ⊗ 1^t); the source has m1 = 0.
    for (int r = 0; r <= p; ++r)
        for (int s = 2; r + s <= p; ++s) {
            const int t = p - r - s;
            const int outer = r + t + 1;
            if (s > 2 || outer > 2)
                continue;
            Vec mid = H.ring->basis_product(tuple[r], tuple[r + 1]);
            long long sign_exp = r + 1LL * s * t;  // |m_2| = 0: no Koszul crossing
            Vec term;
            if (outer == 1) {
                term = f.f1_of(mid);
            } else if (r == 1) {
                term = f.f2_of(unit_vec(H.dim(), tuple[0]), mid);
            } else {
                term = f.f2_of(mid, unit_vec(H.dim(), tuple[p - 1]));
            }
            add_scaled(res, Rational(parity_sign(sign_exp)), term);
        }

    // Right side, subtracted: m_r(f_{i1} ⊗ ... ⊗ f_{ir}) for r = 1, 2.
    if (p <= 2) {  // r = 1: m1(f_p)
        Vec fp;
        if (p == 1)
            fp = f.f1[tuple[0]];
        else {
            auto it = f.f2.find({tuple[0], tuple[1]});
            fp = it == f.f2.end() ? zero_vec(B.dim()) : it->second;
        }
        add_scaled(res, Rational(-1), B.m1_of(fp));
    }
    for (int i1 = 1; i1 <= 2 && i1 < p; ++i1) {  // r = 2
        int i2 = p - i1;
        if (i2 > 2)
            continue;
        auto value_of = [&](int from, int len) -> Vec {
            if (len == 1)
                return f.f1[tuple[from]];
            auto it = f.f2.find({tuple[from], tuple[from + 1]});
            return it == f.f2.end() ? zero_vec(B.dim()) : it->second;
        };
        Vec left = value_of(0, i1);
        Vec right = value_of(i1, i2);
        long long sign_exp = (i1 - 1);                                        // (-1)^s with s = (r-1)(i1-1)
        sign_exp += 1LL * (1 - i2) * tuple_degree(H.degs, tuple, 0, i1);      // f_{i2} past the first block
        add_scaled(res, Rational(-parity_sign(sign_exp)), B.m2_of(left, right));
    }
    return res;
}

namespace {

// gamma' as a linear map on E-vectors, by expanding in the kernel basis.
class GammaPrime {
  public:
    GammaPrime(const GysinExtension& g, const ProductKernelData& pk, const GammaTable& table)
        : g_(g), pk_(pk), table_(table) {}

    Vec operator()(const Vec& e_coords) const {
        if (is_zero(e_coords))
            return zero_vec(g_.chain.dim());
        std::optional<int> d;
        for (int q = 0; q < pk_.sym2.size(); ++q)
            if (e_coords[q] != 0) {
                if (d && *d != pk_.sym2.degs[q])
                    throw InvariantError("gamma on a non-homogeneous E-vector");
                d = pk_.sym2.degs[q];
            }
        auto it = solvers_.find(*d);
        if (it == solvers_.end()) {
            auto eb = pk_.e_basis.find(*d);
            if (eb == pk_.e_basis.end())
                throw InvariantError("vector outside E handed to gamma");
            it = solvers_.emplace(*d, LinearSolver(Matrix::from_columns(pk_.sym2.size(), eb->second))).first;
        }
        auto sol = it->second.solve(e_coords);
        if (!sol)
            throw InvariantError("vector outside E handed to gamma");
        Vec out = zero_vec(g_.chain.dim());
        for (size_t k = 0; k < sol->size(); ++k)
            if ((*sol)[k] != 0)
                add_scaled(out, (*sol)[k], table_[pk_.e_id_of.at({*d, int(k)})]);
        return out;
    }

  private:
    const GysinExtension& g_;
    const ProductKernelData& pk_;
    const GammaTable& table_;
    mutable std::map<int, LinearSolver> solvers_;
};

AInfinityCertificate verify_tables(const GysinExtension& g, std::vector<Vec> f1,
                                   std::map<std::pair<int, int>, Vec> f2, bool require_identity) {
    AInfinityCertificate cert;
    cert.f1 = std::move(f1);
    cert.f2 = std::move(f2);
    cert.ok = true;

    const GradedAlgebra& H = g.cohom;
    // f1 closed, inducing an isomorphism (the identity for our construction).
    std::vector<Vec> projected;
    for (int i = 0; i < H.dim(); ++i) {
        if (!g.chain_closed(cert.f1[i]))
            throw InvariantError("certificate f1 value is not closed");
        projected.push_back(g.project_class(cert.f1[i]));
    }
    if (require_identity) {
        for (int i = 0; i < H.dim(); ++i)
            if (projected[i] != H.basis_vec(i))
                throw InvariantError("certificate f1 does not induce the identity on cohomology");
    } else if (span_of(H.dim(), projected).dim() != H.dim()) {
        throw InvariantError("certificate f1 does not induce an isomorphism");
    }
    for (const auto& [key, val] : cert.f2)
        if (!is_zero(g.base_part(val)))
            throw InvariantError("certificate f2 leaves the theta ideal");

    AInftyAlgebra src{H.degs, &H, nullptr};
    AInftyAlgebra dst{g.chain.degs, &g.chain, &g.diff};
    AInftyMorphism f{&src, &dst, cert.f1, cert.f2};

    const int maxdeg = dst.max_degree();
    for (int p = 1; p <= 5; ++p) {
        ResidualSummary sum;
        sum.p = p;
        for_each_tuple(H.dim(), p, [&](const std::vector<int>& t) {
            int td = tuple_degree(H.degs, t, 0, p);
            if (td + 2 - p < 0 || td + 2 - p > maxdeg)
                return;  // both sides land in an empty degree
            ++sum.tuples;
            Vec r = morphism_residual(f, t);
            if (!is_zero(r)) {
                ++sum.nonzero;
                if (!cert.first_failure)
                    cert.first_failure = RelationFailure{p, t, r};
            }
        });
        if (sum.nonzero > 0)
            cert.ok = false;
        cert.residuals.push_back(sum);
    }
    return cert;
}

}  // namespace

AInfinityCertificate build_certificate(const GysinExtension& g, const ProductKernelData& pk,
                                       const UniformMassey& um) {
    const GradedAlgebra& H = g.cohom;
    GammaPrime gp(g, pk, um.gamma_prime);

    std::vector<Vec> f1 = g.alpha_table;
    std::map<std::pair<int, int>, Vec> f2;
    for (int x = 0; x < H.dim(); ++x)
        for (int y = 0; y < H.dim(); ++y) {
            // (1 . xy) - (x . y), an E-vector
            Vec e = zero_vec(pk.sym2.size());
            const Vec& prod = H.basis_product(x, y);
            for (int t = 0; t < H.dim(); ++t)
                if (prod[t] != 0)
                    pk.sym2.accumulate(e, H.unit, t, prod[t], H.degs);
            pk.sym2.accumulate(e, x, y, Rational(-1), H.degs);
            Vec val = gp(e);
            if (!is_zero(val))
                f2[{x, y}] = std::move(val);
        }
    return verify_tables(g, std::move(f1), std::move(f2), true);
}

AInfinityCertificate verify_certificate_tables(const GysinExtension& g, std::vector<Vec> f1,
                                               std::map<std::pair<int, int>, Vec> f2) {
    return verify_tables(g, std::move(f1), std::move(f2), false);
}

}  // namespace bmt
