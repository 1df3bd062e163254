#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bmt/tensor.hpp"

namespace bmt {

// A finite-basis A-infinity algebra with m1 (optional) and m2 given by
// tables and every higher operation zero: exactly the shape a CDGA or a
// cohomology ring takes.
struct AInftyAlgebra {
    std::vector<int> degs;
    const GradedAlgebra* ring = nullptr;     // m2: basis products
    const std::vector<Vec>* m1 = nullptr;    // per basis element; null = zero

    int dim() const { return int(degs.size()); }
    Vec m1_of(const Vec& v) const;
    Vec m2_of(const Vec& u, const Vec& v) const { return ring->multiply(u, v); }
    int max_degree() const;
};

struct RelationFailure {
    int p = 0;
    std::vector<int> tuple;
    Vec residual;
};

// Checks the structure relations for all p <= p_max on all basis tuples;
// for a CDGA this is d^2 = 0, Leibniz and associativity.  Returns the first
// failing tuple.
std::optional<RelationFailure> verify_relations(const AInftyAlgebra& a, int p_max);

// Morphism with f1, f2 tables and f_{>=3} = 0 from (H, m2) into a CDGA.
struct AInftyMorphism {
    const AInftyAlgebra* src = nullptr;
    const AInftyAlgebra* dst = nullptr;
    std::vector<Vec> f1;
    std::map<std::pair<int, int>, Vec> f2;

    Vec f1_of(const Vec& v) const;
    Vec f2_of(const Vec& u, const Vec& v) const;
};

// Residual of the morphism equation of arity p on one source tuple
// (left-hand side minus right-hand side, a dst chain vector).
Vec morphism_residual(const AInftyMorphism& f, const std::vector<int>& tuple);

struct ResidualSummary {
    int p = 0;
    long long tuples = 0;
    long long nonzero = 0;
};

struct AInfinityCertificate {
    std::vector<Vec> f1;                      // chain values per H basis element
    std::map<std::pair<int, int>, Vec> f2;    // nonzero entries only
    std::vector<ResidualSummary> residuals;   // p = 1..5
    bool ok = false;
    std::optional<RelationFailure> first_failure;
};

// Assembles f1 = alpha, f2(x,y) = gamma'((1 . xy) - (x . y)) from a
// corrected triple product and verifies the morphism equations for p <= 5.
// The preconditions guarantee success; any nonzero residual is a bug.
AInfinityCertificate build_certificate(const GysinExtension& g, const ProductKernelData& pk,
                                       const UniformMassey& um);

// Re-verification from the tables alone (no alpha/gamma reconstruction):
// f1 closed and inducing an isomorphism, im f2 inside the theta ideal, and
// the full residual sweep.
AInfinityCertificate verify_certificate_tables(const GysinExtension& g, std::vector<Vec> f1,
                                               std::map<std::pair<int, int>, Vec> f2);

}  // namespace bmt
