#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmt/graded_algebra.hpp"
#include "bmt/sym_powers.hpp"

namespace bmt {

// Chain-level extension A_theta = A ⊕ θA with dθ = ω over a base with
// trivial differential, together with its cohomology ring
// coker ω ⊕ θ ker ω and the canonical bookkeeping maps.
//
// Chain coordinates: indices [0, m) are the base basis, [m, 2m) are θ·basis.
struct GysinExtension {
    GradedAlgebra base;
    int omega_degree = 0;
    Vec omega;        // base coordinates, homogeneous of omega_degree
    int theta_degree = 0;

    GradedAlgebra chain;        // the extension as a graded ring
    std::vector<Vec> diff;      // d on chain basis elements

    GradedAlgebra cohom;        // H_theta with induced products
    std::vector<bool> h_is_theta;
    std::vector<int> h_coker_base;  // base index of the representative, or -1
    std::vector<Vec> h_ker_rep;     // kernel representative (base coords), or empty
    std::vector<Vec> alpha_table;   // section H -> closed chains

    int top_degree = 0;  // base formal_dim + theta_degree

    // --- chain-level operations -------------------------------------------
    Vec chain_mul(const Vec& u, const Vec& v) const { return chain.multiply(u, v); }
    Vec chain_d(const Vec& u) const;
    bool chain_closed(const Vec& u) const { return is_zero(chain_d(u)); }
    bool chain_exact(const Vec& u) const;

    Vec base_part(const Vec& chain_vec) const;
    Vec theta_part(const Vec& chain_vec) const;       // y with chain = x + θy
    Vec embed_base(const Vec& base_vec) const;
    Vec embed_theta(const Vec& base_vec) const;       // θ·v

    // Right inverse of multiplication by ω, pivot-first, zero off the image.
    // Input must be exact (a base-space vector inside im ω).
    Vec omega_inverse(const Vec& base_vec) const;

    // Class of a closed chain vector in cohomology coordinates.
    Vec project_class(const Vec& chain_vec) const;

    Vec alpha(const Vec& h_coords) const;   // section on arbitrary classes
    // α² on a G2(H) coordinate vector.
    Vec alpha2(const PairBasis& sym2, const Vec& g2_coords) const;
    // Same with a substituted section table (used by the choice tests).
    Vec alpha2_with(const std::vector<Vec>& alpha_tab, const PairBasis& sym2, const Vec& g2_coords) const;

    // Canonical γ = θ ∘ ω^{-1} ∘ α² on an E-vector in G2(H) coordinates.
    Vec gamma_canonical(const PairBasis& sym2, const Vec& e_coords) const;

    // Dimension of H_theta in one degree from the rank-nullity data
    // (independent of the constructed ring; used as a cross-check).
    int expected_h_dim(int degree) const;

  private:
    friend GysinExtension extend(const GradedAlgebra&, int, Vec, bool);
    std::map<int, LinearSolver> omega_solver_;   // source degree -> solver for ω·u = v
    std::map<int, LinearSolver> class_solver_;   // degree -> [im ω | coker reps] decomposition
    std::map<int, LinearSolver> ker_solver_;     // degree -> kernel-basis coordinates
    std::map<int, Subspace> im_omega_;           // per target degree
    std::map<int, std::vector<int>> coker_reps_; // per degree: base indices
    std::map<int, std::vector<Vec>> ker_basis_;  // per degree: kernel vectors
    std::map<int, std::vector<int>> h_of_coker_; // degree -> H ids
    std::map<int, std::vector<int>> h_of_ker_;   // degree (of theta class) -> H ids
};

// Builds the extension.  ω must be homogeneous of positive even degree (the
// odd-|ω| regime, where θ² ≠ 0, is rejected).  With require_poincare the
// base must pass poincare_check; the cohomology ring is then oriented by θ·ν
// and verified Poincaré of dimension formal_dim + |θ|.
GysinExtension extend(const GradedAlgebra& a, int omega_degree, Vec omega, bool require_poincare);

}  // namespace bmt
