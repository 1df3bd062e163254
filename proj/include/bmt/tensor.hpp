#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <variant>
#include <vector>

#include "bmt/gysin.hpp"

namespace bmt {

// One evaluated B-basis vector with its value class.
struct BmValue {
    int degree = 0;
    Vec pair_coeffs;  // over the (e,e') pair list of this degree
    Vec g22_coords;   // the same vector in ambient G2G2 coordinates
    Vec value_class;  // H coordinates, degree-1 component
};

struct BianchiMasseyTensor {
    std::map<int, std::vector<BmValue>> values;
    std::map<int, std::vector<std::pair<int, int>>> pair_lists;  // per degree: (e_id, e_id)

    bool zero_at(int degree) const;
    bool zero_everywhere() const;
    const BmValue* first_nonzero(int degree) const;
    // Degrees other than `decision` carrying a nonzero value.
    std::vector<int> nonzero_degrees_besides(int decision) const;
};

// Chain values of a gamma choice per flattened E id.
using GammaTable = std::vector<Vec>;

GammaTable gamma_canonical_table(const GysinExtension& g, const ProductKernelData& pk);

// Evaluate the tensor with explicit section/gamma choices (the canonical
// entry point uses the stored section and canonical gamma).
BianchiMasseyTensor bm_tensor_with(const GysinExtension& g, const ProductKernelData& pk,
                                   const std::set<int>& degrees, const std::vector<Vec>& alpha_tab,
                                   const GammaTable& gamma_tab);
BianchiMasseyTensor bm_tensor(const GysinExtension& g, const ProductKernelData& pk, const std::set<int>& degrees);

// All degrees where B can carry a value mapping into nonzero cohomology.
std::set<int> tensor_degrees(const GysinExtension& g);

struct UniformMasseyValue {
    int degree = 0;
    Vec kernel_coords;  // over the (e_id, h) column list of this degree
    Vec value_class;
};

struct UniformMassey {
    GammaTable gamma;        // input gamma
    std::vector<Vec> eta;    // correction per E id (chain vectors)
    GammaTable gamma_prime;  // corrected gamma (equal to gamma when eta = 0)
    std::map<int, std::vector<std::pair<int, int>>> kernel_columns;  // degree -> (e_id, h index)
    std::map<int, std::vector<UniformMasseyValue>> values;           // evaluation of T (or T')
    bool all_zero = false;
};

// Values of the triple product for a given gamma, over every degree.
UniformMassey uniform_massey(const GysinExtension& g, const ProductKernelData& pk, const GammaTable& gamma_tab);

struct EtaRefusal {
    BmValue witness;  // the nonzero decision-degree value
};

// Lemma-style correction: requires H Poincaré and the decision-degree tensor
// to vanish; produces gamma' = gamma + eta with im gamma' in the theta ideal
// and the triple product identically zero (swept exhaustively).
std::variant<UniformMassey, EtaRefusal> eta_correct(const GysinExtension& g, const ProductKernelData& pk);

struct ChoiceIndependenceReport {
    int trials = 0;
    std::uint64_t seed = 0;
    int deviating_trials = 0;
    bool identical = false;
};

// Re-derives the tensor under randomized admissible (alpha, gamma) choices
// and checks bit-identical values; any deviation is an implementation bug.
ChoiceIndependenceReport choice_independence(const GysinExtension& g, const ProductKernelData& pk, int trials,
                                             std::uint64_t seed, const std::set<int>& degrees);

}  // namespace bmt
