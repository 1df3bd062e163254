#pragma once

#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "bmt/a_infinity.hpp"

namespace bmt {

enum class Outcome { Formal, NonFormal };

enum class Reason {
    EvenSphere,
    ZeroTensorCertificate,
    NonzeroTensor,
    EulerCharZero,
    SingleGenerator,
    OddClass,
    ProductKernel,
    HLObstruction,
};

std::string reason_name(Reason r);

// Machine-checkable witness: sum of coeff * (u . v) with u, v E-vectors in
// the G2 coordinates of the evaluation extension's cohomology.
struct WitnessData {
    std::vector<std::tuple<Rational, Vec, Vec>> pairs;
};

// Evaluates the tensor formula on a witness element and returns its class.
Vec evaluate_witness(const GysinExtension& g, const ProductKernelData& pk, const WitnessData& data);

struct Witness {
    int degree = 0;
    std::string element;  // rendered combination of G2G2 basis names
    std::string value;    // rendered class
    Vec value_class;      // coordinates in the evaluation extension's cohomology
    std::string note;
    WitnessData data;
};

struct FormalityVerdict {
    Outcome outcome = Outcome::Formal;
    Reason reason = Reason::EvenSphere;
    std::optional<Witness> witness;
    std::shared_ptr<AInfinityCertificate> certificate;
    std::shared_ptr<GysinExtension> extension;
    std::shared_ptr<ProductKernelData> kernel_data;
    std::shared_ptr<BianchiMasseyTensor> tensor;
    std::vector<std::string> findings;
};

struct BundleSpec {
    const GradedAlgebra* base = nullptr;
    int sphere_dim = 0;
    Vec euler;  // base coordinates, degree sphere_dim + 1; zero = trivial class
    bool base_formal_attested = false;
};

// Verdict for an orientable sphere bundle over an attested-formal base:
// even fibers are always formal; odd fibers are decided by the tensor in
// the top degree, with a certificate on the formal side and a witness on
// the other.  Off-degree nonzero values are attached as flagged findings.
FormalityVerdict sphere_bundle_formality(const BundleSpec& spec);

// K[x]/(x^p) detection: (generator degree, p), or nullopt.
std::optional<std::pair<int, int>> single_generator_check(const GradedAlgebra& h);

// Unit-tangent-bundle classification over an attested-formal Poincaré base.
FormalityVerdict utm_classify(const GradedAlgebra& h);

struct HLInput {
    const GradedAlgebra* h = nullptr;
    Vec omega;
    int omega_degree = 0;  // = 2r
    int r = 0;
    std::optional<std::vector<std::pair<Vec, Vec>>> decomposition;
};

struct HLTranscript {
    bool applicable = false;
    std::vector<std::pair<Vec, Vec>> decomposition;
    int s = -1;
    std::string detail;  // rank computations or the failed condition
};

struct HLResult {
    bool non_formal = false;  // false = NotApplicable (never a formality claim)
    HLTranscript transcript;
};

// One-directional obstruction for circle/odd-sphere bundles with a reducible
// Euler class of degree 2r, r odd; degree 0 mod 4 inputs are rejected.
HLResult hl_obstruction(const HLInput& inp);

struct HLCheckRow {
    int i = 0;
    bool iso = false;
    int dim_low = 0, dim_high = 0, rank = 0;
};
struct HLCheckReport {
    bool all = true;
    std::vector<HLCheckRow> rows;
};

// Hard-Lefschetz table: multiplication by omega^{n-i} from H^i to H^{2n-i}.
HLCheckReport hard_lefschetz_check(const GradedAlgebra& h, const Vec& omega2);

}  // namespace bmt
