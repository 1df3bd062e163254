#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bmt/a_infinity.hpp"

namespace bmt {

// Ordered key-value document; rendering is byte-for-byte deterministic.
struct Report {
    std::vector<std::pair<std::string, std::string>> fields;
    void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }
    std::string str() const;
};

std::uint64_t fnv1a64(std::string_view data);
std::string digest_hex(std::string_view data);

// "2*x + 1/2*y" style rendering of a coordinate vector over named basis
// elements; "0" when empty.
std::string render_combination(const std::vector<std::string>& names, const Vec& coords);

std::string sym2_name(const ProductKernelData& pk, const GradedAlgebra& h, int sym2_id);
std::string g22_name(const ProductKernelData& pk, const GradedAlgebra& h, int g22_id);
std::string render_g22(const ProductKernelData& pk, const GradedAlgebra& h, const Vec& coords);
// Render a vector over the G2(E) coordinates of one degree, expanding the
// E-pairs into ambient G2G2 names.
std::string render_class(const GradedAlgebra& h, const Vec& coords);
// Combination over named G2 basis elements, e.g. "(a.b) - 2*(x.x)".
std::string render_sym2_vector(const ProductKernelData& pk, const GradedAlgebra& h, const Vec& coords);

// Certificate file: self-contained (embeds the base algebra) so the checker
// needs no other inputs.
std::string serialize_certificate(const GysinExtension& g, const AInfinityCertificate& cert,
                                  const std::string& base_digest, int sphere_dim, const std::string& euler_expr);

struct ParsedCertificate {
    std::string base_text;
    std::string base_digest;
    int sphere_dim = 0;
    std::string euler_expr;
    // chain combinations keyed by names; resolved against the rebuilt extension
    std::vector<std::pair<std::string, std::string>> f1_lines;  // H name -> chain expr
    std::vector<std::pair<std::string, std::string>> f2_lines;  // "x,y" -> chain expr
};

ParsedCertificate parse_certificate(const std::string& text);

}  // namespace bmt
