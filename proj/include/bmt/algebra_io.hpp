#pragma once

#include <map>
#include <string>

#include "bmt/graded_algebra.hpp"

namespace bmt {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Text format:
//
//   # comment
//   dimension: 2
//   basis:
//     one 0
//     a 1
//     b 1
//     ab 2
//   unit: one
//   orientation: ab
//   products:
//     a*b = ab
//
// Products are given for index-ordered pairs only; omitted pairs are zero,
// the flipped entries carry the Koszul sign.  Coefficients are rationals
// ("p/q" or "p"), unknown names and duplicate product lines are rejected.
GradedAlgebra parse_algebra(const std::string& text);
std::string serialize_algebra(const GradedAlgebra& a);

// "2*a + 1/2*b - c" over the given name table.
Vec parse_combination(const std::map<std::string, int>& names, int dim, const std::string& expr);
std::map<std::string, int> name_table(const std::vector<std::string>& names);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace bmt
