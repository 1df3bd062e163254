#pragma once

#include <string>

#include "bmt/algebra_io.hpp"

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURES_DIR) + "/" + name;
}

inline bmt::GradedAlgebra load_fixture(const std::string& name) {
    return bmt::parse_algebra(bmt::read_file(fixture_path(name)));
}
