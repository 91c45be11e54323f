#pragma once

// Matrix interchange format: JSON objects {"schema":1,"n":N,"re":[[..]],
// "im":[[..]]} with parallel real and imaginary arrays. Emission always
// writes both arrays with %.17g entries, so a write/parse round trip is
// exact. Structural problems raise parse_error; semantic checks (density,
// Hermitian) are left to callers.

#include <string>
#include <vector>

#include "modent/types.hpp"

namespace modent {

CMat parse_matrix_json(const std::string& text);
CMat read_matrix_json(const std::string& path);

std::string matrix_to_json(const CMat& m);
void write_matrix_json(const std::string& path, const CMat& m);

// Generator lists {"schema":1,"generators":[{"n":..,"re":..,"im":..},..]}.
std::vector<CMat> parse_generators_json(const std::string& text);
std::vector<CMat> read_generators_json(const std::string& path);

// Shortest text that parses back to the identical double (%.17g).
std::string format_double(double x);

}  // namespace modent
