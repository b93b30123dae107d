#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cproots/numerics.hpp"

namespace cproots {

// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

// Parse errors are reported as InvalidInput with the parser's position.
nlohmann::json read_json_file(const std::string& path);
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
std::string read_text_file(const std::string& path);

void write_json_file(const std::string& path, const nlohmann::json& j);

// Probability list from "(1/2,1/3,1/6)", "[0.5,0.5]" or a JSON file.
std::vector<double> parse_probabilities(const std::string& spec);
double parse_rational(const std::string& token);

}  // namespace cproots
