#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

#include "hypoheat/linear_system.hpp"

namespace hypoheat::cli {

/// Parses {"A": [[...]], "B": [[...]], "alpha": [...]} and validates it.
/// Malformed input raises ParseError; the system checks raise their own kinds.
LinearSystem parse_system(std::string_view json_text);
LinearSystem load_system(const std::string& path);

/// "1,0,-2.5" -> vector. Throws ParseError.
Eigen::VectorXd parse_point(std::string_view text);

}  // namespace hypoheat::cli
