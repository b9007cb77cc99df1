#include "hypoheat/cli/system_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "hypoheat/error.hpp"

namespace hypoheat::cli {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

double number(const json& v, const std::string& where) {
  if (!v.is_number()) parse_error(where + " is not a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) parse_error(where + " is not finite");
  return d;
}

Eigen::MatrixXd matrix(const json& doc, const char* key) {
  if (!doc.contains(key)) parse_error(std::string("missing \"") + key + "\"");
  const json& rows = doc.at(key);
  if (!rows.is_array() || rows.empty()) parse_error(std::string("\"") + key + "\" must be a non-empty array of rows");
  const std::size_t cols = rows.front().is_array() ? rows.front().size() : 0;
  if (cols == 0) parse_error(std::string("\"") + key + "\" rows must be non-empty arrays");
  Eigen::MatrixXd M(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != cols) {
      parse_error(std::string("\"") + key + "\" rows have unequal lengths");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      M(i, j) = number(rows[i][j], std::string(key) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return M;
}

}  // namespace

LinearSystem parse_system(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_error(std::string("system file: ") + e.what());
  }
  if (!doc.is_object()) parse_error("system file must hold a JSON object");
  Eigen::MatrixXd A = matrix(doc, "A");
  Eigen::MatrixXd B = matrix(doc, "B");
  std::optional<Eigen::VectorXd> alpha;
  if (doc.contains("alpha") && !doc.at("alpha").is_null()) {
    const json& a = doc.at("alpha");
    if (!a.is_array()) parse_error("\"alpha\" must be an array");
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(i) = number(a[i], "alpha[" + std::to_string(i) + "]");
    alpha = std::move(v);
  }
  return validate_system(std::move(A), std::move(B), std::move(alpha));
}

LinearSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot read system file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

Eigen::VectorXd parse_point(std::string_view text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty() && item.front() == '+') item.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || p != item.data() + item.size() || !std::isfinite(v)) {
      parse_error("bad point '" + std::string(text) + "'");
    }
    values.push_back(v);
    pos = end + 1;
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace hypoheat::cli
