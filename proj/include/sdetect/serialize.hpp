#pragma once

#include "sdetect/basis.hpp"
#include "sdetect/filtering.hpp"
#include "sdetect/fitting.hpp"
#include "sdetect/point_set.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sdetect {

/// {"xmin", "xmax", "ymin", "ymax"}; reading also accepts [xmin, xmax, ymin, ymax].
nlohmann::json domain_to_json(const RectDomain& domain);
RectDomain domain_from_json(const nlohmann::json& j);
/// "xmin,xmax,ymin,ymax"
RectDomain parse_domain(const std::string& text);

nlohmann::json to_json(const FilterReport& report, std::size_t n_input);
nlohmann::json to_json(const FitReport& report);

/// The parts of a fit.json needed to rebuild the detection function.
struct StoredFit
{
  Basis basis{ Basis::monomial(2) };
  Eigen::VectorXd coefficients;
  std::optional<RectDomain> domain;
  std::vector<std::string> warnings;

  DetectionModel model() const { return DetectionModel::normalized(basis, coefficients); }
};

StoredFit fit_from_json(const nlohmann::json& j);
StoredFit load_fit_file(const std::filesystem::path& path);

/// Two-space indented dump plus trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace sdetect
