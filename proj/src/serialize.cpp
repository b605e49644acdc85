#include "sdetect/serialize.hpp"

#include "sdetect/error.hpp"

#include <charconv>
#include <fstream>

namespace sdetect {

nlohmann::json domain_to_json(const RectDomain& d)
{
  return { { "xmin", d.xmin() }, { "xmax", d.xmax() }, { "ymin", d.ymin() }, { "ymax", d.ymax() } };
}

RectDomain domain_from_json(const nlohmann::json& j)
{
  try {
    if (j.is_object())
      return RectDomain(j.at("xmin").get<double>(), j.at("xmax").get<double>(),
                        j.at("ymin").get<double>(), j.at("ymax").get<double>());
    if (!j.is_array() || j.size() != 4)
      throw ValidationError("domain must be {xmin, xmax, ymin, ymax} or a 4-element array");
    return RectDomain(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                      j[3].get<double>());
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("domain entries must be numbers");
  }
}

RectDomain parse_domain(const std::string& text)
{
  std::vector<double> v;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view field = rest.substr(0, comma);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
      throw ArgumentError("domain must be xmin,xmax,ymin,ymax, got '" + text + "'");
    v.push_back(x);
    if (comma == std::string_view::npos)
      break;
    rest.remove_prefix(comma + 1);
  }
  if (v.size() != 4)
    throw ArgumentError("domain must have 4 numbers, got '" + text + "'");
  return RectDomain(v[0], v[1], v[2], v[3]);
}

nlohmann::json to_json(const FilterReport& r, std::size_t n_input)
{
  nlohmann::json j;
  j["method"] = to_string(r.method);
  j["gamma"] = r.gamma;
  if (r.method == FilterMethod::kde) {
    j["bandwidth"] = r.bandwidth;
    j["max_density"] = r.extremum;
  } else {
    j["k"] = r.k;
    j["min_cluster_size"] = r.extremum;
  }
  j["threshold"] = r.threshold_value;
  j["n_input"] = n_input;
  j["n_kept"] = r.kept_indices.size();
  j["kept_indices"] = r.kept_indices;
  j["scores"] = r.scores;
  return j;
}

nlohmann::json to_json(const FitReport& r)
{
  nlohmann::json j;
  j["basis"] = r.basis.to_string();
  std::vector<std::string> terms;
  for (std::size_t i = 0; i < r.basis.size(); ++i)
    terms.push_back(r.basis.term_label(i));
  j["terms"] = terms;
  j["coefficients"] = std::vector<double>(r.coefficients.data(),
                                          r.coefficients.data() + r.coefficients.size());
  j["residual"] = r.residual;
  j["eigen_gap"] = r.eigen_gap;
  j["eigenvalues"] = std::vector<double>(r.eigenvalues.data(),
                                         r.eigenvalues.data() + r.eigenvalues.size());
  j["trace"] = r.trace;
  j["n_points"] = r.n_points;
  j["weights"] = r.weights.to_string();
  j["sign_convention"] = FitReport::sign_convention;
  j["rank_deficient"] = r.rank_deficient;
  j["non_unique"] = r.non_unique;
  j["warnings"] = r.warnings;
  return j;
}

StoredFit fit_from_json(const nlohmann::json& j)
{
  StoredFit fit;
  try {
    fit.basis = Basis::parse(j.at("basis").get<std::string>());
    const auto c = j.at("coefficients").get<std::vector<double>>();
    fit.coefficients = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    if (j.contains("domain") && !j["domain"].is_null())
      fit.domain = domain_from_json(j["domain"]);
    if (j.contains("warnings"))
      fit.warnings = j["warnings"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("fit report: ") + e.what());
  }
  if (static_cast<std::size_t>(fit.coefficients.size()) != fit.basis.size())
    throw ValidationError("fit report has " + std::to_string(fit.coefficients.size()) +
                          " coefficients for basis " + fit.basis.to_string());
  return fit;
}

StoredFit load_fit_file(const std::filesystem::path& path)
{
  return fit_from_json(read_json_file(path));
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write " + path.string());
  out << text;
  if (!out)
    throw IoError("error writing " + path.string());
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j)
{
  write_text_file(path, j.dump(2) + "\n");
}

nlohmann::json read_json_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

} // namespace sdetect
