#include "sdetect/pipeline.hpp"

#include "sdetect/error.hpp"
#include "sdetect/io.hpp"
#include "sdetect/serialize.hpp"

#include <ostream>
#include <sstream>

namespace sdetect {

std::optional<FilterParams> PipelineConfig::filter_params() const
{
  if (filter == "none")
    return std::nullopt;
  if (filter == "kde")
    return KdeParams{ Bandwidth::parse(bandwidth), gamma };
  if (filter == "knn")
    return KnnParams{ k, gamma };
  throw ArgumentError("filter must be none, kde or knn, got '" + filter + "'");
}

nlohmann::json PipelineConfig::to_json() const
{
  nlohmann::json j;
  if (input) {
    j["input"] = input->generic_string();
  } else {
    j["curve"] = curve;
    j["batches"] = gen.batches;
    j["grid"] = gen.grid;
    j["tube_points"] = gen.tube_points;
    if (!gen.batch_sizes.empty())
      j["batch_sizes"] = gen.batch_sizes;
    j["tube_width"] = gen.tube_width;
    j["decay"] = gen.decay;
    j["min_separation"] = gen.min_separation;
    j["outliers"] = gen.outlier_fraction;
    j["seed"] = gen.seed;
    j["max_attempts"] = gen.max_attempts;
  }
  j["prefix"] = prefix ? nlohmann::json(*prefix) : nlohmann::json(nullptr);
  j["filter"] = filter;
  if (filter == "knn")
    j["k"] = k;
  if (filter == "kde")
    j["bandwidth"] = bandwidth;
  if (filter != "none")
    j["gamma"] = gamma;
  j["basis"] = basis;
  j["weights"] = weights;
  j["resolution"] = resolution;
  j["radius_samples"] = radius_samples;
  j["domain"] = domain ? domain_to_json(*domain) : nlohmann::json(nullptr);
  j["strict"] = strict;
  return j;
}

PointData prepare_data(const PipelineConfig& config)
{
  PointData data = config.input
                     ? load_points_file(*config.input)
                     : PointData(generate(CurveSpec::parse(config.curve), config.gen));
  if (config.prefix) {
    const PointSet merged = as_point_set(data);
    if (*config.prefix == 0)
      throw ArgumentError("prefix must be positive");
    data = merged.prefix(*config.prefix);
  }
  return data;
}

PipelineResult run_pipeline(const PipelineConfig& config, std::ostream& diag)
{
  const Basis basis = Basis::parse(config.basis);
  const WeightScheme weights = WeightScheme::parse(config.weights);
  const auto filter = config.filter_params();
  if (config.resolution < 2)
    throw ArgumentError("resolution must be at least 2");
  std::optional<CurveSpec> spec;
  if (!config.input)
    spec = CurveSpec::parse(config.curve);

  PipelineResult result{ prepare_data(config), std::nullopt, {}, {}, std::nullopt, std::nullopt };
  result.domain = config.domain ? config.domain : domain_of(result.data);
  if (!result.domain)
    throw ValidationError("no domain for tracing: the input carries none, pass --domain");

  result.detection = detect(result.data, basis, weights, filter);
  const FitReport& fit = result.detection.fit;
  for (const auto& w : fit.warnings)
    diag << "warning: " << w << '\n';

  result.curve = trace_zero_set(fit.model(), *result.domain, config.resolution);
  if (!result.curve.empty() && config.radius_samples > 0)
    result.radius = radius_function(result.curve, config.radius_samples);

  std::optional<Eigen::VectorXd> exact;
  if (spec) {
    try {
      exact = exact_coefficients(*spec, basis);
      result.error = coefficient_error(fit.coefficients, *exact);
    } catch (const ArgumentError&) {
      // Curve outside the basis span: no exact column.
    }
  }

  const nlohmann::json cfg = config.to_json();
  const auto& dir = config.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create " + dir.string() + ": " + ec.message());

  save_points_file(dir / "data.csv", result.data);

  nlohmann::json fj;
  if (result.detection.filter)
    fj = to_json(*result.detection.filter, as_point_set(result.data).size());
  else
    fj["method"] = "none";
  fj["config"] = cfg;
  write_json_file(dir / "filter.json", fj);

  nlohmann::json fitj = to_json(fit);
  fitj["domain"] = domain_to_json(*result.domain);
  if (result.error) {
    fitj["exact_curve"] = config.curve;
    fitj["coefficient_error"] = { { "l2", result.error->l2 },
                                  { "max_abs", result.error->max_abs } };
  }
  nlohmann::json tj;
  tj["resolution"] = config.resolution;
  tj["segments"] = result.curve.segments.size();
  tj["vertices"] = result.curve.vertex_count();
  tj["length"] = result.curve.length();
  tj["tolerance"] = result.curve.tolerance;
  if (result.radius) {
    tj["radius_samples"] = result.radius->values;
    tj["radius_mean"] = result.radius->mean();
  }
  fitj["curve"] = tj;
  fitj["config"] = cfg;
  write_json_file(dir / "fit.json", fitj);

  write_text_file(dir / "table.txt", "# config: " + cfg.dump() + "\n" +
                                       coefficient_table(basis, fit.coefficients, exact));

  std::ostringstream csv;
  write_curve_csv(csv, result.curve);
  write_text_file(dir / "curve.csv", csv.str());

  std::ostringstream svg;
  SvgLayers layers;
  layers.input = as_point_set(result.data);
  if (result.detection.filter)
    layers.filtered = result.detection.filter->kept;
  layers.metadata = cfg.dump();
  write_curve_svg(svg, result.curve, layers);
  write_text_file(dir / "curve.svg", svg.str());

  write_json_file(dir / "config.json", cfg);
  return result;
}

} // namespace sdetect
