#pragma once

#include "sdetect/diagnostics.hpp"
#include "sdetect/fitting.hpp"
#include "sdetect/report.hpp"
#include "sdetect/synthgen.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace sdetect {

/// Fully resolved settings of one generate -> filter -> fit -> trace run.
struct PipelineConfig
{
  std::optional<std::filesystem::path> input; ///< generator is used when unset
  std::string curve{ "circle" };
  GenParams gen;
  std::optional<std::size_t> prefix; ///< keep the first N merged points
  std::string filter{ "none" };      ///< none, kde or knn
  std::size_t k{ 5 };
  double gamma{ 0.6 };
  std::string bandwidth{ "silverman" };
  std::string basis{ "poly:2" };
  std::string weights{ "uniform" };
  int resolution{ 256 };
  std::size_t radius_samples{ 100 };
  std::optional<RectDomain> domain;
  std::filesystem::path out_dir{ "out" };
  bool strict{ false };

  std::optional<FilterParams> filter_params() const;
  nlohmann::json to_json() const;
};

/// Reads or generates the data and applies the prefix. The prefix merges batches.
PointData prepare_data(const PipelineConfig& config);

struct PipelineResult
{
  PointData data;
  std::optional<RectDomain> domain; ///< domain used for tracing
  DetectionResult detection;
  TracedCurve curve;
  std::optional<RadiusSamples> radius;
  std::optional<CoefficientError> error; ///< against the generator curve when known
};

/// Writes data.csv, filter.json, fit.json, table.txt, curve.csv, curve.svg and
/// config.json under config.out_dir. Warnings go to diag.
PipelineResult run_pipeline(const PipelineConfig& config, std::ostream& diag);

} // namespace sdetect
