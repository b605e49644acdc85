#include "sdetect/filtering.hpp"

#include "sdetect/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace sdetect {

namespace {

void check_gamma(double gamma)
{
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ArgumentError("filter threshold gamma must lie in (0, 1)");
}

FilterReport finish(const PointSet& points, FilterReport report,
                    const std::vector<bool>& keep)
{
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i])
      report.kept_indices.push_back(i);
  report.kept = points.subset(report.kept_indices);
  return report;
}

} // namespace

Bandwidth Bandwidth::fixed(double h)
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw ArgumentError("KDE bandwidth must be positive and finite");
  return Bandwidth(h);
}

Bandwidth Bandwidth::parse(const std::string& text)
{
  if (text == "silverman")
    return silverman();
  double h = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, h);
  if (text.empty() || ptr != end || ec != std::errc())
    throw ArgumentError("bandwidth must be 'silverman' or a number, got '" + text + "'");
  return fixed(h);
}

double Bandwidth::resolve(std::size_t n) const
{
  return is_silverman() ? silverman_bandwidth(n) : h_;
}

double silverman_bandwidth(std::size_t n, int dimension)
{
  if (n == 0)
    throw ArgumentError("Silverman's rule needs at least one point");
  if (dimension < 1)
    throw ArgumentError("dimension must be >= 1");
  const double d = dimension;
  return std::pow(static_cast<double>(n) * (d + 2.0) / 4.0, -1.0 / (d + 4.0));
}

std::vector<double> kde_density(const PointSet& points, double h)
{
  if (!(h > 0.0))
    throw ArgumentError("KDE bandwidth must be positive");
  const std::size_t n = points.size();
  const double inv_two_h2 = 1.0 / (2.0 * h * h);
  const double scale =
    1.0 / (2.0 * std::numbers::pi * static_cast<double>(n) * h * h);

  std::vector<double> rho(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      sum += std::exp(-squared_distance(points[j], points[i]) * inv_two_h2);
    rho[j] = sum * scale;
  }
  return rho;
}

FilterReport kde_filter(const PointSet& points, const KdeParams& params)
{
  check_gamma(params.gamma);
  if (points.empty())
    throw ArgumentError("KDE filtering needs at least one point");

  FilterReport report;
  report.method = FilterMethod::kde;
  report.gamma = params.gamma;
  report.bandwidth = params.bandwidth.resolve(points.size());
  report.scores = kde_density(points, report.bandwidth);
  report.extremum = *std::max_element(report.scores.begin(), report.scores.end());
  report.threshold_value = params.gamma * report.extremum;

  std::vector<bool> keep(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    keep[i] = report.scores[i] > report.threshold_value;
  return finish(points, std::move(report), keep);
}

std::vector<std::vector<std::size_t>> knn_neighbors(const PointSet& points,
                                                    std::size_t k)
{
  const std::size_t n = points.size();
  if (k == 0)
    throw ArgumentError("kNN needs k >= 1");
  if (k >= n)
    throw ArgumentError("kNN needs k < number of points (k = " + std::to_string(k) +
                        ", N = " + std::to_string(n) + ")");

  std::vector<std::vector<std::size_t>> result(n);
  std::vector<std::pair<double, std::size_t>> candidates;
  candidates.reserve(n - 1);
  for (std::size_t q = 0; q < n; ++q) {
    candidates.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (i != q)
        candidates.emplace_back(squared_distance(points[q], points[i]), i);
    // pair ordering compares distance first, then index.
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<long>(k),
                      candidates.end());
    auto& out = result[q];
    out.reserve(k);
    for (std::size_t m = 0; m < k; ++m)
      out.push_back(candidates[m].second);
  }
  return result;
}

std::vector<double> knn_scores(const PointSet& points, std::size_t k)
{
  const auto neighbors = knn_neighbors(points, k);
  std::vector<double> delta(points.size());
  for (std::size_t q = 0; q < points.size(); ++q) {
    double sum = 0.0;
    for (std::size_t i : neighbors[q])
      sum += squared_distance(points[q], points[i]);
    delta[q] = sum;
  }
  return delta;
}

FilterReport knn_filter(const PointSet& points, const KnnParams& params)
{
  check_gamma(params.gamma);

  FilterReport report;
  report.method = FilterMethod::knn;
  report.gamma = params.gamma;
  report.k = params.k;
  report.scores = knn_scores(points, params.k);
  report.extremum = *std::min_element(report.scores.begin(), report.scores.end());
  report.threshold_value = report.extremum / params.gamma;

  // delta == min delta is kept explicitly: with coincident points min delta is 0
  // and the strict test alone would discard everything.
  std::vector<bool> keep(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    keep[i] = report.scores[i] < report.threshold_value ||
              report.scores[i] == report.extremum;
  return finish(points, std::move(report), keep);
}

FilterReport apply_filter(const PointSet& points, const FilterParams& params)
{
  if (const auto* kde = std::get_if<KdeParams>(&params))
    return kde_filter(points, *kde);
  return knn_filter(points, std::get<KnnParams>(params));
}

std::string to_string(FilterMethod method)
{
  return method == FilterMethod::kde ? "kde" : "knn";
}

} // namespace sdetect
