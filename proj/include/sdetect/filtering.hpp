#pragma once

#include "sdetect/point_set.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace sdetect {

/// KDE length scale: Silverman's rule (evaluated on the data size) or a fixed h.
class Bandwidth
{
public:
  static Bandwidth silverman() { return Bandwidth(0.0); }
  static Bandwidth fixed(double h);
  /// "silverman" or a positive number.
  static Bandwidth parse(const std::string& text);

  bool is_silverman() const { return h_ == 0.0; }
  /// h to use for a data set of n points in 2-D.
  double resolve(std::size_t n) const;

private:
  explicit Bandwidth(double h)
    : h_(h)
  {}
  double h_;
};

struct KdeParams
{
  Bandwidth bandwidth{ Bandwidth::silverman() };
  double gamma{ 0.6 };
};

struct KnnParams
{
  std::size_t k{ 5 };
  double gamma{ 0.6 };
};

using FilterParams = std::variant<KdeParams, KnnParams>;

enum class FilterMethod
{
  kde,
  knn
};

/// Outcome of density filtering. For KDE the scores are densities rho(x) and a
/// point is kept when rho(x) > gamma * max rho; for kNN the scores are the sums
/// of squared neighbour distances delta_x and a point is kept when
/// delta_x < min delta / gamma.
struct FilterReport
{
  FilterMethod method{ FilterMethod::kde };
  double gamma{ 0.0 };
  double bandwidth{ 0.0 }; ///< h actually used (KDE only)
  std::size_t k{ 0 };      ///< neighbour count (kNN only)

  std::vector<double> scores;
  double extremum{ 0.0 };       ///< max rho (KDE) or min delta (kNN)
  double threshold_value{ 0.0 }; ///< gamma * max rho, or min delta / gamma
  std::vector<std::size_t> kept_indices;
  PointSet kept;
};

/// h = (N (d + 2) / 4)^(-1 / (d + 4)), without any data-spread factor.
double silverman_bandwidth(std::size_t n, int dimension = 2);

/// Gaussian-kernel density at every input point, self term included:
/// rho_j = 1/(N h^2) sum_i (2 pi)^-1 exp(-|x_j - x_i|^2 / (2 h^2)).
/// Summation runs over i = 0..N-1 in order, so results are reproducible.
std::vector<double> kde_density(const PointSet& points, double h);

FilterReport kde_filter(const PointSet& points, const KdeParams& params);

/// Indices of the k nearest other points for each point, nearest first.
/// Distance ties are broken by lower input index.
std::vector<std::vector<std::size_t>> knn_neighbors(const PointSet& points,
                                                    std::size_t k);

/// delta_x: sum of squared distances to the k nearest neighbours.
std::vector<double> knn_scores(const PointSet& points, std::size_t k);

FilterReport knn_filter(const PointSet& points, const KnnParams& params);

FilterReport apply_filter(const PointSet& points, const FilterParams& params);

std::string to_string(FilterMethod method);

} // namespace sdetect
