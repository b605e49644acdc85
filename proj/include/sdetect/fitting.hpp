#pragma once

#include "sdetect/basis.hpp"
#include "sdetect/filtering.hpp"
#include "sdetect/point_set.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace sdetect {

/// Per-batch noise variances sigma_i^2; each point of batch i enters the loss
/// with weight 1 / (2 sigma_i^2).
class WeightScheme
{
public:
  enum class Kind
  {
    uniform,   ///< sigma = 1 everywhere
    per_batch, ///< explicit sigma_i list
    schedule   ///< sigma_i^2 = b^(2(R - i)) / 2
  };

  static WeightScheme uniform() { return WeightScheme(Kind::uniform, 1.0, {}); }
  static WeightScheme per_batch(std::vector<double> sigmas);
  static WeightScheme schedule(double base);
  /// "uniform", "schedule:<b>" or "sigmas:<s0>,<s1>,...".
  static WeightScheme parse(const std::string& text);

  Kind kind() const { return kind_; }
  double base() const { return base_; }
  const std::vector<double>& sigmas() const { return sigmas_; }

  /// Loss weight of every point in batch i, i = 0..R.
  std::vector<double> batch_weights(std::size_t refinement_count) const;

  std::string to_string() const;

private:
  WeightScheme(Kind kind, double base, std::vector<double> sigmas)
    : kind_(kind)
    , base_(base)
    , sigmas_(std::move(sigmas))
  {}

  Kind kind_;
  double base_;
  std::vector<double> sigmas_;
};

/// G = sum_x w_x phi(x) phi(x)^T, so the loss of coefficients c is c^T G c.
struct GramMatrix
{
  Eigen::MatrixXd matrix;
  std::size_t n_points{ 0 };
  std::size_t n_weighted{ 0 }; ///< points with a positive weight

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
  double trace() const { return matrix.trace(); }
  bool rank_deficient() const { return n_weighted < size(); }
};

/// Type I assembly; only the uniform scheme applies to a plain point set.
GramMatrix assemble_gram(const PointSet& points, const Basis& basis,
                         const WeightScheme& weights);
/// Type II assembly; per-batch sigma lists must have R + 1 entries.
GramMatrix assemble_gram(const BatchedPointSet& data, const Basis& basis,
                         const WeightScheme& weights);
GramMatrix assemble_gram(const PointData& data, const Basis& basis,
                         const WeightScheme& weights);

/// Unit-norm coefficient vector tied to its basis; f(x) = c . phi(x).
class DetectionModel
{
public:
  /// Rejects a length mismatch, non-finite entries, or | |c| - 1 | > 1e-9.
  DetectionModel(Basis basis, Eigen::VectorXd coefficients);
  /// Scales c to unit length first; rejects a zero vector.
  static DetectionModel normalized(Basis basis, Eigen::VectorXd coefficients);

  const Basis& basis() const { return basis_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }

  double operator()(Point2 p) const;

private:
  Basis basis_;
  Eigen::VectorXd coefficients_;
};

double evaluate_detection(const DetectionModel& model, Point2 p);

struct FitReport
{
  Basis basis{ Basis::monomial(2) };
  WeightScheme weights{ WeightScheme::uniform() };
  Eigen::VectorXd coefficients; ///< unit norm, largest |entry| positive
  double residual{ 0.0 };       ///< smallest eigenvalue of G, the minimum loss
  double eigen_gap{ 0.0 };      ///< second smallest minus smallest eigenvalue
  Eigen::VectorXd eigenvalues;  ///< ascending
  double trace{ 0.0 };
  std::size_t n_points{ 0 };
  bool rank_deficient{ false };
  bool non_unique{ false };
  std::vector<std::string> warnings;

  static constexpr const char* sign_convention = "largest-magnitude coefficient positive";

  DetectionModel model() const { return DetectionModel(basis, coefficients); }
  /// Any condition that --strict treats as fatal.
  bool degenerate() const { return rank_deficient || non_unique; }
};

/// argmin_{|c| = 1} c^T G c via the smallest eigenpair of G.
///
/// Throws ArgumentError on a non-square, non-finite or asymmetric G (relative
/// asymmetry above 1e-12) or when G is smaller than 2x2. Flags non-uniqueness
/// when the eigen-gap is below 1e-8 max(1, lambda_max); the tie is then broken
/// towards the lexicographically largest candidate eigenvector.
FitReport solve_unit_norm_min(const GramMatrix& gram);

/// Solver result without basis/weights bookkeeping.
FitReport solve_unit_norm_min(const Eigen::MatrixXd& g);

struct DetectionResult
{
  std::optional<FilterReport> filter;
  FitReport fit;
};

/// filter (optional) -> assemble_gram -> solve_unit_norm_min.
///
/// Without a filter the weight scheme applies to the data as given (Type I or
/// Type II). With a filter, batches are merged, the merged set is filtered and
/// the fit uses uniform weights; a non-uniform scheme is then an ArgumentError.
DetectionResult detect(const PointData& data, const Basis& basis,
                       const WeightScheme& weights,
                       const std::optional<FilterParams>& filter = std::nullopt);

FitReport fit(const PointData& data, const Basis& basis, const WeightScheme& weights,
              const std::optional<FilterParams>& filter = std::nullopt);

} // namespace sdetect
