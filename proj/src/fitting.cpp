#include "sdetect/fitting.hpp"

#include "sdetect/error.hpp"
#include "sdetect/io.hpp"
#include "sdetect/jacobi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace sdetect {

namespace {

double parse_positive(std::string_view text, const std::string& what)
{
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ptr != end || ec != std::errc() || !(v > 0.0) || !std::isfinite(v))
    throw ArgumentError(what + " must be a positive number, got '" + std::string(text) +
                        "'");
  return v;
}

void accumulate(Eigen::MatrixXd& g, const PointSet& points, const Basis& basis,
                double weight)
{
  Eigen::VectorXd phi(static_cast<Eigen::Index>(basis.size()));
  for (const auto& p : points) {
    basis.eval(p, std::span<double>(phi.data(), basis.size()));
    g.selfadjointView<Eigen::Upper>().rankUpdate(phi, weight);
  }
}

GramMatrix finish(Eigen::MatrixXd g, std::size_t n_points, std::size_t n_weighted)
{
  g.triangularView<Eigen::StrictlyLower>() = g.transpose();
  return GramMatrix{ std::move(g), n_points, n_weighted };
}

/// Flips c so its largest-magnitude entry (lowest index on ties) is positive.
void apply_sign_convention(Eigen::VectorXd& c)
{
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < c.size(); ++i)
    if (std::abs(c[i]) > std::abs(c[best]))
      best = i;
  if (c[best] < 0.0)
    c = -c;
}

bool lexicographically_greater(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i])
      return a[i] > b[i];
  }
  return false;
}

std::string sci(double v)
{
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

} // namespace

WeightScheme WeightScheme::per_batch(std::vector<double> sigmas)
{
  if (sigmas.empty())
    throw ArgumentError("per-batch weights need at least one sigma");
  for (double s : sigmas)
    if (!(s > 0.0) || !std::isfinite(s))
      throw ArgumentError("every sigma must be positive and finite");
  return WeightScheme(Kind::per_batch, 1.0, std::move(sigmas));
}

WeightScheme WeightScheme::schedule(double base)
{
  if (!(base >= 1.0) || !std::isfinite(base))
    throw ArgumentError("schedule base must be >= 1");
  return WeightScheme(Kind::schedule, base, {});
}

WeightScheme WeightScheme::parse(const std::string& text)
{
  if (text == "uniform")
    return uniform();
  if (text.starts_with("schedule:"))
    return schedule(parse_positive(std::string_view(text).substr(9), "schedule base"));
  if (text.starts_with("sigmas:")) {
    std::vector<double> sigmas;
    std::string_view rest = std::string_view(text).substr(7);
    while (true) {
      const auto comma = rest.find(',');
      sigmas.push_back(parse_positive(rest.substr(0, comma), "sigma"));
      if (comma == std::string_view::npos)
        break;
      rest.remove_prefix(comma + 1);
    }
    return per_batch(std::move(sigmas));
  }
  throw ArgumentError("weights must be uniform, schedule:<b> or sigmas:<list>, got '" +
                      text + "'");
}

std::vector<double> WeightScheme::batch_weights(std::size_t refinement_count) const
{
  const std::size_t batches = refinement_count + 1;
  std::vector<double> w(batches);
  switch (kind_) {
    case Kind::uniform:
      std::fill(w.begin(), w.end(), 0.5);
      break;
    case Kind::per_batch:
      if (sigmas_.size() != batches)
        throw ArgumentError("weights list " + std::to_string(sigmas_.size()) +
                            " sigmas but the data has " + std::to_string(batches) +
                            " batches");
      for (std::size_t i = 0; i < batches; ++i)
        w[i] = 1.0 / (2.0 * sigmas_[i] * sigmas_[i]);
      break;
    case Kind::schedule:
      // 1 / (2 sigma_i^2) with sigma_i^2 = b^(2(R-i)) / 2.
      for (std::size_t i = 0; i < batches; ++i)
        w[i] = std::pow(base_, -2.0 * static_cast<double>(refinement_count - i));
      break;
  }
  return w;
}

std::string WeightScheme::to_string() const
{
  switch (kind_) {
    case Kind::uniform:
      return "uniform";
    case Kind::schedule:
      return "schedule:" + format_double(base_);
    case Kind::per_batch: {
      std::string s = "sigmas:";
      for (std::size_t i = 0; i < sigmas_.size(); ++i)
        s += (i ? "," : "") + format_double(sigmas_[i]);
      return s;
    }
  }
  return "uniform";
}

GramMatrix assemble_gram(const PointSet& points, const Basis& basis,
                         const WeightScheme& weights)
{
  if (weights.kind() != WeightScheme::Kind::uniform)
    throw ArgumentError("weight scheme '" + weights.to_string() +
                        "' needs batched (Type II) data");
  const auto k = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
  accumulate(g, points, basis, 0.5);
  return finish(std::move(g), points.size(), points.size());
}

GramMatrix assemble_gram(const BatchedPointSet& data, const Basis& basis,
                         const WeightScheme& weights)
{
  const auto w = weights.batch_weights(data.refinement_count());
  const auto k = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
  std::size_t weighted = 0;
  for (std::size_t i = 0; i < data.batch_count(); ++i) {
    accumulate(g, data.batch(i), basis, w[i]);
    if (w[i] > 0.0)
      weighted += data.batch(i).size();
  }
  return finish(std::move(g), data.total_size(), weighted);
}

GramMatrix assemble_gram(const PointData& data, const Basis& basis,
                         const WeightScheme& weights)
{
  return std::visit([&](const auto& d) { return assemble_gram(d, basis, weights); },
                    data);
}

DetectionModel::DetectionModel(Basis basis, Eigen::VectorXd coefficients)
  : basis_(std::move(basis))
  , coefficients_(std::move(coefficients))
{
  if (static_cast<std::size_t>(coefficients_.size()) != basis_.size())
    throw ArgumentError("model has " + std::to_string(coefficients_.size()) +
                        " coefficients but basis " + basis_.to_string() + " has " +
                        std::to_string(basis_.size()) + " terms");
  if (!coefficients_.allFinite())
    throw ArgumentError("model coefficients must be finite");
  if (std::abs(coefficients_.norm() - 1.0) > 1e-9)
    throw ArgumentError("model coefficients must have unit norm");
}

DetectionModel DetectionModel::normalized(Basis basis, Eigen::VectorXd coefficients)
{
  const double n = coefficients.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw ArgumentError("cannot normalize a zero or non-finite coefficient vector");
  return DetectionModel(std::move(basis), coefficients / n);
}

double DetectionModel::operator()(Point2 p) const
{
  return coefficients_.dot(basis_.features(p));
}

double evaluate_detection(const DetectionModel& model, Point2 p)
{
  return model(p);
}

FitReport solve_unit_norm_min(const Eigen::MatrixXd& g)
{
  if (g.rows() != g.cols())
    throw ArgumentError("Gram matrix must be square");
  if (g.rows() < 2)
    throw ArgumentError("unit-norm fit needs at least two basis functions");
  if (!g.allFinite())
    throw ArgumentError("Gram matrix has non-finite entries");
  const double scale = g.cwiseAbs().maxCoeff();
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ArgumentError("Gram matrix is not symmetric");

  const SymmetricEigen eig = jacobi_eigen(g);

  FitReport report;
  report.eigenvalues = eig.values;
  report.residual = eig.values[0];
  report.eigen_gap = eig.values[1] - eig.values[0];
  report.trace = g.trace();

  const double lambda_max = eig.values[eig.values.size() - 1];
  const double gap_tol = 1e-8 * std::max(1.0, lambda_max);
  report.non_unique = report.eigen_gap < gap_tol;

  Eigen::VectorXd best = eig.vectors.col(0);
  apply_sign_convention(best);
  if (report.non_unique) {
    for (Eigen::Index i = 1; i < eig.values.size(); ++i) {
      if (eig.values[i] - eig.values[0] >= gap_tol)
        break;
      Eigen::VectorXd candidate = eig.vectors.col(i);
      apply_sign_convention(candidate);
      if (lexicographically_greater(candidate, best))
        best = candidate;
    }
    report.warnings.push_back("non-unique minimizer: eigen-gap " + sci(report.eigen_gap) +
                              " below " + sci(gap_tol));
  }
  report.coefficients = best / best.norm();

  if (report.residual < -1e-10 * std::abs(report.trace))
    report.warnings.push_back("Gram matrix is not positive semidefinite (smallest "
                              "eigenvalue " + sci(report.residual) + ")");
  if (!eig.converged)
    report.warnings.push_back("eigensolver did not reach its tolerance");
  return report;
}

FitReport solve_unit_norm_min(const GramMatrix& gram)
{
  FitReport report = solve_unit_norm_min(gram.matrix);
  report.n_points = gram.n_points;
  if (gram.rank_deficient()) {
    report.rank_deficient = true;
    report.warnings.insert(report.warnings.begin(),
                           "rank-deficient fit: " + std::to_string(gram.n_weighted) +
                             " weighted points for " + std::to_string(gram.size()) +
                             " basis functions");
  }
  return report;
}

DetectionResult detect(const PointData& data, const Basis& basis,
                       const WeightScheme& weights,
                       const std::optional<FilterParams>& filter)
{
  DetectionResult result;
  GramMatrix gram;
  if (filter) {
    if (weights.kind() != WeightScheme::Kind::uniform)
      throw ArgumentError("filtered fits always use uniform weights; got '" +
                          weights.to_string() + "'");
    const PointSet merged = as_point_set(data);
    result.filter = apply_filter(merged, *filter);
    gram = assemble_gram(result.filter->kept, basis, weights);
  } else {
    gram = assemble_gram(data, basis, weights);
  }
  result.fit = solve_unit_norm_min(gram);
  result.fit.basis = basis;
  result.fit.weights = weights;
  return result;
}

FitReport fit(const PointData& data, const Basis& basis, const WeightScheme& weights,
              const std::optional<FilterParams>& filter)
{
  return detect(data, basis, weights, filter).fit;
}

} // namespace sdetect
