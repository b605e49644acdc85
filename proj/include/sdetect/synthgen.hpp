#pragma once

#include "sdetect/point_set.hpp"
#include "sdetect/polynomial.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sdetect {

/// Known singularity curve {F* = 0} together with the domain it lives in.
class CurveSpec
{
public:
  enum class Kind
  {
    circle,      ///< x^2 + y^2 - r^2
    lshape,      ///< (x - x0)(y - y0)
    xshape,      ///< x^2 - y^2
    semicircles, ///< (x^2 + y^2 - r1^2)(x^2 + y^2 - r2^2)
    custom_poly
  };

  static CurveSpec circle(double radius = 0.5);
  static CurveSpec lshape(double x0 = -1.0, double y0 = -1.0);
  static CurveSpec xshape();
  /// Default domain (0,1) x (-1,1): the right halves of both circles.
  static CurveSpec semicircles(double r1 = 0.5, double r2 = 0.75);
  static CurveSpec custom(Polynomial2 poly, RectDomain domain);

  /// "circle", "lshape", "xshape", "semicircles" or "poly:<file>".
  static CurveSpec parse(const std::string& text);
  /// JSON {"degree": n, "coefficients": [...monomial order...], "domain": [xmin,xmax,ymin,ymax]?}.
  static CurveSpec load_custom(const std::filesystem::path& path);

  Kind kind() const { return kind_; }
  const RectDomain& domain() const { return domain_; }
  CurveSpec with_domain(RectDomain domain) const;

  double radius() const { return a_; }
  double x0() const { return a_; }
  double y0() const { return b_; }
  double r1() const { return a_; }
  double r2() const { return b_; }

  const Polynomial2& polynomial() const { return poly_; }
  std::string name() const;

private:
  CurveSpec(Kind kind, double a, double b, Polynomial2 poly, RectDomain domain)
    : kind_(kind)
    , a_(a)
    , b_(b)
    , poly_(std::move(poly))
    , domain_(domain)
  {}

  Kind kind_;
  double a_;
  double b_;
  Polynomial2 poly_;
  RectDomain domain_;
};

struct GenParams
{
  std::size_t batches{ 17 };      ///< R, refinement steps after the initial grid
  std::size_t grid{ 5 };          ///< batch 0 is a grid x grid lattice over the domain
  std::size_t tube_points{ 297 }; ///< spread evenly over batches 1..R
  /// Optional explicit sizes of batches 1..R; overrides tube_points when set.
  std::vector<std::size_t> batch_sizes;
  double tube_width{ 0.25 };      ///< w0; batch i lies within w0 q^i of the curve
  double decay{ 0.25 };           ///< q
  double min_separation{ 0.008 }; ///< minimum distance between generated points
  double outlier_fraction{ 0.0 }; ///< ceil(f n_i) uniform points appended to batch i
  std::uint64_t seed{ 1 };
  std::size_t max_attempts{ 2'000'000 }; ///< proposals per batch before giving up

  void validate() const;
  /// Tube point count of batch i, 1 <= i <= R.
  std::size_t tube_count(std::size_t i) const;
};

struct LabeledData
{
  BatchedPointSet data;
  std::vector<std::vector<bool>> outlier; ///< per batch, per point
};

/// Batch 0: grid lattice. Batch i >= 1: tube points around {F* = 0} of half
/// width w0 q^i (approximate distance |F*| / max(|grad F*|, 1e-8)), then the
/// outliers. Same spec and params give bit-identical output on every platform.
LabeledData generate_labeled(const CurveSpec& spec, const GenParams& params);
BatchedPointSet generate(const CurveSpec& spec, const GenParams& params);

/// Exact Euclidean distance to the curve for circle and semicircle specs.
double exact_curve_distance(const CurveSpec& spec, Point2 p);

} // namespace sdetect
