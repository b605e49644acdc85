#pragma once

#include "sdetect/fitting.hpp"
#include "sdetect/point_set.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sdetect {

/// Polylines approximating {f = 0} inside a rectangle. Closed loops repeat
/// their first vertex at the end.
struct TracedCurve
{
  std::vector<std::vector<Point2>> segments;
  int grid_resolution{ 0 };
  RectDomain domain{ -1.0, 1.0, -1.0, 1.0 };
  /// 1e-6 max_grid |f|; every vertex is refined towards |f| <= tolerance.
  double tolerance{ 0.0 };

  bool empty() const { return segments.empty(); }
  std::size_t vertex_count() const;
  double length() const;
};

struct RadiusSamples
{
  std::vector<Point2> points;
  std::vector<double> values; ///< |p| for each sampled point

  std::size_t count() const { return values.size(); }
  double mean() const;
};

/// Marching squares on a (resolution + 1)^2 node grid. A node is positive when
/// f >= 0. Crossing edges are bisected until |f| <= tolerance (at most 60
/// steps); saddle cells follow the sign of f at the cell centre. A grid with
/// no sign change gives an empty curve.
TracedCurve trace_zero_set(const DetectionModel& model, const RectDomain& domain,
                           int resolution);

/// n samples at arc lengths (k + 1/2) L / n, k = 0..n-1, walking the segments
/// in order; values are distances to the origin. Throws on an empty curve.
RadiusSamples radius_function(const TracedCurve& curve, std::size_t n_samples);

/// `segment_id,x,y` rows.
void write_curve_csv(std::ostream& out, const TracedCurve& curve);

struct SvgLayers
{
  std::optional<PointSet> input;
  std::optional<PointSet> filtered;
  /// Embedded verbatim (escaped) in a <metadata> element.
  std::string metadata;
};

void write_curve_svg(std::ostream& out, const TracedCurve& curve,
                     const SvgLayers& layers = {});

} // namespace sdetect
