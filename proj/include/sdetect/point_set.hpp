#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace sdetect {

struct Point2
{
  double x{ 0.0 };
  double y{ 0.0 };

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double squared_distance(Point2 a, Point2 b)
{
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

bool is_finite(Point2 p);

/// Axis-aligned rectangle; construction enforces xmin < xmax and ymin < ymax.
class RectDomain
{
public:
  RectDomain(double xmin, double xmax, double ymin, double ymax);

  double xmin() const { return xmin_; }
  double xmax() const { return xmax_; }
  double ymin() const { return ymin_; }
  double ymax() const { return ymax_; }
  double width() const { return xmax_ - xmin_; }
  double height() const { return ymax_ - ymin_; }

  /// Closed-set membership.
  bool contains(Point2 p) const;

  friend bool operator==(const RectDomain&, const RectDomain&) = default;

private:
  double xmin_, xmax_, ymin_, ymax_;
};

/// Ordered set of mesh vertices. Order is significant: prefix selection
/// ("first N nodes") and filter index reports refer to positions.
class PointSet
{
public:
  PointSet() = default;
  explicit PointSet(std::vector<Point2> points,
                    std::optional<RectDomain> domain = std::nullopt);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point2> points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  const std::optional<RectDomain>& domain() const { return domain_; }

  /// Points at the given indices, in the order given.
  PointSet subset(std::span<const std::size_t> indices) const;
  /// First n points (all of them if n >= size()).
  PointSet prefix(std::size_t n) const;

private:
  std::vector<Point2> points_;
  std::optional<RectDomain> domain_;
};

/// Type II data: batch i holds the vertices created at refinement step i.
class BatchedPointSet
{
public:
  explicit BatchedPointSet(std::vector<PointSet> batches,
                           std::optional<RectDomain> domain = std::nullopt);

  /// R, the number of refinement steps; there are R + 1 batches.
  std::size_t refinement_count() const { return batches_.size() - 1; }
  std::size_t batch_count() const { return batches_.size(); }
  const PointSet& batch(std::size_t i) const { return batches_.at(i); }
  const std::vector<PointSet>& batches() const { return batches_; }
  std::size_t total_size() const;

  const std::optional<RectDomain>& domain() const { return domain_; }

private:
  std::vector<PointSet> batches_;
  std::optional<RectDomain> domain_;
};

using PointData = std::variant<PointSet, BatchedPointSet>;

/// Concatenates the batches in index order; duplicates are kept.
PointSet merge_batches(const BatchedPointSet& data);

/// Type I view of either data shape (merging Type II batches).
PointSet as_point_set(const PointData& data);

const std::optional<RectDomain>& domain_of(const PointData& data);

} // namespace sdetect
