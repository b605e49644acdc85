#include "sdetect/point_set.hpp"

#include "sdetect/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sdetect {

bool is_finite(Point2 p)
{
  return std::isfinite(p.x) && std::isfinite(p.y);
}

RectDomain::RectDomain(double xmin, double xmax, double ymin, double ymax)
  : xmin_(xmin)
  , xmax_(xmax)
  , ymin_(ymin)
  , ymax_(ymax)
{
  if (!(std::isfinite(xmin) && std::isfinite(xmax) && std::isfinite(ymin) &&
        std::isfinite(ymax)))
    throw ValidationError("domain bounds must be finite");
  if (!(xmin < xmax) || !(ymin < ymax))
    throw ValidationError("domain requires xmin < xmax and ymin < ymax");
}

bool RectDomain::contains(Point2 p) const
{
  return p.x >= xmin_ && p.x <= xmax_ && p.y >= ymin_ && p.y <= ymax_;
}

PointSet::PointSet(std::vector<Point2> points, std::optional<RectDomain> domain)
  : points_(std::move(points))
  , domain_(std::move(domain))
{
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!is_finite(points_[i]))
      throw ValidationError("point " + std::to_string(i) +
                            " has a non-finite coordinate");
  }
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const
{
  std::vector<Point2> out;
  out.reserve(indices.size());
  for (std::size_t i : indices)
    out.push_back(points_.at(i));
  return PointSet(std::move(out), domain_);
}

PointSet PointSet::prefix(std::size_t n) const
{
  n = std::min(n, points_.size());
  return PointSet(std::vector<Point2>(points_.begin(), points_.begin() + n),
                  domain_);
}

BatchedPointSet::BatchedPointSet(std::vector<PointSet> batches,
                                 std::optional<RectDomain> domain)
  : batches_(std::move(batches))
  , domain_(std::move(domain))
{
  if (batches_.empty())
    throw ValidationError("batched data needs at least one batch");
  if (batches_.front().empty())
    throw ValidationError("batch 0 must be nonempty");
}

std::size_t BatchedPointSet::total_size() const
{
  std::size_t n = 0;
  for (const auto& b : batches_)
    n += b.size();
  return n;
}

PointSet merge_batches(const BatchedPointSet& data)
{
  std::vector<Point2> out;
  out.reserve(data.total_size());
  for (const auto& b : data.batches())
    out.insert(out.end(), b.begin(), b.end());
  return PointSet(std::move(out), data.domain());
}

PointSet as_point_set(const PointData& data)
{
  if (const auto* batched = std::get_if<BatchedPointSet>(&data))
    return merge_batches(*batched);
  return std::get<PointSet>(data);
}

const std::optional<RectDomain>& domain_of(const PointData& data)
{
  return std::visit([](const auto& d) -> const std::optional<RectDomain>& {
    return d.domain();
  }, data);
}

} // namespace sdetect
