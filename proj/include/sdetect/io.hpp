#pragma once

#include "sdetect/point_set.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace sdetect {

enum class PointFormat
{
  csv,
  json
};

/// Parses `x,y` / `x,y,batch` CSV or the points/batches JSON layout.
/// A batch column (or "batches" key) yields a BatchedPointSet.
PointData load_points(std::istream& in, PointFormat format);

/// Format chosen from the extension (.json, anything else is CSV).
PointData load_points_file(const std::filesystem::path& path);
PointFormat format_for_path(const std::filesystem::path& path);

/// Coordinates are written with 17 significant digits so reloading is bit-exact.
void save_points(std::ostream& out, const PointData& data, PointFormat format);
void save_points_file(const std::filesystem::path& path, const PointData& data);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

} // namespace sdetect
