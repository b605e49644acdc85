#include "sdetect/io.hpp"

#include "sdetect/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

namespace sdetect {

namespace {

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return fields;
}

double parse_real(std::string_view field, std::size_t line)
{
  if (!field.empty() && field.front() == '+')
    field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ptr != end || ec == std::errc::invalid_argument)
    throw ParseError("not a number: '" + std::string(field) + "'", line);
  // Out-of-range literals are reported as non-finite below.
  if (ec == std::errc::result_out_of_range)
    value = std::numeric_limits<double>::infinity();
  return value;
}

long long parse_batch(std::string_view field, std::size_t line)
{
  long long value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ptr != end || ec != std::errc())
    throw ParseError("batch index is not an integer: '" + std::string(field) + "'",
                     line);
  return value;
}

Point2 checked_point(double x, double y, std::size_t line)
{
  if (!std::isfinite(x) || !std::isfinite(y))
    throw ValidationError("non-finite coordinate", line);
  return { x, y };
}

BatchedPointSet assemble_batches(std::map<long long, std::vector<Point2>> grouped,
                                 std::optional<RectDomain> domain)
{
  std::vector<PointSet> batches;
  long long expected = 0;
  for (auto& [index, pts] : grouped) {
    if (index < 0)
      throw ValidationError("negative batch index " + std::to_string(index));
    if (index != expected)
      throw ValidationError("batch indices must be contiguous from 0; missing " +
                            std::to_string(expected));
    batches.emplace_back(std::move(pts), domain);
    ++expected;
  }
  if (batches.empty())
    throw ValidationError("no batches present");
  return BatchedPointSet(std::move(batches), std::move(domain));
}

PointData load_csv(std::istream& in)
{
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  bool batched = false;

  std::vector<Point2> points;
  std::map<long long, std::vector<Point2>> grouped;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty())
      continue;
    const auto fields = split_fields(line);

    if (!have_header) {
      if (fields.size() == 2 && fields[0] == "x" && fields[1] == "y") {
        batched = false;
      } else if (fields.size() == 3 && fields[0] == "x" && fields[1] == "y" &&
                 fields[2] == "batch") {
        batched = true;
      } else {
        throw ParseError("expected header 'x,y' or 'x,y,batch'", line_no);
      }
      have_header = true;
      continue;
    }

    const std::size_t expected = batched ? 3 : 2;
    if (fields.size() != expected)
      throw ParseError("expected " + std::to_string(expected) + " fields, got " +
                         std::to_string(fields.size()),
                       line_no);
    const double x = parse_real(fields[0], line_no);
    const double y = parse_real(fields[1], line_no);
    const Point2 p = checked_point(x, y, line_no);
    if (batched) {
      const long long b = parse_batch(fields[2], line_no);
      if (b < 0)
        throw ValidationError("negative batch index", line_no);
      grouped[b].push_back(p);
    } else {
      points.push_back(p);
    }
  }
  if (!have_header)
    throw ParseError("missing CSV header", line_no ? line_no : 1);

  if (batched)
    return assemble_batches(std::move(grouped), std::nullopt);
  return PointSet(std::move(points));
}

std::size_t line_of_offset(const std::string& text, std::size_t offset)
{
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
               std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

std::vector<Point2> json_points(const nlohmann::json& arr, const std::string& where)
{
  if (!arr.is_array())
    throw ParseError(where + " must be an array", 0);
  std::vector<Point2> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& p = arr[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ParseError(where + "[" + std::to_string(i) + "] must be [x, y]", 0);
    const double x = p[0].get<double>();
    const double y = p[1].get<double>();
    if (!std::isfinite(x) || !std::isfinite(y))
      throw ValidationError(where + "[" + std::to_string(i) +
                            "] has a non-finite coordinate");
    out.push_back({ x, y });
  }
  return out;
}

PointData load_json(std::istream& in)
{
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), line_of_offset(text, e.byte ? e.byte - 1 : 0));
  }
  if (!doc.is_object())
    throw ParseError("top-level JSON value must be an object", 1);

  std::optional<RectDomain> domain;
  if (auto it = doc.find("domain"); it != doc.end() && !it->is_null()) {
    const auto& d = *it;
    for (const char* key : { "xmin", "xmax", "ymin", "ymax" })
      if (!d.contains(key) || !d[key].is_number())
        throw ParseError(std::string("domain.") + key + " missing or not a number", 0);
    domain.emplace(d["xmin"].get<double>(), d["xmax"].get<double>(),
                   d["ymin"].get<double>(), d["ymax"].get<double>());
  }

  const bool has_points = doc.contains("points");
  const bool has_batches = doc.contains("batches");
  if (has_points == has_batches)
    throw ParseError("exactly one of 'points' or 'batches' is required", 0);

  if (has_points)
    return PointSet(json_points(doc["points"], "points"), domain);

  const auto& arr = doc["batches"];
  if (!arr.is_array())
    throw ParseError("batches must be an array", 0);
  std::vector<PointSet> batches;
  for (std::size_t i = 0; i < arr.size(); ++i)
    batches.emplace_back(json_points(arr[i], "batches[" + std::to_string(i) + "]"),
                         domain);
  return BatchedPointSet(std::move(batches), domain);
}

nlohmann::json domain_json(const RectDomain& d)
{
  return { { "xmin", d.xmin() }, { "xmax", d.xmax() }, { "ymin", d.ymin() },
           { "ymax", d.ymax() } };
}

nlohmann::json points_json(const PointSet& ps)
{
  auto arr = nlohmann::json::array();
  for (const auto& p : ps)
    arr.push_back({ p.x, p.y });
  return arr;
}

} // namespace

std::string format_double(double v)
{
  char buf[64];
  const auto [ptr, ec] =
    std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

PointData load_points(std::istream& in, PointFormat format)
{
  return format == PointFormat::json ? load_json(in) : load_csv(in);
}

PointFormat format_for_path(const std::filesystem::path& path)
{
  return path.extension() == ".json" ? PointFormat::json : PointFormat::csv;
}

PointData load_points_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  return load_points(in, format_for_path(path));
}

void save_points(std::ostream& out, const PointData& data, PointFormat format)
{
  if (format == PointFormat::csv) {
    if (const auto* batched = std::get_if<BatchedPointSet>(&data)) {
      out << "x,y,batch\n";
      for (std::size_t b = 0; b < batched->batch_count(); ++b)
        for (const auto& p : batched->batch(b))
          out << format_double(p.x) << ',' << format_double(p.y) << ',' << b << '\n';
    } else {
      out << "x,y\n";
      for (const auto& p : std::get<PointSet>(data))
        out << format_double(p.x) << ',' << format_double(p.y) << '\n';
    }
    return;
  }

  nlohmann::json doc = nlohmann::json::object();
  if (const auto& d = domain_of(data))
    doc["domain"] = domain_json(*d);
  if (const auto* batched = std::get_if<BatchedPointSet>(&data)) {
    auto arr = nlohmann::json::array();
    for (const auto& b : batched->batches())
      arr.push_back(points_json(b));
    doc["batches"] = std::move(arr);
  } else {
    doc["points"] = points_json(std::get<PointSet>(data));
  }
  out << doc.dump() << '\n';
}

void save_points_file(const std::filesystem::path& path, const PointData& data)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write " + path.string());
  save_points(out, data, format_for_path(path));
  if (!out)
    throw IoError("write failed for " + path.string());
}

} // namespace sdetect
