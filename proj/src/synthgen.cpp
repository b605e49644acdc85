#include "sdetect/synthgen.hpp"

#include "sdetect/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <unordered_map>

namespace sdetect {

namespace {

using Term = Polynomial2::Term;

const RectDomain unit_square{ -1.0, 1.0, -1.0, 1.0 };

Polynomial2 radial(double r)
{
  return Polynomial2({ { 2, 0, 1.0 }, { 0, 2, 1.0 }, { 0, 0, -r * r } });
}

/// Uniform doubles from the top 53 bits, independent of the standard library.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(seed)
  {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::mt19937_64 engine_;
};

/// Spatial hash for the minimum-separation test.
class SeparationGrid
{
public:
  explicit SeparationGrid(double sep)
    : sep_(sep)
  {}

  bool admits(Point2 p) const
  {
    if (sep_ <= 0.0)
      return true;
    const auto [cx, cy] = cell(p);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end())
          continue;
        for (const Point2& q : it->second)
          if (squared_distance(p, q) < sep_ * sep_)
            return false;
      }
    return true;
  }

  void insert(Point2 p)
  {
    if (sep_ <= 0.0)
      return;
    const auto [cx, cy] = cell(p);
    cells_[key(cx, cy)].push_back(p);
  }

private:
  std::pair<std::int64_t, std::int64_t> cell(Point2 p) const
  {
    return { static_cast<std::int64_t>(std::floor(p.x / sep_)),
             static_cast<std::int64_t>(std::floor(p.y / sep_)) };
  }
  static std::uint64_t key(std::int64_t x, std::int64_t y)
  {
    return (static_cast<std::uint64_t>(x) << 32) ^ (static_cast<std::uint64_t>(y) & 0xffffffffu);
  }

  double sep_;
  std::unordered_map<std::uint64_t, std::vector<Point2>> cells_;
};

double norm(Point2 v)
{
  return std::hypot(v.x, v.y);
}

} // namespace

CurveSpec CurveSpec::circle(double radius)
{
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw ArgumentError("circle radius must be positive");
  return CurveSpec(Kind::circle, radius, 0.0, radial(radius), unit_square);
}

CurveSpec CurveSpec::lshape(double x0, double y0)
{
  if (!std::isfinite(x0) || !std::isfinite(y0))
    throw ArgumentError("lshape corner must be finite");
  Polynomial2 p({ { 1, 1, 1.0 }, { 1, 0, -y0 }, { 0, 1, -x0 }, { 0, 0, x0 * y0 } });
  return CurveSpec(Kind::lshape, x0, y0, std::move(p), unit_square);
}

CurveSpec CurveSpec::xshape()
{
  return CurveSpec(Kind::xshape, 0.0, 0.0, Polynomial2({ { 2, 0, 1.0 }, { 0, 2, -1.0 } }),
                   unit_square);
}

CurveSpec CurveSpec::semicircles(double r1, double r2)
{
  if (!(r1 > 0.0) || !(r2 > 0.0) || !std::isfinite(r1) || !std::isfinite(r2))
    throw ArgumentError("semicircle radii must be positive");
  return CurveSpec(Kind::semicircles, r1, r2, radial(r1) * radial(r2),
                   RectDomain(0.0, 1.0, -1.0, 1.0));
}

CurveSpec CurveSpec::custom(Polynomial2 poly, RectDomain domain)
{
  if (poly.terms().empty())
    throw ArgumentError("custom curve polynomial is identically zero");
  return CurveSpec(Kind::custom_poly, 0.0, 0.0, std::move(poly), domain);
}

CurveSpec CurveSpec::parse(const std::string& text)
{
  if (text == "circle")
    return circle();
  if (text == "lshape")
    return lshape();
  if (text == "xshape")
    return xshape();
  if (text == "semicircles")
    return semicircles();
  if (text.starts_with("poly:"))
    return load_custom(text.substr(5));
  throw ArgumentError("unknown curve '" + text +
                      "' (circle, lshape, xshape, semicircles, poly:<file>)");
}

CurveSpec CurveSpec::load_custom(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open curve file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }
  try {
    const int degree = j.at("degree").get<int>();
    const auto coeffs = j.at("coefficients").get<std::vector<double>>();
    RectDomain domain = unit_square;
    if (j.contains("domain")) {
      const auto d = j.at("domain").get<std::vector<double>>();
      if (d.size() != 4)
        throw ValidationError("curve domain needs 4 numbers");
      domain = RectDomain(d[0], d[1], d[2], d[3]);
    }
    return custom(Polynomial2::from_monomial_coefficients(degree, coeffs), domain);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("curve file: ") + e.what());
  }
}

CurveSpec CurveSpec::with_domain(RectDomain domain) const
{
  CurveSpec s = *this;
  s.domain_ = domain;
  return s;
}

std::string CurveSpec::name() const
{
  switch (kind_) {
    case Kind::circle: return "circle";
    case Kind::lshape: return "lshape";
    case Kind::xshape: return "xshape";
    case Kind::semicircles: return "semicircles";
    case Kind::custom_poly: return "custom_poly";
  }
  return "custom_poly";
}

void GenParams::validate() const
{
  if (grid < 2)
    throw ArgumentError("grid must have at least 2 nodes per axis");
  if (!(tube_width > 0.0) || !std::isfinite(tube_width))
    throw ArgumentError("tube width must be positive");
  if (!(decay > 0.0 && decay < 1.0))
    throw ArgumentError("decay factor must lie in (0, 1)");
  if (!(min_separation >= 0.0) || !std::isfinite(min_separation))
    throw ArgumentError("minimum separation must be non-negative");
  if (!(outlier_fraction >= 0.0 && outlier_fraction <= 1.0))
    throw ArgumentError("outlier fraction must lie in [0, 1]");
  if (!batch_sizes.empty() && batch_sizes.size() != batches)
    throw ArgumentError("batch_sizes lists " + std::to_string(batch_sizes.size()) +
                        " sizes for " + std::to_string(batches) + " batches");
  if (max_attempts == 0)
    throw ArgumentError("max_attempts must be positive");
}

std::size_t GenParams::tube_count(std::size_t i) const
{
  if (!batch_sizes.empty())
    return batch_sizes.at(i - 1);
  return tube_points * i / batches - tube_points * (i - 1) / batches;
}

LabeledData generate_labeled(const CurveSpec& spec, const GenParams& params)
{
  params.validate();
  const RectDomain& dom = spec.domain();
  const Polynomial2& F = spec.polynomial();
  Rng rng(params.seed);
  SeparationGrid separation(params.min_separation);

  std::vector<PointSet> batches;
  std::vector<std::vector<bool>> outlier;

  std::vector<Point2> grid;
  const auto g = static_cast<double>(params.grid - 1);
  for (std::size_t i = 0; i < params.grid; ++i)
    for (std::size_t j = 0; j < params.grid; ++j) {
      const double x = i + 1 == params.grid ? dom.xmax() : dom.xmin() + dom.width() * static_cast<double>(i) / g;
      const double y = j + 1 == params.grid ? dom.ymax() : dom.ymin() + dom.height() * static_cast<double>(j) / g;
      grid.push_back({ x, y });
      separation.insert(grid.back());
    }
  outlier.emplace_back(grid.size(), false);
  batches.emplace_back(std::move(grid), dom);

  for (std::size_t b = 1; b <= params.batches; ++b) {
    const double width = params.tube_width * std::pow(params.decay, static_cast<double>(b));
    const std::size_t n = params.tube_count(b);
    std::vector<Point2> pts;
    pts.reserve(n);
    std::size_t attempts = 0;
    while (pts.size() < n) {
      if (++attempts > params.max_attempts)
        throw GenerationError("batch " + std::to_string(b) + ": only " +
                              std::to_string(pts.size()) + " of " + std::to_string(n) +
                              " tube points after " + std::to_string(params.max_attempts) +
                              " attempts (is the curve inside the domain?)");
      Point2 p{ rng.uniform(dom.xmin(), dom.xmax()), rng.uniform(dom.ymin(), dom.ymax()) };
      // Newton steps onto the zero set.
      for (int it = 0; it < 50; ++it) {
        const double f = F(p);
        if (std::abs(f) < 1e-14)
          break;
        const Point2 gr = F.gradient(p);
        const double gg = std::max(gr.x * gr.x + gr.y * gr.y, 1e-16);
        p = { p.x - f * gr.x / gg, p.y - f * gr.y / gg };
      }
      const Point2 gr = F.gradient(p);
      const double gn = std::max(norm(gr), 1e-8);
      const double offset = rng.uniform(-1.0, 1.0) * width;
      const Point2 c{ p.x + offset * gr.x / gn, p.y + offset * gr.y / gn };
      if (!is_finite(c) || !dom.contains(c))
        continue;
      if (std::abs(F(c)) / std::max(norm(F.gradient(c)), 1e-8) > width)
        continue;
      if (!separation.admits(c))
        continue;
      separation.insert(c);
      pts.push_back(c);
    }
    std::vector<bool> mask(pts.size(), false);
    const auto n_out = static_cast<std::size_t>(
      std::ceil(params.outlier_fraction * static_cast<double>(n) - 1e-12));
    for (std::size_t k = 0; k < n_out; ++k) {
      pts.push_back({ rng.uniform(dom.xmin(), dom.xmax()), rng.uniform(dom.ymin(), dom.ymax()) });
      mask.push_back(true);
    }
    outlier.push_back(std::move(mask));
    batches.emplace_back(std::move(pts), dom);
  }
  return LabeledData{ BatchedPointSet(std::move(batches), dom), std::move(outlier) };
}

BatchedPointSet generate(const CurveSpec& spec, const GenParams& params)
{
  return generate_labeled(spec, params).data;
}

double exact_curve_distance(const CurveSpec& spec, Point2 p)
{
  const double r = std::hypot(p.x, p.y);
  switch (spec.kind()) {
    case CurveSpec::Kind::circle:
      return std::abs(r - spec.radius());
    case CurveSpec::Kind::semicircles:
      return std::min(std::abs(r - spec.r1()), std::abs(r - spec.r2()));
    case CurveSpec::Kind::xshape:
      return std::min(std::abs(p.x - p.y), std::abs(p.x + p.y)) / std::sqrt(2.0);
    case CurveSpec::Kind::lshape:
      return std::min(std::abs(p.x - spec.x0()), std::abs(p.y - spec.y0()));
    case CurveSpec::Kind::custom_poly:
      break;
  }
  throw ArgumentError("no closed-form distance for a custom polynomial curve");
}

} // namespace sdetect
