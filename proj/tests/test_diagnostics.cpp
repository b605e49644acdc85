#include "sdetect/diagnostics.hpp"
#include "sdetect/error.hpp"
#include "sdetect/report.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace sdetect;

namespace {

const RectDomain square{ -1, 1, -1, 1 };

DetectionModel model_of(const CurveSpec& spec, const Basis& basis)
{
  return DetectionModel(basis, exact_coefficients(spec, basis));
}

void check_certified(const TracedCurve& c, const DetectionModel& m)
{
  for (const auto& seg : c.segments)
    for (const auto& v : seg) {
      CHECK(std::abs(m(v)) <= c.tolerance);
      CHECK(c.domain.contains(v));
    }
}

} // namespace

TEST_CASE("circle model traces a closed loop of radius 0.5")
{
  const DetectionModel m = model_of(CurveSpec::circle(), Basis::monomial(2));
  const TracedCurve c = trace_zero_set(m, square, 256);
  REQUIRE(c.segments.size() == 1);
  CHECK(c.segments[0].front() == c.segments[0].back());
  for (const auto& v : c.segments[0])
    CHECK(std::abs(std::hypot(v.x, v.y) - 0.5) <= 1e-3);
  check_certified(c, m);
  CHECK(c.length() == doctest::Approx(M_PI).epsilon(1e-3));
}

TEST_CASE("constant model has no zero set")
{
  Eigen::VectorXd c = Eigen::VectorXd::Zero(6);
  c[0] = 1.0;
  CHECK(trace_zero_set(DetectionModel(Basis::monomial(2), c), square, 64).empty());
  CHECK(trace_zero_set(DetectionModel(Basis::monomial(2), -c), square, 64).empty());
}

TEST_CASE("X-shape traces both diagonals through the saddle")
{
  Eigen::VectorXd c = Eigen::VectorXd::Zero(6);
  c[2] = -std::sqrt(0.5);
  c[5] = std::sqrt(0.5);
  const DetectionModel m(Basis::monomial(2), c);
  for (const int res : { 2, 3, 64, 65, 256 }) {
    const TracedCurve t = trace_zero_set(m, square, res);
    REQUIRE(!t.empty());
    for (const auto& seg : t.segments)
      for (const auto& v : seg)
        CHECK(std::abs(std::abs(v.x) - std::abs(v.y)) <= 1e-3);
    check_certified(t, m);
    INFO("resolution " << res << " segments " << t.segments.size());
    if (res >= 64)
      CHECK(t.length() == doctest::Approx(4 * std::sqrt(2.0)).epsilon(0.05));
  }
}

TEST_CASE("Fourier models trace too")
{
  const Basis b = Basis::fourier_polar(2, 0);
  const CurveSpec spec = CurveSpec::semicircles();
  const DetectionModel m = model_of(spec, b);
  const TracedCurve t = trace_zero_set(m, spec.domain(), 200);
  REQUIRE(t.segments.size() == 2);
  for (const auto& seg : t.segments)
    for (const auto& v : seg)
      CHECK(std::min(std::abs(std::hypot(v.x, v.y) - 0.5), std::abs(std::hypot(v.x, v.y) - 0.75)) <= 1e-3);
  check_certified(t, m);
}

TEST_CASE("doubling the resolution keeps every component")
{
  const Basis b = Basis::monomial(4);
  for (const CurveSpec& spec : { CurveSpec::circle(), CurveSpec::xshape(), CurveSpec::semicircles() }) {
    const DetectionModel m = model_of(spec, b);
    std::size_t previous = 0;
    for (const int res : { 16, 32, 64, 128 }) {
      const TracedCurve t = trace_zero_set(m, spec.domain(), res);
      CHECK(t.segments.size() >= previous);
      previous = t.segments.size();
    }
    CHECK(previous > 0);
  }
}

TEST_CASE("resolution must be at least 2")
{
  const DetectionModel m = model_of(CurveSpec::circle(), Basis::monomial(2));
  CHECK_THROWS_AS(trace_zero_set(m, square, 1), ArgumentError);
  CHECK_NOTHROW(trace_zero_set(m, square, 2));
}

TEST_CASE("radius function")
{
  const DetectionModel m = model_of(CurveSpec::circle(), Basis::monomial(2));
  const TracedCurve c = trace_zero_set(m, square, 256);
  const RadiusSamples r = radius_function(c, 100);
  REQUIRE(r.count() == 100);
  for (double v : r.values)
    CHECK(std::abs(v - 0.5) <= 1e-3);
  CHECK(r.mean() == doctest::Approx(0.5).epsilon(1e-3));

  const RadiusSamples one = radius_function(c, 1);
  CHECK(one.count() == 1);
  CHECK(std::isfinite(one.values[0]));

  CHECK_THROWS_AS(radius_function(TracedCurve{}, 10), Error);
  CHECK_THROWS_AS(radius_function(c, 0), ArgumentError);
}

TEST_CASE("radius samples are spaced evenly by arc length")
{
  TracedCurve c;
  c.segments = { { { 0, 0 }, { 1, 0 } }, { { 0, 1 }, { 0, 2 }, { 0, 3 } } };
  const RadiusSamples r = radius_function(c, 3);
  REQUIRE(r.count() == 3);
  CHECK(r.points[0].x == doctest::Approx(0.5));
  CHECK(r.points[1].y == doctest::Approx(1.5));
  CHECK(r.points[2].y == doctest::Approx(2.5));
  CHECK(r.values[2] == doctest::Approx(2.5));
}

TEST_CASE("curve writers")
{
  const DetectionModel m = model_of(CurveSpec::circle(), Basis::monomial(2));
  const TracedCurve c = trace_zero_set(m, square, 16);
  std::ostringstream csv;
  write_curve_csv(csv, c);
  const std::string text = csv.str();
  CHECK(text.rfind("segment_id,x,y\n", 0) == 0);
  std::size_t rows = 0;
  for (char ch : text)
    rows += ch == '\n';
  CHECK(rows == c.vertex_count() + 1);

  std::ostringstream svg;
  SvgLayers layers;
  layers.input = PointSet({ { 0.1, 0.2 } });
  layers.filtered = PointSet({ { 0.1, 0.2 } });
  layers.metadata = R"({"a":"<b>"})";
  write_curve_svg(svg, c, layers);
  const std::string s = svg.str();
  CHECK(s.find("<svg") == 0);
  CHECK(s.find("id=\"domain\"") != std::string::npos);
  CHECK(s.find("id=\"input\"") != std::string::npos);
  CHECK(s.find("id=\"filtered\"") != std::string::npos);
  CHECK(s.find("<polyline") != std::string::npos);
  CHECK(s.find("&lt;b&gt;") != std::string::npos);
}
