#include "sdetect/error.hpp"
#include "sdetect/io.hpp"
#include "sdetect/point_set.hpp"
#include "sdetect/synthgen.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace sdetect;

namespace {

PointData parse_csv(const std::string& text)
{
  std::istringstream in(text);
  return load_points(in, PointFormat::csv);
}

PointData parse_json(const std::string& text)
{
  std::istringstream in(text);
  return load_points(in, PointFormat::json);
}

template <class E>
std::size_t error_line(const std::string& csv)
{
  try {
    parse_csv(csv);
  } catch (const E& e) {
    return e.line();
  }
  FAIL("expected an exception");
  return 0;
}

} // namespace

TEST_CASE("RectDomain enforces ordered bounds")
{
  CHECK_NOTHROW(RectDomain(-1, 1, -1, 1));
  CHECK_THROWS_AS(RectDomain(1, 1, -1, 1), ValidationError);
  CHECK_THROWS_AS(RectDomain(-1, 1, 2, 1), ValidationError);
  const RectDomain d(0, 1, -1, 1);
  CHECK(d.contains({ 0, -1 }));
  CHECK(d.contains({ 1, 1 }));
  CHECK_FALSE(d.contains({ 1.0000001, 0 }));
}

TEST_CASE("PointSet rejects non-finite points")
{
  CHECK_THROWS_AS(PointSet({ { 0, std::nan("") } }), ValidationError);
  CHECK_THROWS_AS(PointSet({ { std::numeric_limits<double>::infinity(), 0 } }), ValidationError);
}

TEST_CASE("PointSet prefix and subset keep order")
{
  const PointSet p({ { 0, 0 }, { 1, 0 }, { 2, 0 }, { 3, 0 } });
  CHECK(p.prefix(2).size() == 2);
  CHECK(p.prefix(2)[1] == Point2{ 1, 0 });
  CHECK(p.prefix(10).size() == 4);
  const std::vector<std::size_t> idx{ 3, 1 };
  const PointSet s = p.subset(idx);
  CHECK(s[0] == Point2{ 3, 0 });
  CHECK(s[1] == Point2{ 1, 0 });
}

TEST_CASE("CSV without batch column gives a PointSet")
{
  const PointData d = parse_csv("x,y\n0.5,0.0\n0.0,0.5");
  REQUIRE(std::holds_alternative<PointSet>(d));
  const auto p = std::get<PointSet>(d);
  CHECK(p.size() == 2);
  CHECK(p[0] == Point2{ 0.5, 0.0 });
  CHECK(p[1] == Point2{ 0.0, 0.5 });
}

TEST_CASE("CSV with batch column gives a BatchedPointSet")
{
  const PointData d = parse_csv("x,y,batch\n0,0,0\n1,1,1");
  REQUIRE(std::holds_alternative<BatchedPointSet>(d));
  const auto b = std::get<BatchedPointSet>(d);
  CHECK(b.refinement_count() == 1);
  CHECK(b.batch(0).size() == 1);
  CHECK(b.batch(1)[0] == Point2{ 1, 1 });
}

TEST_CASE("CSV batches are grouped ascending with source order kept")
{
  const auto b = std::get<BatchedPointSet>(
    parse_csv("x,y,batch\n5,5,1\n0,0,0\n6,6,1\n1,1,0\n"));
  REQUIRE(b.batch_count() == 2);
  CHECK(b.batch(0)[0] == Point2{ 0, 0 });
  CHECK(b.batch(0)[1] == Point2{ 1, 1 });
  CHECK(b.batch(1)[0] == Point2{ 5, 5 });
  CHECK(b.batch(1)[1] == Point2{ 6, 6 });
}

TEST_CASE("CSV accepts CRLF and blank lines")
{
  const auto p = std::get<PointSet>(parse_csv("x,y\r\n1,2\r\n\r\n3,4\r\n"));
  CHECK(p.size() == 2);
  CHECK(p[1] == Point2{ 3, 4 });
}

TEST_CASE("CSV errors carry 1-based line numbers")
{
  CHECK(error_line<ValidationError>("x,y\n0.1,nan") == 2);
  CHECK(error_line<ParseError>("x,y\n1,2\n3\n") == 3);
  CHECK(error_line<ParseError>("x,y\n1,2\n1,abc\n") == 3);
  CHECK(error_line<ParseError>("x,y\n1,2,3\n") == 2);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n"), ParseError);
  CHECK_THROWS_AS(parse_csv(""), ParseError);
}

TEST_CASE("CSV batch indices must be contiguous from zero")
{
  CHECK_THROWS_AS(parse_csv("x,y,batch\n0,0,0\n1,1,2\n"), ValidationError);
  CHECK_THROWS_AS(parse_csv("x,y,batch\n0,0,1\n"), ValidationError);
  CHECK_THROWS_AS(parse_csv("x,y,batch\n0,0,-1\n"), ValidationError);
  CHECK_THROWS_AS(parse_csv("x,y,batch\n0,0,0.5\n"), Error);
}

TEST_CASE("JSON points and batches")
{
  const auto p = std::get<PointSet>(parse_json(
    R"({"domain": {"xmin": -1, "xmax": 1, "ymin": -2, "ymax": 2}, "points": [[0.5, 0], [0, 0.5]]})"));
  CHECK(p.size() == 2);
  REQUIRE(p.domain());
  CHECK(p.domain()->ymin() == -2);

  const auto b = std::get<BatchedPointSet>(parse_json(R"({"batches": [[[0,0]], [[1,1],[2,2]]]})"));
  CHECK(b.refinement_count() == 1);
  CHECK(b.batch(1).size() == 2);

  CHECK_THROWS_AS(parse_json(R"({"points": [[0,0]], "batches": [[[0,0]]]})"), Error);
  CHECK_THROWS_AS(parse_json(R"({"points": [[0]]})"), Error);
  CHECK_THROWS_AS(parse_json("{\"points\": [[0,0],\n [1,"), ParseError);
  CHECK_THROWS_AS(parse_json(R"({"domain": {"xmin": 1, "xmax": 0, "ymin": 0, "ymax": 1}, "points": [[0,0]]})"),
                  ValidationError);
}

TEST_CASE("merge_batches concatenates in index order and keeps duplicates")
{
  const BatchedPointSet b({ PointSet({ { 0, 0 } }), PointSet({ { 1, 1 }, { 0, 0 } }) });
  const PointSet m = merge_batches(b);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == Point2{ 0, 0 });
  CHECK(m[1] == Point2{ 1, 1 });
  CHECK(m[2] == Point2{ 0, 0 });

  const BatchedPointSet single({ PointSet({ { 2, 3 }, { 4, 5 } }) });
  const PointSet s = merge_batches(single);
  CHECK(std::vector<Point2>(s.begin(), s.end()) ==
        std::vector<Point2>(single.batch(0).begin(), single.batch(0).end()));
}

TEST_CASE("BatchedPointSet invariants")
{
  CHECK_THROWS_AS(BatchedPointSet({}), ValidationError);
  CHECK_THROWS_AS(BatchedPointSet({ PointSet() }), ValidationError);
}

TEST_CASE("generator fixture merges to 322 points")
{
  const BatchedPointSet b = generate(CurveSpec::circle(), GenParams{});
  CHECK(b.batch_count() == 18);
  CHECK(merge_batches(b).size() == 322);
}

TEST_CASE("save then load is bit-exact for CSV and JSON")
{
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<PointSet> batches;
  for (int b = 0; b < 3; ++b) {
    std::vector<Point2> pts;
    for (int i = 0; i < 40; ++i)
      pts.push_back({ u(rng) * std::pow(10.0, (i % 7) - 3), u(rng) / 3.0 });
    pts.push_back({ 5e-324, -1e300 });
    pts.push_back({ 0.1, -0.0 });
    batches.emplace_back(std::move(pts));
  }
  const BatchedPointSet data(batches, RectDomain(-1, 1, -1, 1));

  for (const PointFormat fmt : { PointFormat::csv, PointFormat::json }) {
    std::stringstream ss;
    save_points(ss, data, fmt);
    const auto back = std::get<BatchedPointSet>(load_points(ss, fmt));
    REQUIRE(back.batch_count() == data.batch_count());
    for (std::size_t b = 0; b < data.batch_count(); ++b)
      for (std::size_t i = 0; i < data.batch(b).size(); ++i) {
        CHECK(back.batch(b)[i].x == data.batch(b)[i].x);
        CHECK(back.batch(b)[i].y == data.batch(b)[i].y);
      }
  }

  std::stringstream ss;
  save_points(ss, PointData(batches[0]), PointFormat::csv);
  const auto p = std::get<PointSet>(load_points(ss, PointFormat::csv));
  CHECK(std::vector<Point2>(p.begin(), p.end()) ==
        std::vector<Point2>(batches[0].begin(), batches[0].end()));
}

TEST_CASE("format_for_path picks JSON by extension")
{
  CHECK(format_for_path("a/b.json") == PointFormat::json);
  CHECK(format_for_path("a/b.csv") == PointFormat::csv);
  CHECK(format_for_path("noext") == PointFormat::csv);
}

TEST_CASE("missing file is an I/O error")
{
  CHECK_THROWS_AS(load_points_file("/nonexistent/dir/points.csv"), IoError);
}
