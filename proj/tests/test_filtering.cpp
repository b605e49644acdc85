#include "oracles.hpp"

#include "sdetect/error.hpp"
#include "sdetect/filtering.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace sdetect;

namespace {

std::vector<Point2> random_points(std::mt19937_64& rng, std::size_t n, double spread = 1.0)
{
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back({ u(rng), u(rng) });
  return pts;
}

bool is_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b)
{
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<Point2> circle_with_corners()
{
  std::vector<Point2> pts;
  for (int i = 0; i < 50; ++i) {
    const double t = 2 * M_PI * (i + 0.5) / 50;
    pts.push_back({ 0.5 * std::cos(t), 0.5 * std::sin(t) });
  }
  for (const Point2 c : { Point2{ 0.9, 0.9 }, Point2{ -0.9, 0.9 }, Point2{ -0.9, -0.9 },
                          Point2{ 0.9, -0.9 }, Point2{ 0.95, 0.0 } })
    pts.push_back(c);
  return pts;
}

} // namespace

TEST_CASE("kde_density hand values")
{
  // Frozen from an independent 30-digit evaluation.
  CHECK(kde_density(PointSet({ { 0.3, -0.2 } }), 1.0)[0] == doctest::Approx(0.1591549431).epsilon(1e-10));
  const auto two = kde_density(PointSet({ { 0, 0 }, { 0, 0 } }), 1.0);
  CHECK(two[0] == doctest::Approx(0.1591549431).epsilon(1e-10));
  CHECK(two[1] == doctest::Approx(0.1591549431).epsilon(1e-10));
  const auto pair = kde_density(PointSet({ { 0, 0 }, { 1, 0 } }), 1.0);
  CHECK(pair[0] == doctest::Approx(0.1278436479).epsilon(1e-10));
  CHECK(pair[1] == doctest::Approx(0.1278436479).epsilon(1e-10));
}

TEST_CASE("silverman bandwidth")
{
  CHECK(silverman_bandwidth(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(silverman_bandwidth(100) == doctest::Approx(0.4641588834).epsilon(1e-10));
  CHECK(silverman_bandwidth(13664) == doctest::Approx(0.2045205841).epsilon(1e-10));
  CHECK(silverman_bandwidth(300) == doctest::Approx(0.3864972939).epsilon(1e-10));
  CHECK(Bandwidth::silverman().resolve(100) == silverman_bandwidth(100));
  CHECK(Bandwidth::fixed(0.3).resolve(100) == 0.3);
  CHECK(Bandwidth::parse("0.25").resolve(7) == 0.25);
  CHECK(Bandwidth::parse("silverman").is_silverman());
  CHECK_THROWS_AS(Bandwidth::fixed(0.0), ArgumentError);
  CHECK_THROWS_AS(Bandwidth::parse("wide"), ArgumentError);
}

TEST_CASE("kde_filter keeps everything for tiny gamma")
{
  std::mt19937_64 rng(3);
  const PointSet pts(random_points(rng, 40));
  CHECK(kde_filter(pts, { Bandwidth::silverman(), 1e-9 }).kept.size() == 40);
}

TEST_CASE("kde_filter removes corner outliers around a circle")
{
  const PointSet pts(circle_with_corners());
  const FilterReport r = kde_filter(pts, { Bandwidth::silverman(), 0.6 });

  // Brute-force threshold with an independent density loop.
  const double h = std::pow(55.0, -1.0 / 6.0);
  std::vector<double> rho(55, 0.0);
  for (std::size_t j = 0; j < 55; ++j)
    for (std::size_t i = 0; i < 55; ++i)
      rho[j] += std::exp(-squared_distance(pts[i], pts[j]) / (2 * h * h)) / (2 * M_PI * 55 * h * h);
  const double top = *std::max_element(rho.begin(), rho.end());
  std::vector<std::size_t> expect;
  for (std::size_t j = 0; j < 55; ++j) {
    CHECK(r.scores[j] == doctest::Approx(rho[j]).epsilon(1e-12));
    if (rho[j] > 0.6 * top)
      expect.push_back(j);
  }
  CHECK(r.kept_indices == expect);
  REQUIRE(r.kept_indices.size() == 50);
  CHECK(r.kept_indices.back() == 49);
  CHECK(r.bandwidth == doctest::Approx(h));
  CHECK(r.threshold_value == doctest::Approx(0.6 * top));
}

TEST_CASE("kde_filter with gamma near one keeps only the larger cluster")
{
  std::vector<Point2> pts;
  for (int i = 0; i < 6; ++i)
    pts.push_back({ -0.5, 0.0 });
  for (int i = 0; i < 3; ++i)
    pts.push_back({ 0.5, 0.0 });
  const FilterReport r = kde_filter(PointSet(pts), { Bandwidth::fixed(0.1), 0.95 });
  CHECK(r.kept_indices == std::vector<std::size_t>{ 0, 1, 2, 3, 4, 5 });
}

TEST_CASE("knn collinear hand examples")
{
  const PointSet pts({ { 0, 0 }, { 1, 0 }, { 2, 0 } });
  const FilterReport k1 = knn_filter(pts, { 1, 0.5 });
  CHECK(k1.scores == std::vector<double>{ 1, 1, 1 });
  CHECK(k1.threshold_value == 2.0);
  CHECK(k1.kept_indices.size() == 3);

  const FilterReport k2 = knn_filter(pts, { 2, 0.6 });
  CHECK(k2.scores == std::vector<double>{ 5, 2, 5 });
  CHECK(k2.extremum == 2.0);
  CHECK(k2.threshold_value == doctest::Approx(10.0 / 3.0));
  CHECK(k2.kept_indices == std::vector<std::size_t>{ 1 });
  CHECK(k2.kept.size() == 1);
  CHECK(k2.kept[0] == Point2{ 1, 0 });
}

TEST_CASE("knn argument checks")
{
  const PointSet pts({ { 0, 0 }, { 1, 0 }, { 2, 0 } });
  CHECK_THROWS_AS(knn_filter(pts, { 3, 0.5 }), ArgumentError);
  CHECK_THROWS_AS(knn_filter(pts, { 0, 0.5 }), ArgumentError);
  CHECK_THROWS_AS(knn_filter(pts, { 1, 1.0 }), ArgumentError);
  CHECK_THROWS_AS(knn_filter(pts, { 1, 0.0 }), ArgumentError);
  CHECK_THROWS_AS(kde_filter(pts, { Bandwidth::silverman(), 1.5 }), ArgumentError);
  CHECK_THROWS_AS(kde_filter(PointSet(), { Bandwidth::silverman(), 0.5 }), ArgumentError);
}

TEST_CASE("knn with tiny gamma keeps everything")
{
  std::mt19937_64 rng(5);
  const PointSet pts(random_points(rng, 30));
  CHECK(knn_filter(pts, { 4, 1e-9 }).kept.size() == 30);
}

TEST_CASE("knn distance ties go to the lower index")
{
  const PointSet pts({ { 0, 0 }, { 0, 1 }, { 1, 0 }, { -1, 0 }, { 0, -1 } });
  const auto nb = knn_neighbors(pts, 2);
  CHECK(nb[0] == std::vector<std::size_t>{ 1, 2 });
}

TEST_CASE("knn keeps all coincident points when the minimum score is zero")
{
  const PointSet pts({ { 0, 0 }, { 0, 0 }, { 0, 0 }, { 3, 3 } });
  const FilterReport r = knn_filter(pts, { 2, 0.6 });
  CHECK(r.extremum == 0.0);
  CHECK(r.kept_indices == std::vector<std::size_t>{ 0, 1, 2 });
}

TEST_CASE("knn neighbour sets match the full-sort oracle")
{
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(rng() % 196);
    auto pts = random_points(rng, n);
    if (trial % 4 == 0) // lattice points produce many exact ties
      for (auto& p : pts)
        p = { std::round(p.x * 4) / 4, std::round(p.y * 4) / 4 };
    const std::size_t k = 1 + rng() % std::min<std::size_t>(n - 1, 12);
    CHECK(knn_neighbors(PointSet(pts), k) == oracle::knn_full_sort(pts, k));
  }
}

TEST_CASE("filters are monotone in gamma")
{
  std::mt19937_64 rng(17);
  const std::vector<double> gammas{ 0.05, 0.2, 0.4, 0.6, 0.8, 0.95 };
  for (int trial = 0; trial < 10; ++trial) {
    const PointSet pts(random_points(rng, 60));
    for (std::size_t g = 1; g < gammas.size(); ++g) {
      const auto kd_lo = kde_filter(pts, { Bandwidth::silverman(), gammas[g - 1] }).kept_indices;
      const auto kd_hi = kde_filter(pts, { Bandwidth::silverman(), gammas[g] }).kept_indices;
      CHECK(is_subset(kd_hi, kd_lo));
      const auto kn_lo = knn_filter(pts, { 5, gammas[g - 1] }).kept_indices;
      const auto kn_hi = knn_filter(pts, { 5, gammas[g] }).kept_indices;
      CHECK(is_subset(kn_hi, kn_lo));
    }
  }
}

TEST_CASE("filters commute with translation; knn scores scale with s^2")
{
  std::mt19937_64 rng(23);
  auto pts = random_points(rng, 80);
  auto moved = pts;
  auto scaled = pts;
  for (auto& p : moved)
    p = { p.x + 0.375, p.y - 1.25 };
  for (auto& p : scaled)
    p = { p.x * 2, p.y * 2 };
  CHECK(kde_filter(PointSet(pts), { Bandwidth::silverman(), 0.6 }).kept_indices ==
        kde_filter(PointSet(moved), { Bandwidth::silverman(), 0.6 }).kept_indices);
  const auto a = knn_filter(PointSet(pts), { 5, 0.6 });
  CHECK(a.kept_indices == knn_filter(PointSet(moved), { 5, 0.6 }).kept_indices);
  const auto s = knn_filter(PointSet(scaled), { 5, 0.6 });
  CHECK(s.kept_indices == a.kept_indices);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(s.scores[i] == doctest::Approx(4 * a.scores[i]).epsilon(1e-12));
}

TEST_CASE("kept set is permutation invariant for distinct distances")
{
  std::mt19937_64 rng(29);
  auto pts = random_points(rng, 70);
  std::vector<std::size_t> perm(pts.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
    perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Point2> shuffled;
  for (auto i : perm)
    shuffled.push_back(pts[i]);

  for (const FilterParams params : { FilterParams(KnnParams{ 4, 0.6 }),
                                     FilterParams(KdeParams{ Bandwidth::silverman(), 0.6 }) }) {
    const auto a = apply_filter(PointSet(pts), params).kept_indices;
    std::vector<std::size_t> b;
    for (auto i : apply_filter(PointSet(shuffled), params).kept_indices)
      b.push_back(perm[i]);
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("the extremal point always survives and kept is order-preserving")
{
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const PointSet pts(random_points(rng, 25));
    for (const FilterParams params : { FilterParams(KnnParams{ 3, 0.99 }),
                                       FilterParams(KdeParams{ Bandwidth::fixed(0.05), 0.99 }) }) {
      const FilterReport r = apply_filter(pts, params);
      REQUIRE(!r.kept_indices.empty());
      CHECK(std::is_sorted(r.kept_indices.begin(), r.kept_indices.end()));
      const auto best = r.method == FilterMethod::kde
                          ? std::max_element(r.scores.begin(), r.scores.end())
                          : std::min_element(r.scores.begin(), r.scores.end());
      const auto idx = static_cast<std::size_t>(best - r.scores.begin());
      CHECK(std::find(r.kept_indices.begin(), r.kept_indices.end(), idx) != r.kept_indices.end());
      for (std::size_t i = 0; i < r.kept_indices.size(); ++i)
        CHECK(r.kept[i] == pts[r.kept_indices[i]]);
    }
  }
}
