#include <doctest.h>

#include "support.hpp"

using namespace wasserlim;

TEST_CASE("point_interpolate examples") {
  auto path = graph_metric(3, {{0, 1, 1}, {1, 2, 1}});
  CHECK(point_interpolate(*path, 0, 2, 0.0).point == 0);
  CHECK(point_interpolate(*path, 0, 2, 1.0).point == 2);
  auto mid = point_interpolate(*path, 0, 2, 0.5);
  CHECK(mid.point == 1);
  CHECK(mid.defect == 0.0);
  auto quarter = point_interpolate(*path, 0, 2, 0.25);
  CHECK(quarter.point == 0);
  CHECK(quarter.defect == 0.5);
  // ties go toward x whichever end x is
  CHECK(point_interpolate(*path, 2, 0, 0.25).point == 2);
  CHECK(point_interpolate(*path, 0, 1, 0.5).point == 0);
  CHECK(point_interpolate(*path, 1, 0, 0.5).point == 1);

  auto metric = validate_metric({{0, 1}, {1, 0}});
  try {
    point_interpolate(*metric, 0, 1, 0.5);
    FAIL("expected NoGeodesicStructure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoGeodesicStructure);
  }
  CHECK_THROWS_AS(point_interpolate(*path, 0, 2, 1.5), Error);
}

TEST_CASE("lexicographic geodesic prefers low vertex ids") {
  // square 0-1-3, 0-2-3 with equal lengths
  auto sq = graph_metric(4, {{0, 2, 1}, {2, 3, 1}, {0, 1, 1}, {1, 3, 1}});
  CHECK(lexicographic_geodesic(*sq, 0, 3) == std::vector<PointId>{0, 1, 3});
  CHECK(lexicographic_geodesic(*sq, 3, 0) == std::vector<PointId>{3, 1, 0});
  CHECK(point_interpolate(*sq, 0, 3, 0.5).point == 1);
}

TEST_CASE("interpolated points lie on shortest paths") {
  CounterRng rng(41);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng.below(12);
    auto s = graph_metric(n, testing::random_connected_edges(rng, n, n));
    const PointId x = rng.below(n), y = rng.below(n);
    const double tt = rng.uniform();
    auto z = point_interpolate(*s, x, y, tt);
    CHECK((*s)(x, z.point) + (*s)(z.point, y) == doctest::Approx((*s)(x, y)).epsilon(1e-12));
    CHECK(z.defect == doctest::Approx(std::abs((*s)(x, z.point) - tt * (*s)(x, y))).epsilon(1e-12));
    CHECK(z.defect <= s->mesh() / 2.0 + 1e-12);
  }
}

TEST_CASE("w2_midpoint examples") {
  auto path = graph_metric(3, {{0, 1, 1}, {1, 2, 1}});
  auto mu = DiscreteMeasure(path, {1, 2, 3});
  auto same = w2_midpoint(mu, mu);
  CHECK(testing::to_vector(same.midpoint) == testing::to_vector(mu));
  CHECK(same.defect_start == 0.0);
  CHECK(same.defect_end == 0.0);

  auto diracs = w2_midpoint(DiscreteMeasure::dirac(path, 0), DiscreteMeasure::dirac(path, 2));
  CHECK(diracs.midpoint[1] == 1.0);
  CHECK(diracs.defect_start == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(diracs.defect_end == doctest::Approx(0.0).epsilon(1e-12));

  auto line = graph_metric(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
  auto r = w2_midpoint(DiscreteMeasure(line, {1, 0, 1, 0, 0}), DiscreteMeasure(line, {0, 0, 1, 0, 1}));
  CHECK(testing::to_vector(r.midpoint) == std::vector<double>{0, 0.5, 0, 0.5, 0});
  CHECK(r.w2 == doctest::Approx(2.0));
  CHECK(r.defect_start <= 1e-12);
  CHECK(r.defect_end <= 1e-12);
}

TEST_CASE("midpoint defects are bounded by the mesh") {
  CounterRng rng(42);
  for (int level = 2; level <= 6; ++level) {
    auto s = dyadic_interval_space(level);
    for (int t = 0; t < 15; ++t) {
      auto a = testing::random_measure(s, rng, 6), b = testing::random_measure(s, rng, 6);
      auto r = w2_midpoint(a, b);
      CHECK(r.defect_start <= s->mesh() + 1e-12);
      CHECK(r.defect_end <= s->mesh() + 1e-12);
      CHECK(r.rounding_defect <= s->mesh() / 2.0 + 1e-12);
      double total = 0.0;
      for (double w : r.midpoint.weights()) total += w;
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("exact-vertex midpoints have no defect") {
  // Every source and target sits on an even grid index, so every coupled
  // pair has its exact midpoint on the grid.
  CounterRng rng(43);
  auto s = dyadic_interval_space(6);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(s->size(), 0.0), b(s->size(), 0.0);
    for (int k = 0; k < 4; ++k) {
      a[2 * rng.below(33)] += rng.uniform(0.1, 1.0);
      b[2 * rng.below(33)] += rng.uniform(0.1, 1.0);
    }
    auto r = w2_midpoint(DiscreteMeasure(s, a), DiscreteMeasure(s, b));
    CHECK(r.rounding_defect == 0.0);
    CHECK(r.defect_start <= 1e-9);
    CHECK(r.defect_end <= 1e-9);
  }
}

TEST_CASE("displacement_path") {
  auto s = dyadic_interval_space(4);
  CounterRng rng(44);
  auto a = testing::random_measure(s, rng, 5), b = testing::random_measure(s, rng, 5);
  auto path = displacement_path(a, b, {0, 0.25, 0.5, 0.75, 1});
  REQUIRE(path.measures.size() == 5);
  CHECK(testing::to_vector(path.measures.front()) == testing::to_vector(a));
  CHECK(testing::to_vector(path.measures.back()) == testing::to_vector(b));
  CHECK(path.constant_speed_defect <= s->mesh() + 1e-12);
  CHECK(path.speed_defects.size() == 5);

  auto three = displacement_path(a, b);
  auto mid = w2_midpoint(a, b);
  CHECK(testing::to_vector(three.measures[1]) == testing::to_vector(mid.midpoint));

  auto d = displacement_path(DiscreteMeasure::dirac(s, 0), DiscreteMeasure::dirac(s, 16), {0, 0.25, 0.5, 1});
  CHECK(d.measures[1][4] == 1.0);
  CHECK(d.measures[2][8] == 1.0);
  CHECK(d.constant_speed_defect <= 1e-12);

  CHECK_THROWS_AS(displacement_path(a, b, {0, 0.5}), Error);
  CHECK_THROWS_AS(displacement_path(a, b, {-0.5, 0, 1}), Error);
}

TEST_CASE("constant speed holds on exact grids") {
  auto s = dyadic_interval_space(6);
  // endpoints on multiples of 4 so quarter points are vertices
  std::vector<double> a(s->size(), 0.0), b(s->size(), 0.0);
  a[0] = 1;
  a[8] = 2;
  b[32] = 1;
  b[64] = 2;
  auto path = displacement_path(DiscreteMeasure(s, a), DiscreteMeasure(s, b), {0, 0.25, 0.5, 0.75, 1});
  CHECK(path.rounding_defect == 0.0);
  CHECK(path.constant_speed_defect <= 1e-7);
}
