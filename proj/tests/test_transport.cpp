#include <doctest.h>

#include "support.hpp"

using namespace wasserlim;

TEST_CASE("wasserstein_p examples") {
  auto s = line_space({0.0, 1.0, 2.0, 5.0});
  for (double p : {1.0, 2.0, 3.5}) {
    CHECK(wasserstein_p(DiscreteMeasure::dirac(s, 0), DiscreteMeasure::dirac(s, 3), p).distance ==
          doctest::Approx(5.0).epsilon(1e-15));
    auto mu = DiscreteMeasure(s, {1, 2, 3, 4});
    CHECK(wasserstein_p(mu, mu, p).distance == 0.0);
  }
  auto a = DiscreteMeasure(s, {1, 1, 0, 0});
  auto b = DiscreteMeasure(s, {0, 1, 1, 0});
  CHECK(wasserstein_p(a, b, 1.0).distance == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("escaping mass has W2 exactly one") {
  for (std::size_t n : {4, 100, 10000}) {
    const double big = static_cast<double>(n);
    auto s = line_space({0.0, std::sqrt(big)});
    auto r = wasserstein_p(DiscreteMeasure::dirac(s, 0), DiscreteMeasure(s, {1 - 1 / big, 1 / big}), 2.0);
    CHECK(std::abs(r.distance - 1.0) <= 1e-12);
  }
}

TEST_CASE("couplings have the right marginals and cost") {
  CounterRng rng(31);
  for (int t = 0; t < 60; ++t) {
    auto s = testing::random_planar_space(rng, 2 + rng.below(15));
    auto mu = testing::random_measure(s, rng, 10), nu = testing::random_measure(s, rng, 10);
    const double p = 1.0 + rng.uniform(0.0, 2.0);
    auto r = wasserstein_p(mu, nu, p);
    const auto src = r.coupling.source_marginal(), dst = r.coupling.target_marginal();
    double cost = 0.0;
    for (PointId j = 0; j < s->size(); ++j) {
      CHECK(std::abs(src[j] - mu[j]) <= 1e-9);
      CHECK(std::abs(dst[j] - nu[j]) <= 1e-9);
    }
    for (const auto& e : r.coupling.plan) {
      CHECK(e.mass > 0.0);
      cost += e.mass * std::pow((*s)(e.source, e.target), p);
    }
    CHECK(r.coupling.cost == doctest::Approx(std::pow(cost, 1.0 / p)).epsilon(1e-12));
    CHECK(r.distance == r.coupling.cost);
    CHECK(std::is_sorted(r.coupling.plan.begin(), r.coupling.plan.end(), [](const auto& x, const auto& y) {
      return std::tie(x.source, x.target) < std::tie(y.source, y.target);
    }));
  }
}

TEST_CASE("wasserstein_p matches the quantile formula on the line") {
  CounterRng rng(32);
  for (int t = 0; t < 80; ++t) {
    std::vector<double> xs(2 + rng.below(20));
    for (double& x : xs) x = rng.uniform(-3.0, 3.0);
    auto s = line_space(xs);
    auto mu = testing::random_measure(s, rng, 12), nu = testing::random_measure(s, rng, 12);
    const double p = 1.0 + rng.below(3);
    const double oracle = testing::line_wasserstein(xs, testing::to_vector(mu), xs, testing::to_vector(nu), p);
    CHECK(wasserstein_p(mu, nu, p).distance == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("wasserstein_p is a metric on random triples") {
  CounterRng rng(33);
  for (int t = 0; t < 60; ++t) {
    auto s = testing::random_planar_space(rng, 3 + rng.below(10));
    auto a = testing::random_measure(s, rng, 6), b = testing::random_measure(s, rng, 6),
         c = testing::random_measure(s, rng, 6);
    const double p = 1.0 + rng.below(3);
    const double ab = wasserstein_p(a, b, p).distance, ba = wasserstein_p(b, a, p).distance;
    const double bc = wasserstein_p(b, c, p).distance, ac = wasserstein_p(a, c, p).distance;
    CHECK(std::abs(ab - ba) <= 1e-12);
    CHECK(ac <= ab + bc + 1e-7);
    CHECK(wasserstein_p(a, a, p).distance == 0.0);
    if (testing::to_vector(a) != testing::to_vector(b)) CHECK(ab > 0.0);
  }
}

TEST_CASE("W_p is nondecreasing in p") {
  CounterRng rng(34);
  for (int t = 0; t < 60; ++t) {
    auto s = testing::random_planar_space(rng, 2 + rng.below(10));
    auto a = testing::random_measure(s, rng, 6), b = testing::random_measure(s, rng, 6);
    double last = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
      const double w = wasserstein_p(a, b, p).distance;
      CHECK(w >= last - 1e-9);
      last = w;
    }
  }
}

TEST_CASE("W_p is bounded by diam * TV^(1/p)") {
  CounterRng rng(35);
  for (int t = 0; t < 100; ++t) {
    auto s = testing::random_planar_space(rng, 2 + rng.below(10));
    auto a = testing::random_measure(s, rng, 6), b = testing::random_measure(s, rng, 6);
    std::vector<PointId> both;
    for (PointId j = 0; j < s->size(); ++j)
      if (a[j] > 0 || b[j] > 0) both.push_back(j);
    const double d = diameter(*s, both), tv = total_variation(a, b);
    for (double p : {1.0, 2.0, 3.0}) CHECK(wasserstein_p(a, b, p).distance <= d * std::pow(tv, 1.0 / p) + 1e-9);
  }
}

TEST_CASE("brute force examples and equivalence") {
  auto s = line_space({0.0, 1.0, 3.0});
  auto mu = DiscreteMeasure(s, {1, 1, 1});
  CHECK(brute_force_wasserstein(mu, mu, 2.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(brute_force_wasserstein(DiscreteMeasure::dirac(s, 0), DiscreteMeasure::dirac(s, 2), 1.5) ==
        doctest::Approx(3.0));
  auto big = dyadic_interval_space(3);
  try {
    brute_force_wasserstein(DiscreteMeasure::uniform(big), DiscreteMeasure::uniform(big), 1.0);
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }

  CounterRng rng(36);
  for (int t = 0; t < 100; ++t) {
    auto sp = testing::random_planar_space(rng, 2 + rng.below(8));
    auto a = testing::random_measure(sp, rng, 4), b = testing::random_measure(sp, rng, 3);
    const double p = 1.0 + rng.below(3);
    CHECK(brute_force_wasserstein(a, b, p) == doctest::Approx(wasserstein_p(a, b, p).distance).epsilon(1e-9));
  }
}

TEST_CASE("assignment examples") {
  auto s = line_space({0.0, 1.0, 2.0, 3.0});
  UniformCloud one{s, {0}}, other{s, {3}};
  auto r = assignment_wasserstein(one, other, 2.0);
  CHECK(r.sigma == std::vector<std::size_t>{0});
  CHECK(r.cost == 3.0);

  UniformCloud a{s, {0, 2}}, b{s, {1, 3}};
  auto m = assignment_wasserstein(a, b, 2.0);
  CHECK(m.sigma == std::vector<std::size_t>{0, 1});
  CHECK(m.cost == doctest::Approx(1.0));
  CHECK(assignment_wasserstein(a, a, 1.0).cost == 0.0);

  UniformCloud c{s, {0, 1, 2}};
  CHECK_THROWS_AS(assignment_wasserstein(a, c, 1.0), Error);
  CHECK_THROWS_AS(assignment_wasserstein(a, UniformCloud{dyadic_interval_space(2), {0, 1}}, 1.0), Error);
  try {
    assignment_wasserstein(DiscreteMeasure(s, {0.5, 0.3, 0.2, 0}), DiscreteMeasure(s, {1, 1, 0, 0}), 2, 1.0);
    FAIL("expected NotUniformCloud");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotUniformCloud);
  }
}

TEST_CASE("assignment agrees with permutation enumeration") {
  CounterRng rng(37);
  for (int t = 0; t < 40; ++t) {
    auto s = testing::random_planar_space(rng, 3 + rng.below(8));
    const std::size_t n = 1 + rng.below(6);
    UniformCloud a{s, {}}, b{s, {}};
    for (std::size_t j = 0; j < n; ++j) {
      a.atoms.push_back(rng.below(s->size()));
      b.atoms.push_back(rng.below(s->size()));
    }
    std::sort(a.atoms.begin(), a.atoms.end());
    std::sort(b.atoms.begin(), b.atoms.end());
    const double p = 1.0 + rng.below(3);
    auto r = assignment_wasserstein(a, b, p);
    CHECK(r.cost == doctest::Approx(testing::permutation_wasserstein(*s, a.atoms, b.atoms, p)).epsilon(1e-12));
    std::vector<std::size_t> sorted = r.sigma;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < n; ++j) CHECK(sorted[j] == j);
  }
}

TEST_CASE("nearest-atom projection examples") {
  auto s = line_space({0.0, 0.4, 1.0});
  auto mu = DiscreteMeasure::uniform(s);
  auto cloud = DiscreteMeasure(s, {1, 0, 1});
  auto pr = nearest_atom_projection(mu, cloud, 2.0);
  CHECK(pr.tau[1] == 0);
  CHECK(pr.pushforward[0] == doctest::Approx(2.0 / 3.0));
  CHECK(pr.pushforward[2] == doctest::Approx(1.0 / 3.0));
  CHECK(pr.cost == doctest::Approx(std::sqrt(0.16 / 3.0)));
  CHECK(wasserstein_p(mu, pr.pushforward, 2.0).distance == doctest::Approx(pr.cost));

  auto single = nearest_atom_projection(mu, DiscreteMeasure::dirac(s, 2), 2.0);
  CHECK(single.cost == doctest::Approx(std::sqrt((1.0 + 0.36) / 3.0)));
  auto ident = nearest_atom_projection(mu, DiscreteMeasure::uniform(s), 1.0);
  CHECK(ident.cost == 0.0);
  CHECK(ident.tau == std::vector<PointId>{0, 1, 2});

  auto tie = line_space({0.0, 1.0, 2.0});
  auto t = nearest_atom_projection(DiscreteMeasure::dirac(tie, 1), DiscreteMeasure(tie, {1, 0, 1}), 1.0);
  CHECK(t.tau[1] == 0);
}

TEST_CASE("projection sandwich on random instances") {
  CounterRng rng(38);
  for (int t = 0; t < 60; ++t) {
    auto s = testing::random_planar_space(rng, 3 + rng.below(12));
    auto mu = testing::random_measure(s, rng, 12), cloud = testing::random_measure(s, rng, 4);
    const double p = 1.0 + rng.below(3);
    auto pr = nearest_atom_projection(mu, cloud, p);
    CHECK(wasserstein_p(mu, pr.pushforward, p).distance <= pr.cost + 1e-12);
    CHECK(pr.cost <= wasserstein_p(mu, cloud, p).distance + 1e-12);
  }
}

TEST_CASE("alternate optimal couplings have the same cost") {
  // Two sources and two sinks at equal distances: every coupling is optimal.
  auto s = validate_metric({{0, 2, 1, 1}, {2, 0, 1, 1}, {1, 1, 0, 2}, {1, 1, 2, 0}});
  auto mu = DiscreteMeasure(s, {1, 1, 0, 0});
  auto nu = DiscreteMeasure(s, {0, 0, 1, 1});
  auto r = wasserstein_p(mu, nu, 2.0);
  CHECK(r.coupling.alternative_optimum_possible);
  auto alts = alternate_optimal_couplings(mu, nu, 2.0);
  REQUIRE_FALSE(alts.empty());
  for (const auto& c : alts) {
    CHECK(c.cost == doctest::Approx(r.distance).epsilon(1e-12));
    const bool same = c.plan.size() == r.coupling.plan.size() &&
                      std::equal(c.plan.begin(), c.plan.end(), r.coupling.plan.begin(), [](const auto& x, const auto& y) {
                        return x.source == y.source && x.target == y.target && std::abs(x.mass - y.mass) < 1e-12;
                      });
    CHECK_FALSE(same);
  }

  auto line = line_space({0.0, 1.0, 3.0});
  auto strict = wasserstein_p(DiscreteMeasure::dirac(line, 0), DiscreteMeasure(line, {0, 1, 1}), 2.0);
  CHECK_FALSE(strict.coupling.alternative_optimum_possible);
}

TEST_CASE("solver handles large cost ranges") {
  auto s = line_space({0.0, 1e-4, 1e3});
  auto mu = DiscreteMeasure(s, {1, 1, 1});
  auto nu = DiscreteMeasure(s, {2, 1, 0.5});
  const double oracle = testing::line_wasserstein({0.0, 1e-4, 1e3}, {1, 1, 1}, {0.0, 1e-4, 1e3}, {2, 1, 0.5}, 3.0);
  CHECK(wasserstein_p(mu, nu, 3.0).distance == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("mismatched spaces are rejected") {
  auto a = DiscreteMeasure::dirac(dyadic_interval_space(1), 0);
  auto b = DiscreteMeasure::dirac(dyadic_interval_space(2), 0);
  try {
    wasserstein_p(a, b, 1.0);
    FAIL("expected SpaceMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpaceMismatch);
  }
  CHECK_NOTHROW(wasserstein_p(a, DiscreteMeasure::dirac(dyadic_interval_space(1), 1), 1.0));
  CHECK_THROWS_AS(wasserstein_p(a, a, 0.5), Error);
}
