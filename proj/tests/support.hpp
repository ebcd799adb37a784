#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "wasserlim/curvature.hpp"
#include "wasserlim/limits.hpp"
#include "wasserlim/rng.hpp"

namespace testing {

using namespace wasserlim;

// Euclidean distances between random points of the unit square.
inline SpacePtr random_planar_space(CounterRng& rng, std::size_t n) {
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.uniform();
    ys[i] = rng.uniform();
  }
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
  return validate_metric(d);
}

// Random connected graph: a random spanning tree plus extra edges.
inline std::vector<Edge> random_connected_edges(CounterRng& rng, std::size_t n, std::size_t extra) {
  std::vector<Edge> edges;
  for (std::size_t v = 1; v < n; ++v) edges.push_back({rng.below(v), v, rng.uniform(0.1, 2.0)});
  for (std::size_t k = 0; k < extra && n > 1; ++k) {
    const std::size_t u = rng.below(n), v = rng.below(n);
    if (u != v) edges.push_back({u, v, rng.uniform(0.1, 2.0)});
  }
  return edges;
}

// Random weights on a random subset of at most max_support points.
inline DiscreteMeasure random_measure(const SpacePtr& space, CounterRng& rng, std::size_t max_support) {
  const std::size_t n = space->size();
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(ids[i - 1], ids[rng.below(i)]);
  const std::size_t k = 1 + rng.below(std::min(n, max_support));
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) w[ids[i]] = rng.uniform(0.05, 1.0);
  return DiscreteMeasure(space, w);
}

inline DiscreteMeasure random_full_measure(const SpacePtr& space, CounterRng& rng) {
  std::vector<double> w(space->size());
  for (double& x : w) x = rng.uniform(0.05, 1.0);
  return DiscreteMeasure(space, w);
}

// Floyd–Warshall all-pairs shortest paths.
inline std::vector<std::vector<double>> floyd_warshall(std::size_t n, const std::vector<Edge>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const Edge& e : edges) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.weight);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.weight);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// W_p on the real line from quantile functions: the cost of the monotone
// coupling, found by merging the two cumulative distributions.
inline double line_wasserstein(const std::vector<double>& x, const std::vector<double>& a,
                               const std::vector<double>& y, const std::vector<double>& b, double p) {
  std::vector<std::size_t> ia(x.size()), ib(y.size());
  std::iota(ia.begin(), ia.end(), 0);
  std::iota(ib.begin(), ib.end(), 0);
  std::sort(ia.begin(), ia.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::sort(ib.begin(), ib.end(), [&](std::size_t i, std::size_t j) { return y[i] < y[j]; });
  const double sa = std::accumulate(a.begin(), a.end(), 0.0);
  const double sb = std::accumulate(b.begin(), b.end(), 0.0);
  std::size_t i = 0, j = 0;
  double ra = a[ia[0]] / sa, rb = b[ib[0]] / sb, total = 0.0;
  while (i < ia.size() && j < ib.size()) {
    const double m = std::min(ra, rb);
    total += m * std::pow(std::abs(x[ia[i]] - y[ib[j]]), p);
    ra -= m;
    rb -= m;
    if (ra <= 1e-15 && ++i < ia.size()) ra += a[ia[i]] / sa;
    if (rb <= 1e-15 && ++j < ib.size()) rb += b[ib[j]] / sb;
  }
  return std::pow(total, 1.0 / p);
}

// Optimal matching of equal-size clouds by trying every permutation.
inline double permutation_wasserstein(const FiniteMetricSpace& space, const std::vector<PointId>& a,
                                      std::vector<PointId> b, double p) {
  std::sort(b.begin(), b.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) c += std::pow(space(a[j], b[j]), p);
    best = std::min(best, c / a.size());
  } while (std::next_permutation(b.begin(), b.end()));
  return std::pow(best, 1.0 / p);
}

inline double entropy_oracle(const std::vector<double>& nu, const std::vector<double>& lambda) {
  double h = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (nu[j] == 0.0) continue;
    if (lambda[j] == 0.0) return std::numeric_limits<double>::infinity();
    h += lambda[j] * (nu[j] / lambda[j]) * std::log(nu[j] / lambda[j]);
  }
  return h;
}

inline std::vector<double> to_vector(const DiscreteMeasure& m) {
  return std::vector<double>(m.weights().begin(), m.weights().end());
}

}  // namespace testing
