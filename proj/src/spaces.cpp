#include "wasserlim/spaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>

namespace wasserlim {

namespace {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = std::to_string(i);
  return names;
}

void check_base(PointId base, std::size_t n) {
  if (base >= n) {
    throw Error(ErrorCode::InvalidArgument,
                "base point " + std::to_string(base) + " outside 0.." + std::to_string(n - 1));
  }
}

}  // namespace

std::span<const Neighbor> FiniteMetricSpace::neighbors(PointId i) const {
  if (!geodesic_) return {};
  return std::span<const Neighbor>(adjacency_.data() + adjacency_offsets_[i],
                                   adjacency_offsets_[i + 1] - adjacency_offsets_[i]);
}

bool FiniteMetricSpace::same_as(const FiniteMetricSpace& other) const noexcept {
  return n_ == other.n_ && base_ == other.base_ && dist_ == other.dist_;
}

std::vector<double> FiniteMetricSpace::row(PointId i) const {
  return std::vector<double>(dist_.begin() + static_cast<std::ptrdiff_t>(i * n_),
                             dist_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_));
}

SpacePtr validate_metric(const std::vector<std::vector<double>>& dist, PointId base,
                         std::vector<std::string> names) {
  const std::size_t n = dist.size();
  if (n == 0) throw Error(ErrorCode::NotSquare, "empty distance matrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) {
      throw Error(ErrorCode::NotSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(dist[i].size()) + " entries, expected " +
                                            std::to_string(n));
    }
  }
  check_base(base, n);
  if (names.empty()) names = default_names(n);
  if (names.size() != n) throw Error(ErrorCode::InvalidArgument, "point name count mismatch");

  auto at = [&](std::size_t i, std::size_t j) { return std::to_string(i) + "," + std::to_string(j); };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(dist[i][j])) throw Error(ErrorCode::NonFinite, "d(" + at(i, j) + ")");
  for (std::size_t i = 0; i < n; ++i)
    if (dist[i][i] != 0.0) throw Error(ErrorCode::NonzeroDiagonal, "d(" + at(i, i) + ") != 0");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (dist[i][j] < 0.0) throw Error(ErrorCode::NegativeDistance, "d(" + at(i, j) + ") < 0");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(dist[i][j] - dist[j][i]) > kMetricTolerance)
        throw Error(ErrorCode::Asymmetric, "d(" + at(i, j) + ") != d(" + at(j, i) + ")");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist[i][j] == 0.0)
        throw Error(ErrorCode::CoincidentPoints, "points " + at(i, j) + " at distance 0");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (dist[i][j] > dist[i][k] + dist[k][j] + kMetricTolerance)
          throw Error(ErrorCode::TriangleViolation,
                      "(" + at(i, j) + "," + std::to_string(k) + ")");

  auto space = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace());
  space->n_ = n;
  space->dist_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      space->dist_[i * n + j] = i <= j ? dist[i][j] : dist[j][i];
  space->base_ = base;
  space->names_ = std::move(names);
  return space;
}

SpacePtr graph_metric(std::size_t vertex_count, const std::vector<Edge>& edges, PointId base,
                      std::vector<std::string> names) {
  const std::size_t n = vertex_count;
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "graph has no vertices");
  check_base(base, n);
  if (names.empty()) names = default_names(n);
  if (names.size() != n) throw Error(ErrorCode::InvalidArgument, "vertex name count mismatch");

  // Lightest edge per unordered pair.
  std::vector<std::vector<Neighbor>> adj(n);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::NonpositiveWeight, "edge (" + std::to_string(e.u) + "," +
                                                    std::to_string(e.v) + ") has weight " +
                                                    format_number(e.weight));
    }
    if (e.u == e.v) continue;
    auto add = [&](PointId a, PointId b) {
      for (Neighbor& nb : adj[a]) {
        if (nb.point == b) {
          nb.weight = std::min(nb.weight, e.weight);
          return;
        }
      }
      adj[a].push_back({b, e.weight});
    };
    add(e.u, e.v);
    add(e.v, e.u);
  }
  for (auto& list : adj)
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.point < b.point; });

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n * n, inf);
  using Item = std::pair<double, PointId>;
  for (PointId s = 0; s < n; ++s) {
    double* d = dist.data() + s * n;
    d[s] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, s});
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du > d[u]) continue;
      for (const Neighbor& nb : adj[u]) {
        const double cand = du + nb.weight;
        if (cand < d[nb.point]) {
          d[nb.point] = cand;
          heap.push({cand, nb.point});
        }
      }
    }
    for (PointId t = 0; t < n; ++t) {
      if (d[t] == inf) {
        throw Error(ErrorCode::Disconnected,
                    "no path between " + std::to_string(s) + " and " + std::to_string(t));
      }
    }
  }
  // Floating sums along different paths may differ in the last bit.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[j * n + i] = dist[i * n + j];

  auto space = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace());
  space->n_ = n;
  space->dist_ = std::move(dist);
  space->base_ = base;
  space->names_ = std::move(names);
  space->geodesic_ = true;
  space->edges_ = edges;
  space->adjacency_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    space->adjacency_offsets_[i + 1] = space->adjacency_offsets_[i] + adj[i].size();
    for (const Neighbor& nb : adj[i]) {
      space->adjacency_.push_back(nb);
      space->mesh_ = std::max(space->mesh_, nb.weight);
    }
  }
  return space;
}

SpacePtr with_coordinates(SpacePtr space, std::vector<double> coords) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "null space");
  if (coords.size() != space->size())
    throw Error(ErrorCode::InvalidArgument, "coordinate count mismatch");
  auto copy = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace(*space));
  copy->coords_ = std::move(coords);
  return copy;
}

SpacePtr dyadic_interval_space(int level) {
  if (level < 0 || level > 24) throw Error(ErrorCode::InvalidArgument, "dyadic level out of range");
  const std::size_t segments = std::size_t{1} << level;
  const double mesh = std::ldexp(1.0, -level);
  std::vector<Edge> edges;
  std::vector<std::string> names;
  std::vector<double> coords;
  edges.reserve(segments);
  for (std::size_t j = 0; j <= segments; ++j) {
    const double x = static_cast<double>(j) * mesh;
    coords.push_back(x);
    names.push_back(format_number(x));
    if (j < segments) edges.push_back({j, j + 1, mesh});
  }
  return with_coordinates(graph_metric(segments + 1, edges, 0, std::move(names)), std::move(coords));
}

SpacePtr line_space(const std::vector<double>& coords) {
  const std::size_t n = coords.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "line space needs at least one point");
  for (double x : coords)
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "coordinate " + format_number(x));
  std::vector<PointId> order(n);
  std::iota(order.begin(), order.end(), PointId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](PointId a, PointId b) { return coords[a] < coords[b]; });
  std::vector<Edge> edges;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const PointId a = order[k];
    const PointId b = order[k + 1];
    if (coords[b] == coords[a]) {
      throw Error(ErrorCode::CoincidentPoints,
                  "points " + std::to_string(a) + "," + std::to_string(b) + " coincide");
    }
    edges.push_back({a, b, coords[b] - coords[a]});
  }
  std::vector<std::string> names;
  for (double x : coords) names.push_back(format_number(x));
  return with_coordinates(graph_metric(n, edges, 0, std::move(names)), coords);
}

double diameter(const FiniteMetricSpace& space) {
  double best = 0.0;
  for (PointId i = 0; i < space.size(); ++i)
    for (PointId j = i + 1; j < space.size(); ++j) best = std::max(best, space(i, j));
  return best;
}

double diameter(const FiniteMetricSpace& space, std::span<const PointId> subset) {
  if (subset.empty()) throw Error(ErrorCode::EmptySubset, "diameter of empty subset");
  double best = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    if (subset[a] >= space.size()) throw Error(ErrorCode::InvalidArgument, "point out of range");
    for (std::size_t b = a + 1; b < subset.size(); ++b)
      best = std::max(best, space(subset[a], subset[b]));
  }
  return best;
}

bool CoveringCertificate::covers(const FiniteMetricSpace& space) const {
  for (PointId x = 0; x < space.size(); ++x) {
    const bool hit = std::any_of(centers.begin(), centers.end(),
                                 [&](PointId c) { return space(x, c) <= epsilon; });
    if (!hit) return false;
  }
  return true;
}

namespace {

std::vector<PointId> exact_cover(const FiniteMetricSpace& space, double epsilon) {
  const std::size_t n = space.size();
  std::vector<std::uint32_t> ball(n, 0);
  for (PointId c = 0; c < n; ++c)
    for (PointId x = 0; x < n; ++x)
      if (space(c, x) <= epsilon) ball[c] |= std::uint32_t{1} << x;
  const std::uint32_t all = n == 32 ? ~0u : ((std::uint32_t{1} << n) - 1);

  // Subsets by increasing size; within a size, lexicographic order.
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<PointId> pick(k);
    std::iota(pick.begin(), pick.end(), PointId{0});
    for (;;) {
      std::uint32_t covered = 0;
      for (PointId c : pick) covered |= ball[c];
      if (covered == all) return pick;
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  std::vector<PointId> everything(n);
  std::iota(everything.begin(), everything.end(), PointId{0});
  return everything;
}

}  // namespace

CoveringCertificate covering_number(const FiniteMetricSpace& space, double epsilon, bool exact) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  CoveringCertificate cert;
  cert.epsilon = epsilon;
  if (exact && space.size() < 20) {
    cert.centers = exact_cover(space, epsilon);
    cert.exact = true;
  } else {
    std::vector<bool> covered(space.size(), false);
    for (PointId x = 0; x < space.size(); ++x) {
      if (covered[x]) continue;
      cert.centers.push_back(x);
      for (PointId y = 0; y < space.size(); ++y)
        if (space(x, y) <= epsilon) covered[y] = true;
    }
  }
  cert.k = cert.centers.size();
  return cert;
}

}  // namespace wasserlim
