#include "wasserlim/geodesics.hpp"

#include <algorithm>
#include <cmath>

namespace wasserlim {

namespace {

void require_geodesic(const FiniteMetricSpace& space) {
  if (!space.has_geodesic_structure())
    throw Error(ErrorCode::NoGeodesicStructure, "space has no graph structure to interpolate along");
}

}  // namespace

std::vector<PointId> lexicographic_geodesic(const FiniteMetricSpace& space, PointId x, PointId y) {
  require_geodesic(space);
  if (x >= space.size() || y >= space.size()) throw Error(ErrorCode::InvalidArgument, "point out of range");
  std::vector<PointId> path{x};
  PointId cur = x;
  while (cur != y) {
    const double remaining = space(cur, y);
    PointId next = cur;
    for (const Neighbor& nb : space.neighbors(cur)) {
      if (std::abs(nb.weight + space(nb.point, y) - remaining) <= kMetricTolerance) {
        next = nb.point;
        break;
      }
    }
    if (next == cur) throw Error(ErrorCode::SolverFailure, "shortest path reconstruction failed");
    path.push_back(next);
    cur = next;
  }
  return path;
}

InterpolatedPoint point_interpolate(const FiniteMetricSpace& space, PointId x, PointId y, double t) {
  require_geodesic(space);
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
  if (t == 0.0 || x == y) return {x, 0.0};
  if (t == 1.0) return {y, 0.0};
  const double target = t * space(x, y);
  const auto path = lexicographic_geodesic(space, x, y);
  InterpolatedPoint best{x, target};
  for (PointId z : path) {
    const double defect = std::abs(space(x, z) - target);
    if (defect < best.defect) best = {z, defect};
  }
  return best;
}

DiscreteMeasure interpolate_coupling(const Coupling& coupling, double t, double* max_rounding) {
  if (!coupling.space) throw Error(ErrorCode::InvalidArgument, "coupling without space");
  const auto& space = *coupling.space;
  std::vector<double> w(space.size(), 0.0);
  double worst = 0.0;
  for (const PlanEntry& e : coupling.plan) {
    const auto z = point_interpolate(space, e.source, e.target, t);
    w[z.point] += e.mass;
    worst = std::max(worst, z.defect);
  }
  if (max_rounding) *max_rounding = worst;
  return DiscreteMeasure(coupling.space, std::move(w));
}

MidpointResult midpoint_along(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                              const Coupling& coupling) {
  require_same_space(mu0, mu1);
  require_geodesic(mu0.space());
  double rounding = 0.0;
  DiscreteMeasure mid = interpolate_coupling(coupling, 0.5, &rounding);
  const double w2 = coupling.cost;
  const double left = wasserstein_p(mu0, mid, 2.0).distance;
  const double right = wasserstein_p(mid, mu1, 2.0).distance;
  return MidpointResult{std::move(mid), coupling, w2, std::abs(left - 0.5 * w2),
                        std::abs(right - 0.5 * w2), rounding};
}

MidpointResult w2_midpoint(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1) {
  require_same_space(mu0, mu1);
  require_geodesic(mu0.space());
  auto transport = wasserstein_p(mu0, mu1, 2.0);
  return midpoint_along(mu0, mu1, transport.coupling);
}

WassersteinPath displacement_path(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                                  std::vector<double> grid) {
  require_same_space(mu0, mu1);
  require_geodesic(mu0.space());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty() || grid.front() != 0.0 || grid.back() != 1.0)
    throw Error(ErrorCode::InvalidArgument, "grid must lie in [0, 1] and contain 0 and 1");

  auto transport = wasserstein_p(mu0, mu1, 2.0);
  WassersteinPath path;
  path.times = grid;
  path.endpoints_cost = transport.distance;
  for (double t : grid) {
    if (t == 0.0) {
      path.measures.push_back(mu0);
    } else if (t == 1.0) {
      path.measures.push_back(mu1);
    } else {
      double rounding = 0.0;
      path.measures.push_back(interpolate_coupling(transport.coupling, t, &rounding));
      path.rounding_defect = std::max(path.rounding_defect, rounding);
    }
  }
  const std::size_t k = grid.size();
  path.speed_defects.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const double w = (a == 0 && b == k - 1)
                           ? transport.distance
                           : wasserstein_p(path.measures[a], path.measures[b], 2.0).distance;
      const double defect = std::abs(w - (grid[b] - grid[a]) * transport.distance);
      path.speed_defects[a][b] = path.speed_defects[b][a] = defect;
      path.constant_speed_defect = std::max(path.constant_speed_defect, defect);
    }
  }
  path.coupling_used = std::move(transport.coupling);
  return path;
}

}  // namespace wasserlim
