#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wasserlim/error.hpp"

namespace wasserlim {

using PointId = std::size_t;

// Absolute tolerance for metric axioms and shortest-path equalities.
// Distances are expected to be O(1) to O(1e3); callers working at other
// scales should rescale first.
inline constexpr double kMetricTolerance = 1e-9;

struct Edge {
  PointId u = 0;
  PointId v = 0;
  double weight = 0.0;
};

struct Neighbor {
  PointId point = 0;
  double weight = 0.0;
};

// Pointed finite metric space (X, d, e). Immutable after construction and
// normally shared through SpacePtr so measures can refer to it.
class FiniteMetricSpace {
public:
  std::size_t size() const noexcept { return n_; }

  double distance(PointId i, PointId j) const { return dist_[i * n_ + j]; }
  double operator()(PointId i, PointId j) const { return dist_[i * n_ + j]; }

  PointId base_point() const noexcept { return base_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  // Present only for graph-induced metrics.
  bool has_geodesic_structure() const noexcept { return geodesic_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  // Neighbors sorted by point id (lightest parallel edge kept).
  std::span<const Neighbor> neighbors(PointId i) const;

  // Real-line positions, when the space was built from coordinates.
  const std::optional<std::vector<double>>& coordinates() const noexcept { return coords_; }

  // Largest edge weight of the geodesic structure, 0 without one.
  double mesh() const noexcept { return mesh_; }

  // Same points and bit-identical distances.
  bool same_as(const FiniteMetricSpace& other) const noexcept;

  std::vector<double> row(PointId i) const;

private:
  friend std::shared_ptr<const FiniteMetricSpace> validate_metric(
      const std::vector<std::vector<double>>&, PointId, std::vector<std::string>);
  friend std::shared_ptr<const FiniteMetricSpace> graph_metric(
      std::size_t, const std::vector<Edge>&, PointId, std::vector<std::string>);
  friend std::shared_ptr<const FiniteMetricSpace> with_coordinates(
      std::shared_ptr<const FiniteMetricSpace>, std::vector<double>);

  FiniteMetricSpace() = default;

  std::size_t n_ = 0;
  std::vector<double> dist_;
  PointId base_ = 0;
  std::vector<std::string> names_;
  bool geodesic_ = false;
  std::vector<Edge> edges_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<Neighbor> adjacency_;
  std::optional<std::vector<double>> coords_;
  double mesh_ = 0.0;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

inline bool same_space(const SpacePtr& a, const SpacePtr& b) noexcept {
  return a == b || (a && b && a->same_as(*b));
}

// Checks squareness, finiteness, zero diagonal, nonnegativity, symmetry,
// distinctness and the triangle inequality (in that order) and throws on
// the first violation. TriangleViolation reports (i, j, k) with
// d(i, j) > d(i, k) + d(k, j).
SpacePtr validate_metric(const std::vector<std::vector<double>>& dist, PointId base = 0,
                         std::vector<std::string> names = {});

// All-pairs shortest paths over a connected, positively weighted graph.
// The edge list is retained as the geodesic structure.
SpacePtr graph_metric(std::size_t vertex_count, const std::vector<Edge>& edges, PointId base = 0,
                      std::vector<std::string> names = {});

// Copy of `space` carrying real-line coordinates (one per point).
SpacePtr with_coordinates(SpacePtr space, std::vector<double> coords);

// Points {j / 2^level : 0 <= j <= 2^level} as a unit-interval path graph,
// base point 0, coordinates attached.
SpacePtr dyadic_interval_space(int level);

// Path graph through the sorted coordinates; base point is the first
// coordinate as given.
SpacePtr line_space(const std::vector<double>& coords);

double diameter(const FiniteMetricSpace& space);
double diameter(const FiniteMetricSpace& space, std::span<const PointId> subset);

struct CoveringCertificate {
  double epsilon = 0.0;
  std::vector<PointId> centers;
  std::size_t k = 0;
  bool exact = false;  // true when k is the minimum covering number

  bool covers(const FiniteMetricSpace& space) const;
};

// Greedy cover in point-id order: every still-uncovered point becomes a
// center. With exact = true and fewer than 20 points, the minimum cover is
// found by exhaustive search instead.
CoveringCertificate covering_number(const FiniteMetricSpace& space, double epsilon,
                                    bool exact = false);

}  // namespace wasserlim
