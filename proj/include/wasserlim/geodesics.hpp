#pragma once

#include <vector>

#include "wasserlim/transport.hpp"

namespace wasserlim {

struct InterpolatedPoint {
  PointId point = 0;
  double defect = 0.0;  // |d(x, z) − t·d(x, y)|
};

// Vertex on the lexicographically smallest shortest x–y path whose distance
// from x is closest to t·d(x, y); ties go to the vertex nearer x.
// Throws NoGeodesicStructure for spaces not built from a graph.
InterpolatedPoint point_interpolate(const FiniteMetricSpace& space, PointId x, PointId y, double t);

// Vertex sequence of the lexicographically smallest shortest x–y path.
std::vector<PointId> lexicographic_geodesic(const FiniteMetricSpace& space, PointId x, PointId y);

// Pushes every coupled pair (x, y) to point_interpolate(x, y, t).
// max_rounding receives the largest per-pair rounding defect.
DiscreteMeasure interpolate_coupling(const Coupling& coupling, double t, double* max_rounding = nullptr);

struct MidpointResult {
  DiscreteMeasure midpoint;
  Coupling coupling;
  double w2 = 0.0;               // W₂(μ₀, μ₁)
  double defect_start = 0.0;     // |W₂(μ₀, ν½) − ½W₂(μ₀, μ₁)|
  double defect_end = 0.0;       // |W₂(ν½, μ₁) − ½W₂(μ₀, μ₁)|
  double rounding_defect = 0.0;  // largest per-pair vertex rounding
};

MidpointResult w2_midpoint(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1);

// Midpoint along a caller-supplied coupling of mu0 and mu1.
MidpointResult midpoint_along(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                              const Coupling& coupling);

struct WassersteinPath {
  std::vector<double> times;
  std::vector<DiscreteMeasure> measures;
  double endpoints_cost = 0.0;  // W₂(μ₀, μ₁)
  Coupling coupling_used;
  // speed_defects[a][b] = |W₂(μ_a, μ_b) − |t_a − t_b|·W₂(μ₀, μ₁)|
  std::vector<std::vector<double>> speed_defects;
  double constant_speed_defect = 0.0;  // max of speed_defects
  double rounding_defect = 0.0;
};

// Displacement interpolation over a grid in [0, 1] that contains 0 and 1.
// The endpoint measures are reproduced exactly.
WassersteinPath displacement_path(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                                  std::vector<double> grid = {0.0, 0.5, 1.0});

}  // namespace wasserlim
