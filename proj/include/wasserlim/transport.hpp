#pragma once

#include <cstddef>
#include <vector>

#include "wasserlim/measures.hpp"

namespace wasserlim {

struct PlanEntry {
  PointId source = 0;
  PointId target = 0;
  double mass = 0.0;
};

// Transport plan between two measures on a shared space, stored sparsely
// (positive entries only) and ordered by (source, target).
struct Coupling {
  SpacePtr space;
  std::vector<PlanEntry> plan;
  double p = 1.0;
  double cost = 0.0;  // (Σ γ_ij d_ij^p)^{1/p}
  // Some nonbasic arc has zero reduced cost at the optimal basis, so
  // another optimal coupling may exist.
  bool alternative_optimum_possible = false;

  std::vector<double> source_marginal() const;
  std::vector<double> target_marginal() const;
  std::vector<std::vector<double>> dense() const;
};

struct TransportResult {
  double distance = 0.0;
  Coupling coupling;
};

// Exact W_p by network simplex on the supports. Arc costs d^p are scaled
// to integers (×1e9, reduced when needed to keep every cost below 2^40);
// the returned cost is recomputed in floating point from the optimal plan.
TransportResult wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

// Distinct optimal couplings reachable from the solver's optimal basis by
// one zero-reduced-cost pivot, at most max_count of them, the solver's own
// coupling excluded.
std::vector<Coupling> alternate_optimal_couplings(const DiscreteMeasure& mu,
                                                  const DiscreteMeasure& nu, double p,
                                                  std::size_t max_count = 16);

// σ with cloud_a.atoms[j] matched to cloud_b.atoms[sigma[j]].
struct Assignment {
  std::vector<std::size_t> sigma;
  double cost = 0.0;  // ((1/N) Σ d(x_j, y_σ(j))^p)^{1/p}
};

// Optimal matching between equal-size uniform clouds (Hungarian method on
// floating-point costs).
Assignment assignment_wasserstein(const UniformCloud& a, const UniformCloud& b, double p);

// Overload for measures that are uniform clouds of n atoms.
Assignment assignment_wasserstein(const DiscreteMeasure& a, const DiscreteMeasure& b,
                                  std::size_t n, double p);

inline constexpr std::size_t kBruteForceMaxArcs = 12;

// Exhaustive vertex enumeration of the transport polytope: every spanning
// tree of the support bipartite graph is tried as a basis. Requires
// |supp μ|·|supp ν| <= 12.
double brute_force_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

struct Projection {
  // tau[x] = nearest cloud atom to x, lowest atom id on ties.
  std::vector<PointId> tau;
  DiscreteMeasure pushforward;
  double cost = 0.0;  // (∫ d(x, τ(x))^p dμ)^{1/p}
};

Projection nearest_atom_projection(const DiscreteMeasure& mu, const DiscreteMeasure& cloud,
                                   double p);

}  // namespace wasserlim
