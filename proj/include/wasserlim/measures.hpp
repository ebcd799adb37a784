#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wasserlim/spaces.hpp"

namespace wasserlim {

// Finitely supported probability measure on a FiniteMetricSpace, one weight
// per point. Weights are renormalized to sum to one on construction; the
// pre-normalization defect (sum - 1) is kept for diagnostics.
class DiscreteMeasure {
public:
  DiscreteMeasure(SpacePtr space, std::vector<double> weights);

  static DiscreteMeasure dirac(SpacePtr space, PointId x);
  static DiscreteMeasure uniform(SpacePtr space);
  static DiscreteMeasure uniform_on(SpacePtr space, std::span<const PointId> points);

  const FiniteMetricSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](PointId x) const { return weights_[x]; }
  std::size_t size() const noexcept { return weights_.size(); }

  std::vector<PointId> support() const;
  double normalization_defect() const noexcept { return defect_; }

  // Equal positive weights on the support.
  bool is_uniform_cloud() const noexcept;

private:
  SpacePtr space_;
  std::vector<double> weights_;
  double defect_ = 0.0;
};

void require_same_space(const DiscreteMeasure& a, const DiscreteMeasure& b);

// Density f with respect to a reference measure. Values are unset exactly
// where the reference has no mass, so f dλ is absolutely continuous by
// construction. `normalized` marks densities whose induced mass is one.
class Density {
public:
  Density(DiscreteMeasure reference, std::vector<std::optional<double>> values, bool normalized);

  const DiscreteMeasure& reference() const noexcept { return reference_; }
  const std::vector<std::optional<double>>& values() const noexcept { return values_; }
  double value(PointId x) const { return values_[x].value_or(0.0); }
  bool normalized() const noexcept { return normalized_; }

  // ∫ f dλ
  double mass() const;
  double sup_norm() const;

  // f dλ / mass; throws ZeroMass.
  DiscreteMeasure to_measure() const;

private:
  DiscreteMeasure reference_;
  std::vector<std::optional<double>> values_;
  bool normalized_;
};

// dν/dλ; throws AbsoluteContinuityFailure if ν charges a λ-null point.
Density density_of(const DiscreteMeasure& nu, const DiscreteMeasure& lambda);

// Σ w_j d(e, x_j)^p with e the base point.
double pth_moment(const DiscreteMeasure& mu, double p);

// ½ Σ |μ_j − ν_j|
double total_variation(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// (1/n) Σ δ_{X_j}, X_j drawn i.i.d. from μ by inverse CDF in point order
// with CounterRng(seed).
DiscreteMeasure empirical_sample(const DiscreteMeasure& mu, std::size_t n, std::uint64_t seed);

// min(m, f) on the mask, 0 elsewhere. Not renormalized; mass() reports
// μ(f↾m). Throws EmptyTruncation when the result has no mass.
Density truncate_density(const Density& f, double m, std::span<const PointId> mask);
Density truncate_density(const Density& f, double m);  // mask = supp(λ)

// f / mass(f); throws ZeroMass.
Density normalize_density(const Density& f);

// N atoms (repeats allowed), each carrying mass 1/N.
struct UniformCloud {
  SpacePtr space;
  std::vector<PointId> atoms;  // sorted

  std::size_t size() const noexcept { return atoms.size(); }
  DiscreteMeasure to_measure() const;
};

// Reads μ as a cloud of exactly n atoms; throws NotUniformCloud when some
// weight is not a multiple of 1/n (to 1e-9).
UniformCloud as_uniform_cloud(const DiscreteMeasure& mu, std::size_t n);

// Counts c_j with Σ c_j = n via rounding of the cumulative distribution in
// point order: c_j = round(n F_j) − round(n F_{j−1}).
std::vector<std::size_t> cumulative_rounding(std::span<const double> weights, std::size_t n);

struct QuantizationResult {
  UniformCloud cloud;
  std::size_t atom_count = 0;
  double achieved_error = 0.0;  // exact W_p(cloud, μ)
  // Covering-ball bound: k(δ/2) · (2D/δ)^p atoms always suffice.
  double covering_budget = 0.0;
  std::size_t covering_k = 0;
};

inline constexpr std::size_t kMaxQuantizationAtoms = 1'000'000;

// Uniform Dirac cloud on supp(μ) with W_p(cloud, μ) <= delta. A measure that
// already is a uniform cloud is returned as is; otherwise N doubles from 1
// until the exact error meets delta (QuantizationBudgetExceeded past 10^6).
QuantizationResult uniform_quantization(const DiscreteMeasure& mu, double delta, double p);

}  // namespace wasserlim
