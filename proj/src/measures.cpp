#include "wasserlim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wasserlim/rng.hpp"

namespace wasserlim {

DiscreteMeasure::DiscreteMeasure(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw Error(ErrorCode::InvalidArgument, "measure without a space");
  if (weights_.size() != space_->size()) {
    throw Error(ErrorCode::SizeMismatch, "measure has " + std::to_string(weights_.size()) +
                                             " weights for " + std::to_string(space_->size()) +
                                             " points");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w)) throw Error(ErrorCode::NonFinite, "non-finite weight");
    if (w < 0.0) throw Error(ErrorCode::InvalidArgument, "negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroMass, "measure has no mass");
  defect_ = total - 1.0;
  if (total != 1.0)
    for (double& w : weights_) w /= total;
}

DiscreteMeasure DiscreteMeasure::dirac(SpacePtr space, PointId x) {
  if (!space || x >= space->size()) throw Error(ErrorCode::InvalidArgument, "dirac point out of range");
  std::vector<double> w(space->size(), 0.0);
  w[x] = 1.0;
  return DiscreteMeasure(std::move(space), std::move(w));
}

DiscreteMeasure DiscreteMeasure::uniform(SpacePtr space) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "null space");
  const std::size_t n = space->size();
  return DiscreteMeasure(std::move(space), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DiscreteMeasure DiscreteMeasure::uniform_on(SpacePtr space, std::span<const PointId> points) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "null space");
  if (points.empty()) throw Error(ErrorCode::EmptySubset, "uniform measure on empty set");
  std::vector<double> w(space->size(), 0.0);
  const double unit = 1.0 / static_cast<double>(points.size());
  for (PointId x : points) {
    if (x >= space->size()) throw Error(ErrorCode::InvalidArgument, "point out of range");
    w[x] += unit;
  }
  return DiscreteMeasure(std::move(space), std::move(w));
}

std::vector<PointId> DiscreteMeasure::support() const {
  std::vector<PointId> s;
  for (PointId i = 0; i < weights_.size(); ++i)
    if (weights_[i] > 0.0) s.push_back(i);
  return s;
}

bool DiscreteMeasure::is_uniform_cloud() const noexcept {
  double first = 0.0;
  for (double w : weights_) {
    if (w == 0.0) continue;
    if (first == 0.0) first = w;
    if (std::abs(w - first) > 1e-12) return false;
  }
  return true;
}

void require_same_space(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (!same_space(a.space_ptr(), b.space_ptr()))
    throw Error(ErrorCode::SpaceMismatch, "measures live on different spaces");
}

Density::Density(DiscreteMeasure reference, std::vector<std::optional<double>> values,
                 bool normalized)
    : reference_(std::move(reference)), values_(std::move(values)), normalized_(normalized) {
  if (values_.size() != reference_.size())
    throw Error(ErrorCode::SizeMismatch, "density length differs from reference");
  for (PointId j = 0; j < values_.size(); ++j) {
    if (reference_[j] == 0.0) {
      values_[j].reset();
      continue;
    }
    if (!values_[j]) values_[j] = 0.0;
    if (!std::isfinite(*values_[j]) || *values_[j] < 0.0)
      throw Error(ErrorCode::InvalidArgument, "density values must be finite and nonnegative");
  }
}

double Density::mass() const {
  double m = 0.0;
  for (PointId j = 0; j < values_.size(); ++j)
    if (values_[j]) m += *values_[j] * reference_[j];
  return m;
}

double Density::sup_norm() const {
  double s = 0.0;
  for (const auto& v : values_)
    if (v) s = std::max(s, *v);
  return s;
}

DiscreteMeasure Density::to_measure() const {
  std::vector<double> w(values_.size(), 0.0);
  for (PointId j = 0; j < values_.size(); ++j)
    if (values_[j]) w[j] = *values_[j] * reference_[j];
  if (!(std::accumulate(w.begin(), w.end(), 0.0) > 0.0))
    throw Error(ErrorCode::ZeroMass, "density has zero mass");
  return DiscreteMeasure(reference_.space_ptr(), std::move(w));
}

Density density_of(const DiscreteMeasure& nu, const DiscreteMeasure& lambda) {
  require_same_space(nu, lambda);
  std::vector<std::optional<double>> f(nu.size());
  for (PointId j = 0; j < nu.size(); ++j) {
    if (lambda[j] > 0.0) {
      f[j] = nu[j] / lambda[j];
    } else if (nu[j] > 0.0) {
      throw Error(ErrorCode::AbsoluteContinuityFailure,
                  "mass at point " + std::to_string(j) + " outside the reference support");
    }
  }
  return Density(lambda, std::move(f), true);
}

double pth_moment(const DiscreteMeasure& mu, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");
  const PointId e = mu.space().base_point();
  double total = 0.0;
  for (PointId j = 0; j < mu.size(); ++j)
    if (mu[j] > 0.0) total += mu[j] * std::pow(mu.space()(e, j), p);
  return total;
}

double total_variation(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_space(mu, nu);
  // Σ(μ−ν)⁺ and Σ(ν−μ)⁺ agree for probability vectors; take the one whose
  // terms carry the smaller rounding bound.
  double excess = 0.0, deficit = 0.0, excess_scale = 0.0, deficit_scale = 0.0;
  for (PointId j = 0; j < mu.size(); ++j) {
    const double d = mu[j] - nu[j];
    if (d > 0.0) {
      excess += d;
      excess_scale += mu[j];
    } else if (d < 0.0) {
      deficit -= d;
      deficit_scale += nu[j];
    }
  }
  return std::min(1.0, excess_scale <= deficit_scale ? excess : deficit);
}

DiscreteMeasure empirical_sample(const DiscreteMeasure& mu, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
  std::vector<double> cdf(mu.size());
  std::partial_sum(mu.weights().begin(), mu.weights().end(), cdf.begin());
  const auto support = mu.support();
  CounterRng rng(seed);
  std::vector<double> counts(mu.size(), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    PointId x = it == cdf.end() ? support.back() : static_cast<PointId>(it - cdf.begin());
    counts[x] += 1.0;
  }
  return DiscreteMeasure(mu.space_ptr(), std::move(counts));
}

Density truncate_density(const Density& f, double m, std::span<const PointId> mask) {
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "truncation height must be positive");
  const auto& lambda = f.reference();
  std::vector<bool> in_mask(lambda.size(), false);
  for (PointId x : mask) {
    if (x >= lambda.size() || lambda[x] == 0.0)
      throw Error(ErrorCode::InvalidArgument, "mask point outside the reference support");
    in_mask[x] = true;
  }
  std::vector<std::optional<double>> values(lambda.size());
  for (PointId j = 0; j < lambda.size(); ++j) {
    if (lambda[j] == 0.0) continue;
    values[j] = in_mask[j] ? std::min(m, f.value(j)) : 0.0;
  }
  Density out(lambda, std::move(values), false);
  if (!(out.mass() > 0.0)) throw Error(ErrorCode::EmptyTruncation, "truncated density has zero mass");
  return out;
}

Density truncate_density(const Density& f, double m) {
  const auto mask = f.reference().support();
  return truncate_density(f, m, mask);
}

Density normalize_density(const Density& f) {
  const double mass = f.mass();
  if (!(mass > 0.0)) throw Error(ErrorCode::ZeroMass, "cannot normalize a zero density");
  if (f.normalized()) return f;
  std::vector<std::optional<double>> values = f.values();
  for (auto& v : values)
    if (v) *v /= mass;
  return Density(f.reference(), std::move(values), true);
}

DiscreteMeasure UniformCloud::to_measure() const {
  if (atoms.empty()) throw Error(ErrorCode::ZeroMass, "empty cloud");
  return DiscreteMeasure::uniform_on(space, atoms);
}

UniformCloud as_uniform_cloud(const DiscreteMeasure& mu, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cloud size must be positive");
  UniformCloud cloud{mu.space_ptr(), {}};
  for (PointId j = 0; j < mu.size(); ++j) {
    const double scaled = mu[j] * static_cast<double>(n);
    const double count = std::round(scaled);
    if (std::abs(scaled - count) > 1e-9) {
      throw Error(ErrorCode::NotUniformCloud, "weight at point " + std::to_string(j) +
                                                  " is not a multiple of 1/" + std::to_string(n));
    }
    cloud.atoms.insert(cloud.atoms.end(), static_cast<std::size_t>(count), j);
  }
  if (cloud.atoms.size() != n)
    throw Error(ErrorCode::NotUniformCloud, "atom count does not match " + std::to_string(n));
  return cloud;
}

std::vector<std::size_t> cumulative_rounding(std::span<const double> weights, std::size_t n) {
  std::vector<std::size_t> counts(weights.size(), 0);
  double cumulative = 0.0;
  std::size_t previous = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    cumulative += weights[j];
    std::size_t upto = static_cast<std::size_t>(std::llround(cumulative * static_cast<double>(n)));
    upto = std::min(upto, n);
    if (j + 1 == weights.size()) upto = n;
    counts[j] = upto > previous ? upto - previous : 0;
    previous = std::max(previous, upto);
  }
  return counts;
}

}  // namespace wasserlim
