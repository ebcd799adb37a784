#include "wasserlim/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wasserlim/parallel.hpp"
#include "wasserlim/rng.hpp"

namespace wasserlim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinW2 = 1e-9;

void require_finite_entropy(double h, const char* which) {
  if (!std::isfinite(h))
    throw Error(ErrorCode::InfiniteEntropy, std::string(which) + " is not absolutely continuous");
}

}  // namespace

double relative_entropy(const DiscreteMeasure& nu, const DiscreteMeasure& lambda) {
  require_same_space(nu, lambda);
  double h = 0.0;
  for (PointId j = 0; j < nu.size(); ++j) {
    if (nu[j] == 0.0) continue;
    if (lambda[j] == 0.0) return kInf;
    h += nu[j] * std::log(nu[j] / lambda[j]);
  }
  return h;
}

double relative_entropy(const Density& f) {
  double h = 0.0;
  const auto& lambda = f.reference();
  for (PointId j = 0; j < lambda.size(); ++j) {
    const double v = f.value(j);
    if (v > 0.0) h += lambda[j] * v * std::log(v);
  }
  return h;
}

double relative_entropy_phi(const Density& f) {
  double h = 0.0;
  const auto& lambda = f.reference();
  for (PointId j = 0; j < lambda.size(); ++j) {
    if (lambda[j] == 0.0) continue;
    const double v = f.value(j);
    const double xlogx = v > 0.0 ? v * std::log(v) : 0.0;
    h += lambda[j] * (xlogx - v + 1.0);
  }
  return h;
}

namespace {

CdCheck evaluate(double h0, double h1, double w2, double k, double t, double tol,
                 DiscreteMeasure interpolant, const DiscreteMeasure& lambda) {
  CdCheck c;
  c.h0 = h0;
  c.h1 = h1;
  c.w2 = w2;
  c.lhs = relative_entropy(interpolant, lambda);
  c.rhs = (1.0 - t) * h0 + t * h1 - k * t * (1.0 - t) / 2.0 * w2 * w2;
  c.slack = c.rhs - c.lhs;
  c.holds = c.slack >= -tol;
  c.midpoint = std::move(interpolant);
  return c;
}

}  // namespace

CdCheck cd_interpolant_check(const DiscreteMeasure& nu0, const DiscreteMeasure& nu1,
                             const DiscreteMeasure& lambda, double k, double t, double tol) {
  require_same_space(nu0, lambda);
  require_same_space(nu1, lambda);
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
  const double h0 = relative_entropy(nu0, lambda);
  const double h1 = relative_entropy(nu1, lambda);
  require_finite_entropy(h0, "nu0");
  require_finite_entropy(h1, "nu1");

  const auto transport = wasserstein_p(nu0, nu1, 2.0);
  CdCheck best = evaluate(h0, h1, transport.distance, k, t, tol,
                          t == 0.0 ? nu0 : t == 1.0 ? nu1 : interpolate_coupling(transport.coupling, t),
                          lambda);
  if (best.holds || !transport.coupling.alternative_optimum_possible || t == 0.0 || t == 1.0)
    return best;
  for (const Coupling& alt : alternate_optimal_couplings(nu0, nu1, 2.0)) {
    CdCheck c = evaluate(h0, h1, transport.distance, k, t, tol, interpolate_coupling(alt, t), lambda);
    if (c.slack > best.slack) {
      best = std::move(c);
      best.used_alternate = true;
    }
  }
  return best;
}

CdCheck cd_midpoint_check(const DiscreteMeasure& nu0, const DiscreteMeasure& nu1,
                          const DiscreteMeasure& lambda, double k, double tol) {
  return cd_interpolant_check(nu0, nu1, lambda, k, 0.5, tol);
}

std::pair<DiscreteMeasure, DiscreteMeasure> generate_pair(const DiscreteMeasure& lambda,
                                                          const PairGeneratorSpec& spec,
                                                          std::size_t index) {
  CounterRng rng = CounterRng(spec.seed).split(index);
  const auto& space = lambda.space();
  DensityFamily family = spec.family;
  if (family == DensityFamily::Auto)
    family = space.coordinates() ? DensityFamily::Bump : DensityFamily::Random;
  if (family == DensityFamily::Bump && !space.coordinates())
    throw Error(ErrorCode::InvalidArgument, "bump densities need a space with coordinates");

  const auto support = lambda.support();
  auto build = [&](auto&& value_at) {
    std::vector<double> w(lambda.size(), 0.0);
    for (PointId j : support) w[j] = value_at(j) * lambda[j];
    return DiscreteMeasure(lambda.space_ptr(), std::move(w));
  };

  if (family == DensityFamily::Random) {
    std::vector<double> f0(lambda.size()), f1(lambda.size());
    for (PointId j : support) f0[j] = rng.uniform(0.2, 1.2);
    for (PointId j : support) f1[j] = rng.uniform(0.2, 1.2);
    return {build([&](PointId j) { return f0[j]; }), build([&](PointId j) { return f1[j]; })};
  }

  const auto& x = *space.coordinates();
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double span = *hi_it - *lo_it;
  auto bump = [&] {
    const double c = lo + span * rng.uniform(0.15, 0.85);
    const double s = span * rng.uniform(0.05, 0.2);
    return [c, s, &x](PointId j) {
      if (s == 0.0) return 1.0;
      const double z = (x[j] - c) / s;
      return 0.1 + std::exp(-0.5 * z * z);
    };
  };
  auto first = bump();
  auto second = bump();
  return {build(first), build(second)};
}

CurvatureReport estimate_k(const DiscreteMeasure& lambda,
                           const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& pairs,
                           const EstimateOptions& options) {
  std::vector<PairRecord> records(pairs.size());
  std::vector<std::optional<DiscreteMeasure>> midpoints(pairs.size());

  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto& [nu0, nu1] = pairs[i];
    require_same_space(nu0, lambda);
    require_same_space(nu1, lambda);
    PairRecord& r = records[i];
    r.index = i;
    r.h0 = relative_entropy(nu0, lambda);
    r.h1 = relative_entropy(nu1, lambda);
    require_finite_entropy(r.h0, "nu0");
    require_finite_entropy(r.h1, "nu1");
    const auto transport = wasserstein_p(nu0, nu1, 2.0);
    r.w2 = transport.distance;
    if (r.w2 < kMinW2) {
      r.skipped = true;
      return;
    }
    auto witness = [&](double h_mid) {
      return 8.0 * (0.5 * r.h0 + 0.5 * r.h1 - h_mid) / (r.w2 * r.w2);
    };
    DiscreteMeasure midpoint = interpolate_coupling(transport.coupling, 0.5);
    r.h_mid = relative_entropy(midpoint, lambda);
    r.k = witness(r.h_mid);
    midpoints[i] = std::move(midpoint);
    if (options.search_alternates && r.k < options.k_hint &&
        transport.coupling.alternative_optimum_possible) {
      for (const Coupling& alt : alternate_optimal_couplings(nu0, nu1, 2.0)) {
        DiscreteMeasure candidate = interpolate_coupling(alt, 0.5);
        const double h = relative_entropy(candidate, lambda);
        if (witness(h) > r.k) {
          r.h_mid = h;
          r.k = witness(h);
          r.used_alternate = true;
          midpoints[i] = std::move(candidate);
        }
      }
    }
    r.slack_at_hint = 0.5 * r.h0 + 0.5 * r.h1 - r.h_mid - options.k_hint / 8.0 * r.w2 * r.w2;
  });

  CurvatureReport report;
  report.tolerance = options.tolerance;
  report.pairs = records;
  std::optional<std::size_t> worst;
  for (const PairRecord& r : records) {
    if (r.skipped) {
      ++report.pairs_skipped;
      continue;
    }
    ++report.pairs_tested;
    if (!worst || r.k < records[*worst].k) worst = r.index;
  }
  if (!worst) throw Error(ErrorCode::NoValidPairs, "every pair had W2 below 1e-9");
  const PairRecord& w = records[*worst];
  report.k_witnessed = w.k;
  const double lhs_phi = std::isfinite(w.h_mid)
                             ? relative_entropy_phi(density_of(*midpoints[*worst], lambda))
                             : kInf;
  report.worst_pair = WorstPair{w.index,
                                pairs[*worst].first,
                                pairs[*worst].second,
                                *midpoints[*worst],
                                w.h_mid,
                                0.5 * w.h0 + 0.5 * w.h1 - w.k / 8.0 * w.w2 * w.w2,
                                lhs_phi,
                                w.w2};
  return report;
}

CurvatureReport estimate_k(const DiscreteMeasure& lambda, const PairGeneratorSpec& spec,
                           const EstimateOptions& options) {
  std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>> pairs;
  pairs.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) pairs.push_back(generate_pair(lambda, spec, i));
  return estimate_k(lambda, pairs, options);
}

double descending_slope(std::span<const double> f, const FiniteMetricSpace& space, PointId x) {
  if (f.size() != space.size()) throw Error(ErrorCode::SizeMismatch, "function length differs from space");
  if (x >= space.size()) throw Error(ErrorCode::InvalidArgument, "point out of range");
  double slope = 0.0;
  auto consider = [&](PointId y, double d) {
    if (y == x || d <= 0.0) return;
    slope = std::max(slope, std::max(f[x] - f[y], 0.0) / d);
  };
  if (space.has_geodesic_structure()) {
    for (const Neighbor& nb : space.neighbors(x)) consider(nb.point, space(x, nb.point));
  } else {
    for (PointId y = 0; y < space.size(); ++y) consider(y, space(x, y));
  }
  return slope;
}

LogSobolevCheck log_sobolev_check(const DiscreteMeasure& nu, const DiscreteMeasure& lambda, double k,
                                  double tol) {
  if (!(k > 0.0)) throw Error(ErrorCode::NonpositiveK, "log-Sobolev check needs K > 0");
  const Density density = density_of(nu, lambda);
  // λ-null points carry density 0 for slope purposes.
  std::vector<double> f(lambda.size(), 0.0);
  for (PointId j = 0; j < f.size(); ++j) f[j] = density.value(j);
  LogSobolevCheck c;
  c.lhs = relative_entropy(nu, lambda);
  double fisher = 0.0;
  for (PointId j = 0; j < f.size(); ++j) {
    if (lambda[j] == 0.0 || f[j] <= 0.0) continue;
    const double s = descending_slope(f, lambda.space(), j);
    fisher += lambda[j] * s * s / f[j];
  }
  c.rhs = fisher / (2.0 * k);
  c.holds = c.lhs <= c.rhs + tol;
  return c;
}

DensityBoundCheck rajala_bound_check(const WassersteinPath& path, const DiscreteMeasure& lambda,
                                     double k, double tol) {
  if (path.measures.size() < 2) throw Error(ErrorCode::InvalidArgument, "path needs both endpoints");
  const auto& nu0 = path.measures.front();
  const auto& nu1 = path.measures.back();
  const Density f0 = density_of(nu0, lambda);
  const Density f1 = density_of(nu1, lambda);

  std::vector<PointId> support;
  for (PointId x = 0; x < nu0.size(); ++x)
    if (nu0[x] > 0.0 || nu1[x] > 0.0) support.push_back(x);

  DensityBoundCheck c;
  c.diameter = diameter(lambda.space(), support);
  const double k_minus = std::max(-k, 0.0);
  c.bound = std::exp(k_minus * c.diameter * c.diameter / 12.0) * (f0.sup_norm() + f1.sup_norm());
  for (std::size_t i = 1; i + 1 < path.measures.size(); ++i)
    c.max_density = std::max(c.max_density, density_of(path.measures[i], lambda).sup_norm());
  c.holds = c.max_density <= c.bound + tol;
  return c;
}

}  // namespace wasserlim
