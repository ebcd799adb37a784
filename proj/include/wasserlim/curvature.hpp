#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wasserlim/geodesics.hpp"

namespace wasserlim {

inline constexpr double kEntropyTolerance = 1e-7;

// H(ν|λ) = Σ λ_j f_j log f_j with f = dν/dλ and 0 log 0 = 0;
// +∞ when ν charges a point where λ vanishes.
double relative_entropy(const DiscreteMeasure& nu, const DiscreteMeasure& lambda);

// Σ λ_j f_j log f_j for a density that need not integrate to one.
double relative_entropy(const Density& f);

// Σ λ_j φ(f_j) with φ(x) = x log x − x + 1. Agrees with relative_entropy
// whenever f dλ and λ are both probability measures.
double relative_entropy_phi(const Density& f);

struct CdCheck {
  bool holds = false;
  double slack = 0.0;  // rhs − lhs
  double lhs = 0.0;    // H(ν½|λ)
  double rhs = 0.0;    // ½H(ν₀|λ) + ½H(ν₁|λ) − (K/8) W₂²
  double h0 = 0.0;
  double h1 = 0.0;
  double w2 = 0.0;
  std::optional<DiscreteMeasure> midpoint;
  bool used_alternate = false;  // a non-default optimal coupling won
};

// Midpoint form of K-convexity of the entropy:
//   H(ν½|λ) <= ½H(ν₀|λ) + ½H(ν₁|λ) − (K/8) W₂²(ν₀, ν₁) + tol.
// When the solver's midpoint fails, midpoints along alternate optimal
// couplings are tried before reporting.
CdCheck cd_midpoint_check(const DiscreteMeasure& nu0, const DiscreteMeasure& nu1,
                          const DiscreteMeasure& lambda, double k,
                          double tol = kEntropyTolerance);

// General-t form, diagnostics only:
//   H(ν_t) <= (1−t)H(ν₀) + tH(ν₁) − K t(1−t)/2 · W₂².
CdCheck cd_interpolant_check(const DiscreteMeasure& nu0, const DiscreteMeasure& nu1,
                             const DiscreteMeasure& lambda, double k, double t,
                             double tol = kEntropyTolerance);

enum class DensityFamily {
  Auto,    // Bump when the space has coordinates, Random otherwise
  Random,  // i.i.d. values in [0.2, 1.2) on supp(λ)
  Bump,    // 0.1 + exp(−(x−c)²/2s²) of the coordinate, c and s drawn per pair
};

// Seeded source of endpoint pairs. Pair i uses stream split(i) of
// CounterRng(seed), so a pair does not depend on the other pairs, and bump
// pairs depend only on the coordinates, not on the discretization.
struct PairGeneratorSpec {
  std::size_t count = 50;
  std::uint64_t seed = 7;
  DensityFamily family = DensityFamily::Auto;
};

std::pair<DiscreteMeasure, DiscreteMeasure> generate_pair(const DiscreteMeasure& lambda,
                                                          const PairGeneratorSpec& spec,
                                                          std::size_t index);

struct PairRecord {
  std::size_t index = 0;
  bool skipped = false;  // W₂ below 1e-9
  double k = 0.0;        // 8(½H₀ + ½H₁ − H½)/W₂²
  double h0 = 0.0;
  double h1 = 0.0;
  double h_mid = 0.0;
  double w2 = 0.0;
  double slack_at_hint = 0.0;  // cd slack at K = k_hint
  bool used_alternate = false;
};

struct WorstPair {
  std::size_t index = 0;
  DiscreteMeasure nu0;
  DiscreteMeasure nu1;
  DiscreteMeasure midpoint;
  double lhs = 0.0;  // H(ν½|λ)
  double rhs = 0.0;  // ½H₀ + ½H₁ − (k_witnessed/8)W₂²
  double lhs_phi = 0.0;
  double w2 = 0.0;
};

struct CurvatureReport {
  double k_witnessed = 0.0;
  std::size_t pairs_tested = 0;
  std::size_t pairs_skipped = 0;
  std::optional<WorstPair> worst_pair;
  std::vector<PairRecord> pairs;
  double tolerance = kEntropyTolerance;
};

struct EstimateOptions {
  double tolerance = kEntropyTolerance;
  // Pairs whose witnessed k falls below this hint get a secondary search
  // over alternate optimal couplings.
  double k_hint = 0.0;
  bool search_alternates = true;
};

// k_witnessed = min over generated pairs of 8(½H₀ + ½H₁ − H½)/W₂².
// Pairs are evaluated in parallel; the min is taken in index order.
CurvatureReport estimate_k(const DiscreteMeasure& lambda, const PairGeneratorSpec& spec,
                           const EstimateOptions& options = {});

// Same, over explicitly supplied pairs.
CurvatureReport estimate_k(const DiscreteMeasure& lambda,
                           const std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>>& pairs,
                           const EstimateOptions& options = {});

// max_y max(f(x) − f(y), 0) / d(x, y), y ranging over graph neighbors when
// the space has a geodesic structure and over all other points otherwise.
double descending_slope(std::span<const double> f, const FiniteMetricSpace& space, PointId x);

struct LogSobolevCheck {
  bool holds = false;
  double lhs = 0.0;  // H(ν|λ)
  double rhs = 0.0;  // (1/2K) Σ_{f>0} λ_j |∇⁻f|²(x_j) / f_j
};

LogSobolevCheck log_sobolev_check(const DiscreteMeasure& nu, const DiscreteMeasure& lambda, double k,
                                  double tol = kEntropyTolerance);

struct DensityBoundCheck {
  bool holds = false;
  double max_density = 0.0;  // over interior grid measures
  double bound = 0.0;        // e^{K⁻D²/12}(‖f₀‖∞ + ‖f₁‖∞)
  double diameter = 0.0;     // diam(supp f₀ ∪ supp f₁)
};

// Sup-norm control of interpolant densities along a W₂ path. Throws
// AbsoluteContinuityFailure when an interior measure leaves supp(λ).
DensityBoundCheck rajala_bound_check(const WassersteinPath& path, const DiscreteMeasure& lambda,
                                     double k, double tol = 1e-6);

}  // namespace wasserlim
