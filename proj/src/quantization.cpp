#include <cmath>

#include "wasserlim/measures.hpp"
#include "wasserlim/transport.hpp"

namespace wasserlim {

namespace {

UniformCloud cloud_from_counts(const SpacePtr& space, const std::vector<std::size_t>& counts) {
  UniformCloud cloud{space, {}};
  for (PointId j = 0; j < counts.size(); ++j) cloud.atoms.insert(cloud.atoms.end(), counts[j], j);
  return cloud;
}

}  // namespace

QuantizationResult uniform_quantization(const DiscreteMeasure& mu, double delta, double p) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");

  QuantizationResult result;
  const auto support = mu.support();
  const double diam = diameter(mu.space(), support);
  result.covering_k = covering_number(mu.space(), delta / 2.0).k;
  result.covering_budget =
      static_cast<double>(result.covering_k) * std::pow(2.0 * diam / delta, p);

  // A uniform cloud of k atoms is its own exact quantization, so the search
  // only looks for something smaller.
  const bool cloud_input = mu.is_uniform_cloud();
  const std::size_t limit = cloud_input ? support.size() : kMaxQuantizationAtoms + 1;
  for (std::size_t n = 1; n < limit && n <= kMaxQuantizationAtoms; n *= 2) {
    const auto counts = cumulative_rounding(mu.weights(), n);
    UniformCloud cloud = cloud_from_counts(mu.space_ptr(), counts);
    const double error = wasserstein_p(cloud.to_measure(), mu, p).distance;
    if (error <= delta) {
      result.cloud = std::move(cloud);
      result.atom_count = n;
      result.achieved_error = error;
      return result;
    }
  }
  if (cloud_input) {
    result.cloud = UniformCloud{mu.space_ptr(), support};
    result.atom_count = support.size();
    result.achieved_error = 0.0;
    return result;
  }
  throw Error(ErrorCode::QuantizationBudgetExceeded,
              "no cloud of at most 10^6 atoms reaches the requested accuracy");
}

}  // namespace wasserlim
