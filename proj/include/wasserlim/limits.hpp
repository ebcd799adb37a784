#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wasserlim/curvature.hpp"

namespace wasserlim {

// Indexed family of pointed metric measure spaces (X_i, d_i, e_i, λ_i).
class SpaceSequence {
public:
  struct Entry {
    DiscreteMeasure reference;  // λ_i, carries its space
    std::string label;
  };

  explicit SpaceSequence(std::vector<Entry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::vector<std::string> labels() const;

private:
  std::vector<Entry> entries_;
};

// Finite stand-in for an almost-sure tail statement: the values stabilize
// when the last ⌈n/2⌉ of them lie within tol of their median, which becomes
// limit_estimate. tail_start is the first index from which every value is
// within tol of that estimate.
struct StabilizationVerdict {
  std::string quantity;
  std::vector<std::string> labels;
  std::vector<double> values;
  bool stabilized = false;
  double limit_estimate = 0.0;
  std::size_t tail_start = 0;
  double tolerance = 0.0;
};

StabilizationVerdict stabilization_verdict(std::string quantity, std::vector<double> values,
                                           double tol, std::vector<std::string> labels = {});

using MeasureFamily = std::vector<DiscreteMeasure>;

// W_p(μ_i, ν_i) per index.
StabilizationVerdict sequence_wasserstein(const SpaceSequence& seq, const MeasureFamily& mu,
                                          const MeasureFamily& nu, double p, double tol);

// TV(μ_i, ν_i) per index.
StabilizationVerdict sequence_total_variation(const SpaceSequence& seq, const MeasureFamily& mu,
                                              const MeasureFamily& nu, double tol);

struct EscapingMassFamily {
  SpaceSequence sequence;
  MeasureFamily dirac;    // δ₀
  MeasureFamily escaping; // (1 − 1/N)δ₀ + (1/N)δ_{√N}
  std::vector<std::size_t> n_values;
};

// Two-point line spaces {0, √N}, one per N.
EscapingMassFamily escaping_mass_family(const std::vector<std::size_t>& n_values);

struct SequenceCdResult {
  StabilizationVerdict verdict;
  std::vector<CurvatureReport> reports;
  double tail_min = 0.0;  // min of k_witnessed over the last ⌈n/2⌉ entries
};

// estimate_k on every entry with the same generator spec, so bump pairs
// are matched across entries.
SequenceCdResult sequence_cd(const SpaceSequence& seq, const PairGeneratorSpec& spec, double tol,
                             const EstimateOptions& options = {});

struct QuantizationAuditRow {
  std::size_t index = 0;
  std::string label;
  std::size_t atom_count = 0;
  std::size_t covering_k = 0;
  double covering_budget = 0.0;
  double achieved_error = 0.0;
};

struct QuantizationAudit {
  std::vector<QuantizationAuditRow> rows;
  std::size_t uniform_n = 0;  // one N that serves every entry
  double delta = 0.0;
  double p = 1.0;
};

QuantizationAudit quantization_uniformity_audit(const SpaceSequence& seq, double delta, double p);

// Measure with weights proportional to profile(coordinate) on a space with
// coordinates.
DiscreteMeasure discretize_profile(const SpacePtr& space, const std::function<double(double)>& profile);

// Dyadic interval levels with λ uniform, labelled "level=<L>".
SpaceSequence dyadic_sequence(int first_level, int last_level);

// Dyadic interval levels with λ proportional to the profile.
SpaceSequence dyadic_sequence(int first_level, int last_level,
                              const std::function<double(double)>& profile);

}  // namespace wasserlim
