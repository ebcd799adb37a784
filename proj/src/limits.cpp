#include "wasserlim/limits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wasserlim/parallel.hpp"

namespace wasserlim {

SpaceSequence::SpaceSequence(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::InvalidArgument, "empty space sequence");
}

std::vector<std::string> SpaceSequence::labels() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

StabilizationVerdict stabilization_verdict(std::string quantity, std::vector<double> values,
                                           double tol, std::vector<std::string> labels) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "no values to judge");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  StabilizationVerdict v;
  v.quantity = std::move(quantity);
  v.tolerance = tol;
  if (labels.empty())
    for (std::size_t i = 0; i < values.size(); ++i) labels.push_back(std::to_string(i));
  v.labels = std::move(labels);

  const std::size_t n = values.size();
  const std::size_t tail = (n + 1) / 2;
  std::vector<double> tail_values(values.end() - static_cast<std::ptrdiff_t>(tail), values.end());
  std::sort(tail_values.begin(), tail_values.end());
  v.limit_estimate = tail % 2 == 1 ? tail_values[tail / 2]
                                   : 0.5 * (tail_values[tail / 2 - 1] + tail_values[tail / 2]);
  auto close = [&](double x) { return std::abs(x - v.limit_estimate) <= tol; };
  v.stabilized = std::all_of(tail_values.begin(), tail_values.end(), close);
  v.tail_start = n;
  while (v.tail_start > 0 && close(values[v.tail_start - 1])) --v.tail_start;
  v.values = std::move(values);
  return v;
}

namespace {

void check_family(const SpaceSequence& seq, const MeasureFamily& family, const char* name) {
  if (family.size() != seq.size()) {
    throw Error(ErrorCode::FamilyLengthMismatch, std::string(name) + " has " +
                                                     std::to_string(family.size()) + " measures for " +
                                                     std::to_string(seq.size()) + " entries");
  }
  for (std::size_t i = 0; i < seq.size(); ++i) require_same_space(family[i], seq[i].reference);
}

}  // namespace

StabilizationVerdict sequence_wasserstein(const SpaceSequence& seq, const MeasureFamily& mu,
                                          const MeasureFamily& nu, double p, double tol) {
  check_family(seq, mu, "mu family");
  check_family(seq, nu, "nu family");
  std::vector<double> values(seq.size());
  parallel_for(seq.size(), [&](std::size_t i) { values[i] = wasserstein_p(mu[i], nu[i], p).distance; });
  char name[32];
  std::snprintf(name, sizeof name, "w%g", p);
  return stabilization_verdict(name, std::move(values), tol, seq.labels());
}

StabilizationVerdict sequence_total_variation(const SpaceSequence& seq, const MeasureFamily& mu,
                                              const MeasureFamily& nu, double tol) {
  check_family(seq, mu, "mu family");
  check_family(seq, nu, "nu family");
  std::vector<double> values(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) values[i] = total_variation(mu[i], nu[i]);
  return stabilization_verdict("tv", std::move(values), tol, seq.labels());
}

EscapingMassFamily escaping_mass_family(const std::vector<std::size_t>& n_values) {
  if (n_values.empty()) throw Error(ErrorCode::InvalidArgument, "no N values");
  std::vector<SpaceSequence::Entry> entries;
  MeasureFamily dirac, escaping;
  for (std::size_t n : n_values) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "N must be a positive integer");
    const double big = static_cast<double>(n);
    auto space = line_space({0.0, std::sqrt(big)});
    dirac.push_back(DiscreteMeasure::dirac(space, 0));
    escaping.push_back(DiscreteMeasure(space, {1.0 - 1.0 / big, 1.0 / big}));
    entries.push_back({escaping.back(), "N=" + std::to_string(n)});
  }
  return EscapingMassFamily{SpaceSequence(std::move(entries)), std::move(dirac), std::move(escaping),
                            n_values};
}

SequenceCdResult sequence_cd(const SpaceSequence& seq, const PairGeneratorSpec& spec, double tol,
                             const EstimateOptions& options) {
  SequenceCdResult result;
  result.reports.reserve(seq.size());
  std::vector<double> values;
  for (const auto& entry : seq.entries()) {
    result.reports.push_back(estimate_k(entry.reference, spec, options));
    values.push_back(result.reports.back().k_witnessed);
  }
  result.verdict = stabilization_verdict("k_witnessed", std::move(values), tol, seq.labels());
  const auto& v = result.verdict.values;
  const std::size_t from = v.size() - (v.size() + 1) / 2;
  result.tail_min = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(from), v.end());
  return result;
}

QuantizationAudit quantization_uniformity_audit(const SpaceSequence& seq, double delta, double p) {
  QuantizationAudit audit;
  audit.delta = delta;
  audit.p = p;
  audit.rows.resize(seq.size());
  parallel_for(seq.size(), [&](std::size_t i) {
    const auto q = uniform_quantization(seq[i].reference, delta, p);
    audit.rows[i] = {i, seq[i].label, q.atom_count, q.covering_k, q.covering_budget, q.achieved_error};
  });
  for (const auto& row : audit.rows) audit.uniform_n = std::max(audit.uniform_n, row.atom_count);
  return audit;
}

DiscreteMeasure discretize_profile(const SpacePtr& space, const std::function<double(double)>& profile) {
  if (!space || !space->coordinates())
    throw Error(ErrorCode::InvalidArgument, "profile discretization needs coordinates");
  std::vector<double> w;
  for (double x : *space->coordinates()) w.push_back(profile(x));
  return DiscreteMeasure(space, std::move(w));
}

SpaceSequence dyadic_sequence(int first_level, int last_level) {
  if (first_level > last_level) throw Error(ErrorCode::InvalidArgument, "empty level range");
  std::vector<SpaceSequence::Entry> entries;
  for (int level = first_level; level <= last_level; ++level)
    entries.push_back({DiscreteMeasure::uniform(dyadic_interval_space(level)),
                       "level=" + std::to_string(level)});
  return SpaceSequence(std::move(entries));
}

SpaceSequence dyadic_sequence(int first_level, int last_level,
                              const std::function<double(double)>& profile) {
  if (first_level > last_level) throw Error(ErrorCode::InvalidArgument, "empty level range");
  std::vector<SpaceSequence::Entry> entries;
  for (int level = first_level; level <= last_level; ++level)
    entries.push_back({discretize_profile(dyadic_interval_space(level), profile),
                       "level=" + std::to_string(level)});
  return SpaceSequence(std::move(entries));
}

}  // namespace wasserlim
