#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nkgov/policy.hpp"

namespace nkgov::harness {

struct PowerLaw {
  double exponent = 0;
  double coefficient = 0;
};

/// Least squares on (ln x, ln y): y = coefficient * x^exponent. Needs at least
/// three points, all positive, and two distinct x; otherwise DegenerateInput.
PowerLaw fit_power_law(std::span<const std::pair<double, double>> points);

struct ScalingRow {
  int n = 0;
  std::size_t m = 0;
  double median_k = 0;
  double median_validation_ms = 0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;  // sorted by n
  PowerLaw fit;                  // latency against k
};

struct ScalingOptions {
  int reps = 20;
  std::uint64_t seed = 1;
  /// Timed repetitions of each verification; the median is recorded.
  int timing_repeats = 9;
};

/// Edge factor used for `n` nodes: 2.67 at the 450-node baseline, 3 above.
double default_edge_factor(int n);

/// For each size: generate a topology, run `reps` UPF-congestion remediations
/// through the full engine and record median subgraph size and median
/// validation time. Needs at least three distinct sizes (InsufficientSizes).
ScalingResult run_scaling(std::vector<int> sizes, const PolicySet& policies,
                          const ScalingOptions& options = {});

/// "n,m,k,latencyMs" rows followed by "# fit: latency = c * k^e" summary.
std::string scaling_csv(const ScalingResult& result);

}  // namespace nkgov::harness
