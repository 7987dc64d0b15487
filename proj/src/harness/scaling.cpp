#include "nkgov/harness/scaling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "nkgov/engine.hpp"
#include "nkgov/error.hpp"
#include "nkgov/harness/agents.hpp"
#include "nkgov/harness/scenarios.hpp"
#include "nkgov/harness/suite.hpp"
#include "nkgov/harness/topology_gen.hpp"

namespace nkgov::harness {

PowerLaw fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw Error(ErrorCode::DegenerateInput, "need at least 3 points");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    if (!(x > 0 && y > 0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw Error(ErrorCode::DegenerateInput, "points must be positive and finite");
    }
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx <= 0) throw Error(ErrorCode::DegenerateInput, "x values are identical");
  const double slope = sxy / sxx;
  return {slope, std::exp(my - slope * mx)};
}

double default_edge_factor(int n) { return n <= 450 ? 2.67 : 3.0; }

ScalingResult run_scaling(std::vector<int> sizes, const PolicySet& policies,
                          const ScalingOptions& options) {
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  if (sizes.size() < 3) throw Error(ErrorCode::InsufficientSizes, "need at least 3 distinct sizes");
  if (options.reps < 1 || options.timing_repeats < 1) {
    throw Error(ErrorCode::InvalidSpec, "reps and timing repeats must be positive");
  }

  EngineConfig cfg;
  cfg.post_commit_check = false;
  const GovernanceEngine engine(cfg);
  RemedyAgent agent;

  struct Case {
    Graph work;
    std::vector<NodeId> context;
    Plan plan;
    std::int64_t now;
    std::vector<double> samples;
  };
  std::vector<std::vector<Case>> cases(sizes.size());
  std::vector<std::vector<double>> ks(sizes.size());
  std::vector<std::size_t> edges(sizes.size());

  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int n = sizes[si];
    TopologySpec spec;
    spec.n_nodes = n;
    spec.edge_factor = default_edge_factor(n);
    spec.seed = options.seed;
    const Graph topology = generate_topology(spec);
    edges[si] = topology.edge_count();
    // One family keeps the per-size median a function of k rather than of
    // where the scenario mix happens to split.
    const auto scenarios = generate_scenarios({options.reps, 0, 0, 0}, topology,
                                              options.seed + static_cast<std::uint64_t>(n));

    Graph committed = topology.snapshot();
    std::int64_t now = 0;
    for (const auto& s : scenarios) {
      now += 30;
      ingest_telemetry(committed, topology, now, nullptr);
      Graph work = committed.snapshot();
      apply_fault(work, s);
      const auto context = work.extract_subgraph(s.intent.entities, cfg.hops);
      ks[si].push_back(static_cast<double>(context.k()));
      Plan plan = agent.plan(context, s.intent);
      cases[si].push_back({std::move(work), context.node_ids, std::move(plan), now, {}});
    }
  }

  // Rounds interleave the sizes so clock and cache drift hit all of them
  // alike; round 0 only warms up.
  for (int round = 0; round <= options.timing_repeats; ++round) {
    for (auto& size_cases : cases) {
      for (auto& c : size_cases) {
        const auto start = std::chrono::steady_clock::now();
        engine.verify_plan(c.plan, c.work, policies, c.now, c.context);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (round > 0) c.samples.push_back(ms);
      }
    }
  }

  ScalingResult result;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    std::vector<double> ms;
    for (const auto& c : cases[si]) ms.push_back(median(c.samples));
    result.rows.push_back({sizes[si], edges[si], median(ks[si]), median(ms)});
  }

  std::vector<std::pair<double, double>> pts;
  for (const auto& r : result.rows) pts.emplace_back(r.median_k, r.median_validation_ms);
  result.fit = fit_power_law(pts);
  return result;
}

std::string scaling_csv(const ScalingResult& result) {
  std::string out = "n,m,k,latencyMs\n";
  char buf[128];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%d,%zu,%g,%.4f\n", r.n, r.m, r.median_k, r.median_validation_ms);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "# fit: latency = %.5g * k^%.3f\n", result.fit.coefficient,
                result.fit.exponent);
  return out + buf;
}

}  // namespace nkgov::harness
