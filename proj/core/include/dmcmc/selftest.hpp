#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmcmc/topology.hpp"

namespace dmcmc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every module's invariant and property checks (matrix identities,
/// finite-difference oracles, convexity sampling, metric axioms, inequality
/// sampling, determinism). Deterministic given the seed.
std::vector<CheckResult> run_selftest(std::uint64_t seed = 2024);

/// Random connected topology (spanning tree plus extra edges); used by the
/// property checks and tests.
Topology random_connected_topology(int n_agents, int extra_edges, std::uint64_t seed);

}  // namespace dmcmc
