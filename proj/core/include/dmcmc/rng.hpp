#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>

namespace dmcmc {

/// Deterministic random stream derived from (seed, tag, index).
///
/// All randomness in the project flows through streams like this one, so
/// that datasets, initial iterates, and per-iteration noise come from
/// independent substreams of a single root seed. Uniform and normal draws
/// are generated from the raw mt19937_64 output directly (Box-Muller)
/// instead of the std distributions, whose output sequences are not
/// specified by the standard.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_pos();
  /// Standard normal.
  double normal();

  Eigen::VectorXd normal_vector(Eigen::Index n);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Stable 64-bit tag hash (FNV-1a).
std::uint64_t hash_tag(std::string_view tag);

/// Per-trial sub-seed derived from a root seed; recorded in run manifests.
std::uint64_t derive_trial_seed(std::uint64_t root_seed, std::uint64_t trial_index);

}  // namespace dmcmc
