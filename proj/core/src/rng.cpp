#include "dmcmc/rng.hpp"

#include <cmath>
#include <numbers>

namespace dmcmc {

std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_trial_seed(std::uint64_t root_seed, std::uint64_t trial_index) {
  return splitmix64(root_seed ^ splitmix64(trial_index + 0x51ed270b7a4fd4bfull));
}

RngStream::RngStream(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  const std::uint64_t t = hash_tag(tag);
  const std::seed_seq::result_type parts[6] = {
      static_cast<std::seed_seq::result_type>(seed & 0xffffffffu),
      static_cast<std::seed_seq::result_type>(seed >> 32),
      static_cast<std::seed_seq::result_type>(t & 0xffffffffu),
      static_cast<std::seed_seq::result_type>(t >> 32),
      static_cast<std::seed_seq::result_type>(index & 0xffffffffu),
      static_cast<std::seed_seq::result_type>(index >> 32),
  };
  std::seed_seq seq(std::begin(parts), std::end(parts));
  engine_.seed(seq);
}

double RngStream::uniform() {
  // 53-bit mantissa in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

Eigen::VectorXd RngStream::normal_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

}  // namespace dmcmc
