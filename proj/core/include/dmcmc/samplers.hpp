#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dmcmc/potentials.hpp"
#include "dmcmc/rng.hpp"
#include "dmcmc/topology.hpp"

namespace dmcmc {

enum class Algorithm { dadmms, admm, dsgld, dsghmc, dula };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// Primal/dual iterates of the ADMM family. With noise_on = false the update
/// is exactly the noiseless consensus-ADMM optimizer.
struct AdmmState {
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> p;
  long k = 0;
  double rho = 5.0;
  bool noise_on = true;
};

/// Iterates of the gradient-based baselines; v is the D-SGHMC momentum.
struct LangevinState {
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> v;
  long k = 0;
};

/// One synchronous round's injected noise, one standard-normal vector per
/// agent, drawn in fixed agent order.
struct NoiseDraw {
  std::vector<Eigen::VectorXd> w;
};

NoiseDraw draw_noise(RngStream& rng, int n_agents, int d);

/// Decreasing D-ULA step-size schedules
/// alpha(k) = alpha_scale / (offset + k)^chi2, zeta(k) = zeta_scale / (offset + k)^chi1.
struct DulaSchedule {
  double chi1 = 0.05;
  double chi2 = 0.05;
  double alpha_scale = 0.00082;
  double zeta_scale = 0.48;
  double offset = 230.0;

  double alpha(long k) const;
  double zeta(long k) const;
};

struct AlgorithmParams {
  Algorithm algo = Algorithm::dadmms;
  double rho = 5.0;       // ADMM family penalty
  double eta = 0.0;       // D-SGLD / D-SGHMC step size
  double friction = 0.0;  // D-SGHMC friction gamma
  DulaSchedule dula;
};

/// All steps are synchronous rounds: each agent's update reads only the
/// previous round's communicated values (the ADMM dual phase reads the
/// round's fresh primals, which Algorithm-wise are communicated before the
/// dual update). `update_order` exists so tests can verify that permuting
/// the agent schedule leaves results bit-identical; production callers leave
/// it null.

AdmmState dadmms_step(const AdmmState& state, const Topology& topo,
                      const PotentialSet& potentials, const NoiseDraw& noise,
                      const std::vector<int>* update_order = nullptr);

/// Noiseless consensus ADMM (the optimizer D-ADMMS modifies).
AdmmState cadmm_step(const AdmmState& state, const Topology& topo,
                     const PotentialSet& potentials,
                     const std::vector<int>* update_order = nullptr);

LangevinState dsgld_step(const LangevinState& state, const Eigen::MatrixXd& mixing,
                         const PotentialSet& potentials, double eta, const NoiseDraw& noise,
                         const std::vector<int>* update_order = nullptr);

LangevinState dsghmc_step(const LangevinState& state, const Eigen::MatrixXd& mixing,
                          const PotentialSet& potentials, double eta, double friction,
                          const NoiseDraw& noise,
                          const std::vector<int>* update_order = nullptr);

/// Uses state.k for the schedules; noise enters as sqrt(N) * w (i.e. N(0, N I)).
LangevinState dula_step(const LangevinState& state, const Topology& topo,
                        const PotentialSet& potentials, const DulaSchedule& sched,
                        const NoiseDraw& noise,
                        const std::vector<int>* update_order = nullptr);

/// Per-agent iterates recorded at the listed iteration numbers
/// (states[r][i] is agent i at iteration iterations[r]).
struct ChainHistory {
  std::vector<long> iterations;
  std::vector<std::vector<Eigen::VectorXd>> states;
};

/// Runs one trial: x_i^(0) ~ N(0, I) and per-iteration noise come from
/// substreams of trial_seed, so the chain is a pure function of
/// (params, topology, potentials, n_iters, thin, trial_seed). Iteration 0 and
/// the final iteration are always recorded; `thin` controls the stride.
ChainHistory run_chain(const AlgorithmParams& params, const PotentialSet& potentials,
                       const Topology& topo, long n_iters, long thin,
                       std::uint64_t trial_seed);

}  // namespace dmcmc
