#include "dmcmc/samplers.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace dmcmc {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::dadmms: return "dadmms";
    case Algorithm::admm: return "admm";
    case Algorithm::dsgld: return "dsgld";
    case Algorithm::dsghmc: return "dsghmc";
    case Algorithm::dula: return "dula";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "dadmms") return Algorithm::dadmms;
  if (s == "admm") return Algorithm::admm;
  if (s == "dsgld") return Algorithm::dsgld;
  if (s == "dsghmc") return Algorithm::dsghmc;
  if (s == "dula") return Algorithm::dula;
  throw std::invalid_argument("unknown algorithm: " + s);
}

NoiseDraw draw_noise(RngStream& rng, int n_agents, int d) {
  NoiseDraw out;
  out.w.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) out.w.push_back(rng.normal_vector(d));
  return out;
}

double DulaSchedule::alpha(long k) const {
  return alpha_scale / std::pow(offset + static_cast<double>(k), chi2);
}

double DulaSchedule::zeta(long k) const {
  return zeta_scale / std::pow(offset + static_cast<double>(k), chi1);
}

namespace {

std::vector<int> identity_order(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

void check_agents(const Topology& topo, std::size_t n_pot, std::size_t n_state) {
  if (n_pot != static_cast<std::size_t>(topo.n_agents()) || n_state != n_pot)
    throw std::invalid_argument("agent count mismatch between state, topology, potentials");
}

/// Shared ADMM round. The primal phase writes fresh iterates from round-k
/// values only; the dual phase then reads the fresh primals, matching the
/// communicate-then-update order of the synchronous protocol. Noise is
/// injected only when `noise` is non-null and state.noise_on holds.
AdmmState admm_round(const AdmmState& state, const Topology& topo,
                     const PotentialSet& potentials, const NoiseDraw* noise,
                     const std::vector<int>* update_order) {
  check_agents(topo, potentials.size(), state.x.size());
  const int n = topo.n_agents();
  const double rho = state.rho;
  const bool with_noise = noise != nullptr && state.noise_on;
  const std::vector<int> fallback = update_order ? std::vector<int>() : identity_order(n);
  const std::vector<int>& order = update_order ? *update_order : fallback;

  AdmmState next = state;
  next.k = state.k + 1;

  for (int idx : order) {
    const int i = idx;
    const int deg = topo.degree(i);
    if (deg == 0) {
      // Empty neighbor sum: the quadratic (and noise) term vanishes and the
      // primal update is argmin f_i(x) + p_i^T x.
      next.x[i] = potentials[i]->minimize_tilted(state.p[i]);
      continue;
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(state.x[i].size());
    for (int j : topo.neighbors(i)) v += state.x[i] + state.x[j];
    v /= 2.0 * deg;
    v -= state.p[i] / (2.0 * rho * deg);
    if (with_noise) v -= (std::numbers::sqrt2 / (2.0 * rho)) * noise->w[i];
    next.x[i] = potentials[i]->prox(1.0 / (2.0 * rho * deg), v);
  }

  for (int idx : order) {
    const int i = idx;
    Eigen::VectorXd disagreement = Eigen::VectorXd::Zero(state.p[i].size());
    for (int j : topo.neighbors(i)) disagreement += next.x[i] - next.x[j];
    next.p[i] = state.p[i] + rho * disagreement;
  }
  return next;
}

}  // namespace

AdmmState dadmms_step(const AdmmState& state, const Topology& topo,
                      const PotentialSet& potentials, const NoiseDraw& noise,
                      const std::vector<int>* update_order) {
  if (state.rho <= 0) throw std::invalid_argument("dadmms_step requires rho > 0");
  return admm_round(state, topo, potentials, &noise, update_order);
}

AdmmState cadmm_step(const AdmmState& state, const Topology& topo,
                     const PotentialSet& potentials,
                     const std::vector<int>* update_order) {
  if (state.rho <= 0) throw std::invalid_argument("cadmm_step requires rho > 0");
  return admm_round(state, topo, potentials, nullptr, update_order);
}

LangevinState dsgld_step(const LangevinState& state, const Eigen::MatrixXd& mixing,
                         const PotentialSet& potentials, double eta, const NoiseDraw& noise,
                         const std::vector<int>* update_order) {
  if (eta <= 0) throw std::invalid_argument("dsgld_step requires eta > 0");
  const int n = static_cast<int>(state.x.size());
  const std::vector<int> fallback = update_order ? std::vector<int>() : identity_order(n);
  const std::vector<int>& order = update_order ? *update_order : fallback;

  LangevinState next = state;
  next.k = state.k + 1;
  for (int i : order) {
    Eigen::VectorXd mixed = Eigen::VectorXd::Zero(state.x[i].size());
    for (int j = 0; j < n; ++j)
      if (mixing(i, j) != 0.0) mixed += mixing(i, j) * state.x[j];
    next.x[i] = mixed - eta * potentials[i]->grad(state.x[i]) +
                std::sqrt(2.0 * eta) * noise.w[i];
  }
  return next;
}

LangevinState dsghmc_step(const LangevinState& state, const Eigen::MatrixXd& mixing,
                          const PotentialSet& potentials, double eta, double friction,
                          const NoiseDraw& noise, const std::vector<int>* update_order) {
  if (eta <= 0) throw std::invalid_argument("dsghmc_step requires eta > 0");
  const int n = static_cast<int>(state.x.size());
  const std::vector<int> fallback = update_order ? std::vector<int>() : identity_order(n);
  const std::vector<int>& order = update_order ? *update_order : fallback;

  LangevinState next = state;
  next.k = state.k + 1;
  for (int i : order) {
    next.v[i] = state.v[i] -
                eta * (friction * state.v[i] + potentials[i]->grad(state.x[i])) +
                std::sqrt(2.0 * friction * eta) * noise.w[i];
    Eigen::VectorXd mixed = Eigen::VectorXd::Zero(state.x[i].size());
    for (int j = 0; j < n; ++j)
      if (mixing(i, j) != 0.0) mixed += mixing(i, j) * state.x[j];
    next.x[i] = mixed + eta * next.v[i];
  }
  return next;
}

LangevinState dula_step(const LangevinState& state, const Topology& topo,
                        const PotentialSet& potentials, const DulaSchedule& sched,
                        const NoiseDraw& noise, const std::vector<int>* update_order) {
  const int n = topo.n_agents();
  check_agents(topo, potentials.size(), state.x.size());
  const double alpha = sched.alpha(state.k);
  const double zeta = sched.zeta(state.k);
  if (alpha <= 0 || zeta <= 0)
    throw std::invalid_argument("dula_step requires positive schedules");
  const std::vector<int> fallback = update_order ? std::vector<int>() : identity_order(n);
  const std::vector<int>& order = update_order ? *update_order : fallback;
  const double noise_scale = std::sqrt(2.0 * alpha) * std::sqrt(static_cast<double>(n));

  LangevinState next = state;
  next.k = state.k + 1;
  for (int i : order) {
    Eigen::VectorXd laplacian = Eigen::VectorXd::Zero(state.x[i].size());
    for (int j : topo.neighbors(i)) laplacian += state.x[i] - state.x[j];
    next.x[i] = state.x[i] - zeta * laplacian -
                alpha * n * potentials[i]->grad(state.x[i]) + noise_scale * noise.w[i];
  }
  return next;
}

ChainHistory run_chain(const AlgorithmParams& params, const PotentialSet& potentials,
                       const Topology& topo, long n_iters, long thin,
                       std::uint64_t trial_seed) {
  const int n = topo.n_agents();
  if (potentials.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("run_chain: potential count must match agent count");
  if (n_iters < 0 || thin < 1) throw std::invalid_argument("run_chain: bad iteration spec");
  const int d = potentials.empty() ? 0 : potentials.front()->dim();

  // Every algorithm draws from its own substreams: comparisons across
  // algorithms are over independent randomness.
  const std::string algo = to_string(params.algo);
  RngStream init_rng(trial_seed, "init/" + algo);
  RngStream noise_rng(trial_seed, "noise/" + algo);

  std::vector<Eigen::VectorXd> x0;
  x0.reserve(n);
  for (int i = 0; i < n; ++i) x0.push_back(init_rng.normal_vector(d));

  ChainHistory history;
  auto record = [&](long k, const std::vector<Eigen::VectorXd>& x) {
    if (k == 0 || k == n_iters || k % thin == 0) {
      history.iterations.push_back(k);
      history.states.push_back(x);
    }
  };

  const bool admm_family = params.algo == Algorithm::dadmms || params.algo == Algorithm::admm;
  if (admm_family) {
    AdmmState state;
    state.x = x0;
    state.p.assign(n, Eigen::VectorXd::Zero(d));
    state.rho = params.rho;
    state.noise_on = params.algo == Algorithm::dadmms;
    record(0, state.x);
    for (long k = 0; k < n_iters; ++k) {
      if (state.noise_on) {
        const NoiseDraw noise = draw_noise(noise_rng, n, d);
        state = dadmms_step(state, topo, potentials, noise);
      } else {
        state = cadmm_step(state, topo, potentials);
      }
      record(state.k, state.x);
    }
    return history;
  }

  LangevinState state;
  state.x = x0;
  state.v.assign(n, Eigen::VectorXd::Zero(d));
  record(0, state.x);
  Eigen::MatrixXd mixing;
  if (params.algo == Algorithm::dsgld || params.algo == Algorithm::dsghmc)
    mixing = mixing_matrix(topo);
  for (long k = 0; k < n_iters; ++k) {
    const NoiseDraw noise = draw_noise(noise_rng, n, d);
    switch (params.algo) {
      case Algorithm::dsgld:
        state = dsgld_step(state, mixing, potentials, params.eta, noise);
        break;
      case Algorithm::dsghmc:
        state = dsghmc_step(state, mixing, potentials, params.eta, params.friction, noise);
        break;
      case Algorithm::dula:
        state = dula_step(state, topo, potentials, params.dula, noise);
        break;
      default:
        throw std::logic_error("unreachable algorithm branch");
    }
    record(state.k, state.x);
  }
  return history;
}

}  // namespace dmcmc
