// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dmcmc/config.hpp"
#include "dmcmc/experiment.hpp"
#include "dmcmc/metrics.hpp"
#include "dmcmc/problems.hpp"
#include "dmcmc/rng.hpp"
#include "dmcmc/samplers.hpp"
#include "dmcmc/selftest.hpp"
#include "dmcmc/theory.hpp"
#include "oracles.hpp"

using namespace dmcmc;

namespace {

struct Criterion {
  bool passed = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) {
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double series_value(const ConvergenceSeries& s, const std::string& metric, long iter,
                    const std::string& agent) {
  for (const auto& r : s.rows)
    if (r.iteration == iter && r.metric == metric && r.agent == agent) return r.value;
  throw std::runtime_error("series row not found: " + metric);
}

// ---------------------------------------------------------------------------

Criterion spectral_reproduction() {
  Criterion c;
  const auto ring = spectral_constants(
      extend_matrices(build_topology(TopologyKind::ring_cyclic, 5), 1));
  const auto full = spectral_constants(
      extend_matrices(build_topology(TopologyKind::fully_connected, 5), 1));
  c.require(std::abs(ring.tau_g - 1.70) <= 0.01,
            "tau_G(ring-5) = " + fmt(ring.tau_g) + " not within 1.70 +- 0.01");
  c.require(std::abs(full.tau_g - 1.26) <= 0.01,
            "tau_G(complete-5) = " + fmt(full.tau_g) + " not within 1.26 +- 0.01");
  c.note("tau_G ring=" + fmt(ring.tau_g) + " complete=" + fmt(full.tau_g));
  return c;
}

Criterion condition_thresholds() {
  Criterion c;
  const auto ring = spectral_constants(
      extend_matrices(build_topology(TopologyKind::ring_cyclic, 5), 1));
  const auto full = spectral_constants(
      extend_matrices(build_topology(TopologyKind::fully_connected, 5), 1));
  const auto thr_ring = tau_f_threshold(2.0, ring.tau_g);
  const auto thr_full = tau_f_threshold(2.0, full.tau_g);
  c.require(thr_ring.has_value() && std::abs(*thr_ring - 1.23) <= 0.01,
            "ring-5 flip point " + (thr_ring ? fmt(*thr_ring) : "none") +
                " not within 1.23 +- 0.01");
  c.require(thr_full.has_value() && std::abs(*thr_full - std::sqrt(6.0)) <= 0.01,
            "complete-5 flip point " + (thr_full ? fmt(*thr_full) : "none") +
                " not within sqrt(6) +- 0.01");
  // The predicate itself flips across the threshold.
  c.require(sufficient_condition(2.0, 1.2, ring.tau_g).satisfied &&
                !sufficient_condition(2.0, 1.25, ring.tau_g).satisfied,
            "ring-5 predicate does not flip between 1.2 and 1.25");
  if (thr_ring && thr_full)
    c.note("thresholds ring=" + fmt(*thr_ring) + " complete=" + fmt(*thr_full));
  return c;
}

Criterion lemma1() {
  Criterion c;
  const auto topo = build_topology(TopologyKind::ring_cyclic, 5);
  const auto problem = LinRegProblem::generate(2, 4.0, 10.0, 5, 50, 1);
  const auto res = lemma1_equivalence(problem.potentials(), topo, 5.0, 50, 1, true);
  c.require(res.max_x_deviation <= 1e-6,
            "iterate deviation " + fmt(res.max_x_deviation) + " > 1e-6");
  c.require(res.max_p_deviation <= 1e-9,
            "dual deviation " + fmt(res.max_p_deviation) + " > 1e-9");
  c.note("max|dX|=" + fmt(res.max_x_deviation) + " max|dp|=" + fmt(res.max_p_deviation));
  return c;
}

Criterion no_edge_identity() {
  Criterion c;
  const auto topo = build_topology(TopologyKind::no_edge, 5);
  const auto linreg = LinRegProblem::generate(2, 4.0, 10.0, 5, 50, 1);
  const auto logreg = LogRegProblem::generate(3, 10.0, 5, 50, 1);
  RngStream rng(1, "acceptance-noedge");

  auto worst_gap = [&](const PotentialSet& pots, int d) {
    AdmmState noisy, clean;
    noisy.rho = clean.rho = 5.0;
    noisy.noise_on = true;
    clean.noise_on = false;
    for (int i = 0; i < 5; ++i) {
      noisy.x.push_back(rng.normal_vector(d));
      noisy.p.push_back(Eigen::VectorXd::Zero(d));
    }
    clean.x = noisy.x;
    clean.p = noisy.p;
    double worst = 0.0;
    for (int k = 0; k < 30; ++k) {
      noisy = dadmms_step(noisy, topo, pots, draw_noise(rng, 5, d));
      clean = cadmm_step(clean, topo, pots);
      for (int i = 0; i < 5; ++i)
        worst = std::max(worst, (noisy.x[i] - clean.x[i]).lpNorm<Eigen::Infinity>());
    }
    return worst;
  };
  const double lin_gap = worst_gap(linreg.potentials(), 2);
  const double log_gap = worst_gap(logreg.potentials(), 3);
  c.require(lin_gap <= 1e-8, "linreg gap " + fmt(lin_gap) + " > 1e-8");
  c.require(log_gap <= 1e-8, "logreg gap " + fmt(log_gap) + " > 1e-8");
  c.note("gaps linreg=" + fmt(lin_gap) + " logreg=" + fmt(log_gap));
  return c;
}

Criterion optimizer_correctness() {
  Criterion c;
  const auto problem = LinRegProblem::generate(2, 4.0, 10.0, 5, 50, 1);
  const auto pots = problem.potentials();
  const Eigen::VectorXd x_star = centralized_minimizer(pots);
  for (const auto kind : {TopologyKind::ring_cyclic, TopologyKind::fully_connected}) {
    const auto topo = build_topology(kind, 5);
    RngStream rng(1, "acceptance-cadmm");
    AdmmState state;
    state.rho = 5.0;
    state.noise_on = false;
    for (int i = 0; i < 5; ++i) {
      state.x.push_back(rng.normal_vector(2));
      state.p.push_back(Eigen::VectorXd::Zero(2));
    }
    for (int k = 0; k < 500; ++k) state = cadmm_step(state, topo, pots);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
      worst = std::max(worst, (state.x[i] - x_star).norm());
    c.require(worst <= 1e-6, to_string(kind) + " error " + fmt(worst) + " > 1e-6");
    c.note(to_string(kind) + " err=" + fmt(worst));
  }
  return c;
}

Criterion wasserstein_oracle() {
  Criterion c;
  RngStream rng(6, "acceptance-w2");
  double worst_diag = 0.0, worst_quad = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 3;
    GaussianSummary a, b;
    a.mean = rng.normal_vector(d);
    b.mean = rng.normal_vector(d);
    Eigen::VectorXd va(d), vb(d);
    for (int r = 0; r < d; ++r) {
      va[r] = 0.2 + 2.0 * rng.uniform();
      vb[r] = 0.2 + 2.0 * rng.uniform();
    }
    a.covariance = va.asDiagonal();
    b.covariance = vb.asDiagonal();
    const double got = wasserstein2_gaussian(a, b);

    double analytic_sq = (a.mean - b.mean).squaredNorm();
    for (int r = 0; r < d; ++r)
      analytic_sq += std::pow(std::sqrt(va[r]) - std::sqrt(vb[r]), 2);
    worst_diag = std::max(worst_diag, std::abs(got - std::sqrt(analytic_sq)));

    double quad_sq = 0.0;
    for (int r = 0; r < d; ++r) {
      const double w1 =
          oracles::w2_gaussian_1d_quadrature(a.mean[r], va[r], b.mean[r], vb[r], 100000);
      quad_sq += w1 * w1;
    }
    worst_quad = std::max(worst_quad, std::abs(got - std::sqrt(quad_sq)));
  }
  c.require(worst_diag <= 1e-3, "diagonal closed-form gap " + fmt(worst_diag) + " > 1e-3");
  c.require(worst_quad <= 1e-3, "quadrature oracle gap " + fmt(worst_quad) + " > 1e-3");

  // Metric axioms on random PSD pairs/triples.
  auto random_summary = [&](int d) {
    GaussianSummary s;
    s.mean = rng.normal_vector(d);
    Eigen::MatrixXd m(d, d);
    for (int r = 0; r < d; ++r)
      for (int cc2 = 0; cc2 < d; ++cc2) m(r, cc2) = rng.normal();
    s.covariance = m * m.transpose() + 0.05 * Eigen::MatrixXd::Identity(d, d);
    return s;
  };
  double worst_sym = 0.0, worst_tri = 0.0, worst_id = 0.0;
  bool nonneg = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + trial % 3;
    const auto a = random_summary(d), b = random_summary(d), e = random_summary(d);
    const double ab = wasserstein2_gaussian(a, b);
    nonneg = nonneg && ab >= 0.0;
    worst_sym = std::max(worst_sym, std::abs(ab - wasserstein2_gaussian(b, a)));
    worst_id = std::max(worst_id, wasserstein2_gaussian(a, a));
    worst_tri = std::max(worst_tri, ab - (wasserstein2_gaussian(a, e) +
                                          wasserstein2_gaussian(e, b)));
  }
  c.require(nonneg, "negative distance");
  c.require(worst_sym <= 1e-8, "symmetry gap " + fmt(worst_sym) + " > 1e-8");
  c.require(worst_tri <= 1e-8, "triangle slack " + fmt(worst_tri) + " > 1e-8");
  c.require(worst_id <= 1e-6, "identity gap " + fmt(worst_id) + " > 1e-6");
  c.note("diag=" + fmt(worst_diag) + " quad=" + fmt(worst_quad));
  return c;
}

Criterion posterior_oracle() {
  Criterion c;
  double worst_mean = 0.0, worst_var = 0.0;
  for (std::uint64_t seed : {3ull, 4ull, 5ull}) {
    const auto toy = LinRegProblem::generate(1, 2.0, 5.0, 2, 8, seed);
    const auto post = linreg_true_posterior(toy);
    const auto log_density = [&](double x) {
      double ll = -x * x / (2.0 * 5.0);
      for (const auto& agent : toy.data())
        for (Eigen::Index l = 0; l < agent.y.size(); ++l) {
          const double r = agent.y[l] - x * agent.z(l, 0);
          ll -= r * r / (2.0 * 2.0 * 2.0);
        }
      return ll;
    };
    const auto grid = oracles::grid_posterior_1d(log_density, -20.0, 20.0);
    worst_mean = std::max(worst_mean, std::abs(grid.mean - post.mean[0]));
    worst_var = std::max(worst_var, std::abs(grid.variance - post.covariance(0, 0)));
  }
  c.require(worst_mean <= 1e-4, "mean gap " + fmt(worst_mean) + " > 1e-4");
  c.require(worst_var <= 1e-4, "variance gap " + fmt(worst_var) + " > 1e-4");
  c.note("mean gap=" + fmt(worst_mean) + " var gap=" + fmt(worst_var));
  return c;
}

std::vector<ExperimentConfig> five_way_configs(ProblemKind kind, long n_iters,
                                               std::uint64_t seed) {
  const bool lin = kind == ProblemKind::linreg;
  std::vector<std::pair<std::string, AlgorithmParams>> algos = {
      {"dadmms", {Algorithm::dadmms, 5.0, 0, 0, {}}},
      {"admm", {Algorithm::admm, 5.0, 0, 0, {}}},
      {"dsgld", {Algorithm::dsgld, 0, lin ? 0.009 : 0.0003, 0, {}}},
      {"dsghmc", {Algorithm::dsghmc, 0, lin ? 0.1 : 0.02, lin ? 7.0 : 30.0, {}}},
      {"dula", {Algorithm::dula, 0, 0, 0, DulaSchedule{0.05, 0.05}}}};
  std::vector<ExperimentConfig> configs;
  for (auto& [label, params] : algos) {
    ExperimentConfig c;
    c.problem.kind = kind;
    c.problem.d = lin ? 2 : 3;
    c.problem.xi = 4.0;
    c.problem.lambda = 10.0;
    c.problem.n_per_agent = 50;
    c.topology = {TopologyKind::ring_cyclic, 5};
    c.algorithm = {label, params};
    c.run.n_trials = 100;
    c.run.n_iters = n_iters;
    c.run.seed = seed;
    configs.push_back(c);
  }
  return configs;
}

Criterion linreg_convergence_comparison() {
  Criterion c;
  const auto out = compare_algorithms(five_way_configs(ProblemKind::linreg, 30, 1));
  const double w0 = series_value(out.series, "dadmms/w2", 0, "0");
  const double w25 = series_value(out.series, "dadmms/w2", 25, "0");
  c.require(w25 <= 0.5 * w0, "W2 at 25 (" + fmt(w25) + ") not <= half of initial (" +
                                 fmt(w0) + ")");
  const double da20 = series_value(out.series, "dadmms/w2", 20, "0");
  for (const char* alg : {"dsgld", "dsghmc", "dula"}) {
    const double other = series_value(out.series, std::string(alg) + "/w2", 20, "0");
    c.require(da20 < other, std::string("dadmms W2@20 (") + fmt(da20) +
                                ") not below " + alg + " (" + fmt(other) + ")");
  }
  c.note("W2: k0=" + fmt(w0) + " k20=" + fmt(da20) + " k25=" + fmt(w25));
  return c;
}

Criterion logreg_accuracy_comparison() {
  Criterion c;
  const auto out = compare_algorithms(five_way_configs(ProblemKind::logreg, 50, 1));
  const double da = series_value(out.series, "dadmms/accuracy_mean", 50, "0");
  const double admm = series_value(out.series, "admm/accuracy_mean", 50, "0");
  c.require(std::abs(da - admm) <= 0.02, "dadmms accuracy " + fmt(da) +
                                             " not within 0.02 of admm " + fmt(admm));
  for (const char* alg : {"dsgld", "dsghmc", "dula"}) {
    const double other =
        series_value(out.series, std::string(alg) + "/accuracy_mean", 50, "0");
    c.require(da > other, std::string("dadmms accuracy (") + fmt(da) +
                              ") does not exceed " + alg + " (" + fmt(other) + ")");
  }
  c.note("acc@50 dadmms=" + fmt(da) + " admm=" + fmt(admm));
  return c;
}

Criterion bound_containment() {
  Criterion c;
  // Crafted isotropic instance: each agent holds two orthogonal points with
  // sum z z' = 2.48 I, so H_i = 2.5 I exactly and tau_f = 1; the convergence
  // condition then holds on the 5-ring with margin.
  const int n = 5, d = 2;
  std::vector<AgentData> data(n);
  const double scale = std::sqrt(2.48);
  for (auto& agent : data) {
    agent.z.resize(2, d);
    agent.z << scale, 0.0, 0.0, scale;
    agent.y.resize(2);
    agent.y << 1.0, -1.0;
  }
  const auto problem =
      LinRegProblem::from_data(d, 1.0, 10.0, data, Eigen::VectorXd::Zero(d));
  const auto pots = problem.potentials();
  const auto topo = build_topology(TopologyKind::ring_cyclic, n);
  const auto mats = extend_matrices(topo, d);
  const auto sc = spectral_constants(mats);
  const auto cc = strong_convexity_constants(problem);

  const auto cond = sufficient_condition(cc.m_f, cc.tau_f, sc.tau_g);
  c.require(cond.satisfied, "sufficient condition not satisfied on the crafted instance");

  const auto tc = make_theory_constants(sc, cc);
  c.require(tc.a < 1.0, "contraction factor a = " + fmt(tc.a) + " >= 1");

  // 100 trials of the sampler at rho = rho*(kappa*).
  ExperimentConfig config;
  config.problem = {ProblemKind::linreg, d, 1.0, 10.0, 2, {}};
  config.topology = {TopologyKind::ring_cyclic, n};
  config.algorithm = {"dadmms", AlgorithmParams{Algorithm::dadmms, tc.rho, 0, 0, {}}};
  config.run.n_trials = 100;
  config.run.n_iters = 60;
  config.run.seed = 1;
  const long n_iters = config.run.n_iters;
  std::vector<std::uint64_t> seeds(config.run.n_trials);
  for (long t = 0; t < config.run.n_trials; ++t)
    seeds[t] = derive_trial_seed(config.run.seed, static_cast<std::uint64_t>(t));
  std::vector<ChainHistory> histories(config.run.n_trials);
  for (long t = 0; t < config.run.n_trials; ++t)
    histories[t] = run_chain(config.algorithm.params, pots, topo, n_iters, 1, seeds[t]);

  // Measured initial graph distance and the bound trajectory.
  std::vector<std::vector<Eigen::VectorXd>> inits;
  inits.reserve(histories.size());
  for (const auto& h : histories) inits.push_back(h.states.front());
  const Eigen::VectorXd x_star = centralized_minimizer(pots);
  const double w0 = measured_initial_wg(mats, pots, tc.rho, inits, x_star);
  const auto posterior = linreg_true_posterior(problem);
  const auto bound =
      bound_trajectory(tc, topo, d, n_iters, w0, 100000, 7, posterior, x_star);

  const auto series = wasserstein_series(histories, posterior);
  double worst_ratio = 0.0;
  bool contained = true;
  for (long k = 1; k <= n_iters; ++k) {
    const double limit = bound.values[k - 1];
    for (int i = 0; i < n; ++i) {
      const double measured = series_value(series, "w2", k, std::to_string(i));
      worst_ratio = std::max(worst_ratio, measured / limit);
      if (measured > limit) contained = false;
    }
  }
  c.require(contained, "measured W2 exceeded the bound");
  c.note("a=" + fmt(tc.a) + " w0=" + fmt(w0) + " floor=" + fmt(bound.constant_floor) +
         " worst measured/bound=" + fmt(worst_ratio));
  return c;
}

Criterion property_suites() {
  Criterion c;
  int failures = 0;
  for (const auto& r : run_selftest()) {
    if (!r.passed) {
      ++failures;
      c.require(false, r.name + " failed (" + r.detail + ")");
    }
  }
  if (failures == 0) c.note("all selftest checks green");
  return c;
}

}  // namespace

int main() {
  struct Entry {
    int number;
    const char* name;
    double budget_seconds;
    std::function<Criterion()> run;
  };
  const std::vector<Entry> entries = {
      {1, "spectral reproduction (tau_G ring-5 / complete-5)", 1, spectral_reproduction},
      {2, "sufficient-condition thresholds at m_f = 2", 1, condition_thresholds},
      {3, "stacked-iterate equivalence (shared noise)", 10, lemma1},
      {4, "no-edge sampler/optimizer identity", 10, no_edge_identity},
      {5, "consensus-ADMM optimizer correctness", 10, optimizer_correctness},
      {6, "Gaussian Wasserstein oracle and metric axioms", 30, wasserstein_oracle},
      {7, "closed-form posterior vs grid quadrature", 10, posterior_oracle},
      {8, "linreg ring-5 convergence comparison", 300, linreg_convergence_comparison},
      {9, "logreg ring-5 accuracy comparison", 600, logreg_accuracy_comparison},
      {10, "theory-bound containment", 300, bound_containment},
      {11, "module property suites (selftest)", 120, property_suites},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    const auto start = std::chrono::steady_clock::now();
    Criterion result;
    try {
      result = entry.run();
    } catch (const std::exception& e) {
      result.passed = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > entry.budget_seconds) {
      result.passed = false;
      result.detail += (result.detail.empty() ? "" : "; ") + std::string("over budget: ") +
                       fmt(elapsed) + "s > " + fmt(entry.budget_seconds) + "s";
    }
    std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n",
                result.passed ? "PASS" : "FAIL", entry.number, entry.name, elapsed,
                result.detail.empty() ? "" : " -- ", result.detail.c_str());
    std::fflush(stdout);
    if (!result.passed) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failures,
              entries.size());
  return failures == 0 ? 0 : 1;
}
