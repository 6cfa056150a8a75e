#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmcmc/config.hpp"
#include "dmcmc/experiment.hpp"
#include "dmcmc/io.hpp"
#include "dmcmc/selftest.hpp"
#include "dmcmc/theory.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  std::optional<long> iters;
  std::optional<std::string> out;
  std::optional<int> workers;
};

void apply(const Overrides& ov, dmcmc::RunSpec& run) {
  if (ov.seed) run.seed = *ov.seed;
  if (ov.trials) run.n_trials = *ov.trials;
  if (ov.iters) run.n_iters = *ov.iters;
  if (ov.out) run.out = *ov.out;
  if (ov.workers) run.workers = *ov.workers;
}

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--seed", ov.seed, "Root seed override");
  cmd->add_option("--trials", ov.trials, "Trial count override");
  cmd->add_option("--iters", ov.iters, "Iteration count override");
  cmd->add_option("--out", ov.out, "Output directory override");
  cmd->add_option("--workers", ov.workers, "Worker thread count override");
}

int cmd_run(const std::string& path, const Overrides& ov) {
  dmcmc::ConfigFile file = dmcmc::load_config(path);
  apply(ov, file.run);
  dmcmc::ExperimentConfig config = file.single_experiment();
  dmcmc::ExperimentOutput output = dmcmc::run_experiment(config);
  const dmcmc::RunManifest manifest = dmcmc::write_outputs(output, config);
  for (const auto& f : manifest.outputs) std::cout << "wrote " << f << "\n";
  std::printf("done: %s, %ld trials, %.2fs\n", manifest.algorithm_label.c_str(),
              config.run.n_trials, manifest.wall_clock_seconds);
  return 0;
}

int cmd_compare(const std::string& path, const Overrides& ov) {
  dmcmc::ConfigFile file = dmcmc::load_config(path);
  apply(ov, file.run);
  const std::vector<dmcmc::ExperimentConfig> configs = file.compare_experiments();
  dmcmc::ExperimentOutput output = dmcmc::compare_algorithms(configs);
  dmcmc::ExperimentConfig io_config = configs.front();
  const dmcmc::RunManifest manifest = dmcmc::write_outputs(output, io_config);
  for (const auto& f : manifest.outputs) std::cout << "wrote " << f << "\n";
  std::printf("done: compared {%s}, %.2fs\n", manifest.algorithm_label.c_str(),
              manifest.wall_clock_seconds);
  return 0;
}

struct TheoryReport {
  double tau_g = 0, tau_f = 0, m_f = 0, M_f = 0;
  double kappa = 0, rho = 0, dmax = 0, a = 0;
  bool satisfied = false;
  double margin = 0;
  std::optional<double> tau_f_threshold;
};

TheoryReport theory_report(const dmcmc::ConfigFile& file) {
  const auto topo = dmcmc::build_topology(file.topology.kind, file.topology.n_agents);
  const auto sc = dmcmc::spectral_constants(dmcmc::extend_matrices(topo, file.problem ? file.problem->d : 1));

  dmcmc::ConvexityConstants cc;
  if (file.theory.m_f && file.theory.M_f) {
    cc.m_f = *file.theory.m_f;
    cc.M_f = *file.theory.M_f;
  } else if (file.theory.m_f) {
    cc.m_f = cc.M_f = *file.theory.m_f;
  } else if (file.problem) {
    const dmcmc::Problem problem =
        dmcmc::generate_problem(*file.problem, topo.n_agents(), file.run.seed);
    cc = std::visit([](const auto& p) { return dmcmc::strong_convexity_constants(p); },
                    problem);
  } else {
    throw std::invalid_argument(
        "config error: theory needs [function] m_f (and M_f) or a [problem] section");
  }
  cc.tau_f = cc.M_f / cc.m_f;

  const auto tc = dmcmc::make_theory_constants(sc, cc, file.theory.kappa, file.theory.rho);
  const auto cond = dmcmc::sufficient_condition(cc.m_f, cc.tau_f, sc.tau_g);

  TheoryReport rep;
  rep.tau_g = sc.tau_g;
  rep.tau_f = cc.tau_f;
  rep.m_f = cc.m_f;
  rep.M_f = cc.M_f;
  rep.kappa = tc.kappa;
  rep.rho = tc.rho;
  rep.dmax = dmcmc::delta_max(cc.tau_f, sc.tau_g);
  rep.a = tc.a;
  rep.satisfied = cond.satisfied;
  rep.margin = cond.margin;
  rep.tau_f_threshold = dmcmc::tau_f_threshold(cc.m_f, sc.tau_g);
  return rep;
}

int cmd_theory(const std::string& path, bool json) {
  const dmcmc::ConfigFile file = dmcmc::load_config(path);
  const TheoryReport rep = theory_report(file);
  if (json) {
    nlohmann::json j;
    j["tau_g"] = rep.tau_g;
    j["tau_f"] = rep.tau_f;
    j["m_f"] = rep.m_f;
    j["M_f"] = rep.M_f;
    j["kappa_star"] = rep.kappa;
    j["rho_star"] = rep.rho;
    j["delta_max"] = rep.dmax;
    j["a"] = rep.a;
    j["sufficient_condition"] = rep.satisfied;
    j["margin"] = rep.margin;
    if (rep.tau_f_threshold)
      j["tau_f_threshold"] = *rep.tau_f_threshold;
    else
      j["tau_f_threshold"] = nullptr;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::printf("tau_G        %.6g\n", rep.tau_g);
  std::printf("tau_f        %.6g\n", rep.tau_f);
  std::printf("m_f          %.6g\n", rep.m_f);
  std::printf("M_f          %.6g\n", rep.M_f);
  std::printf("kappa*       %.6g\n", rep.kappa);
  std::printf("rho*         %.6g\n", rep.rho);
  std::printf("delta_max    %.6g\n", rep.dmax);
  std::printf("a            %.6g\n", rep.a);
  std::printf("sufficient   %s (margin %.6g)\n", rep.satisfied ? "yes" : "no", rep.margin);
  if (rep.tau_f_threshold)
    std::printf("threshold    tau_f < %.6g\n", *rep.tau_f_threshold);
  else
    std::printf("threshold    none (2 m_f <= tau_G^2)\n");
  return 0;
}

int cmd_verify_lemma1(const std::string& path, std::optional<long> iters,
                      std::optional<std::uint64_t> seed) {
  const dmcmc::ConfigFile file = dmcmc::load_config(path);
  if (!file.problem)
    throw std::invalid_argument("config error: verify lemma1 needs a [problem] section");
  const auto topo = dmcmc::build_topology(file.topology.kind, file.topology.n_agents);
  const dmcmc::Problem problem =
      dmcmc::generate_problem(*file.problem, topo.n_agents(), file.run.seed);
  const dmcmc::PotentialSet pots = dmcmc::problem_potentials(problem);
  double rho = 5.0;
  for (const auto& alg : file.algorithms)
    if (alg.params.algo == dmcmc::Algorithm::dadmms ||
        alg.params.algo == dmcmc::Algorithm::admm)
      rho = alg.params.rho;
  const long n = iters.value_or(50);
  const auto res = dmcmc::lemma1_equivalence(pots, topo, rho, n,
                                             seed.value_or(file.run.seed));
  std::printf("max |X_alg - X_lemma|   %.3e\n", res.max_x_deviation);
  std::printf("max |p - M- beta|       %.3e\n", res.max_p_deviation);
  std::printf("max beta colspace res   %.3e\n", res.max_beta_colspace_residual);
  const bool ok = res.max_x_deviation <= 1e-6 && res.max_p_deviation <= 1e-9 &&
                  res.max_beta_colspace_residual <= 1e-9;
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

int cmd_selftest() {
  const auto results = dmcmc::run_selftest();
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] %s%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.empty() ? "" : ": ", r.detail.c_str());
    if (!r.passed) ++failures;
  }
  std::printf("%zu checks, %d failures\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed MCMC sampling lab: consensus-ADMM sampler, gradient "
               "baselines, and convergence diagnostics"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  bool json = false;
  std::optional<long> iters;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("config", config_path, "Config file")->required();
  add_override_flags(run, ov);

  auto* compare =
      app.add_subcommand("compare", "Run a shared-dataset algorithm comparison");
  compare->add_option("config", config_path, "Config file")->required();
  add_override_flags(compare, ov);

  auto* theory = app.add_subcommand("theory", "Print convergence-theory constants");
  theory->add_option("config", config_path, "Config file")->required();
  theory->add_flag("--json", json, "Emit machine-readable JSON");

  auto* verify = app.add_subcommand("verify", "Verification procedures");
  verify->require_subcommand(1);
  auto* lemma1 = verify->add_subcommand(
      "lemma1", "Check the stacked-iterate equivalence with shared noise");
  lemma1->add_option("config", config_path, "Config file")->required();
  lemma1->add_option("--iters", iters, "Iteration count (default 50)");
  lemma1->add_option("--seed", seed, "Seed override");

  auto* selftest = app.add_subcommand("selftest", "Run the invariant suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, ov);
    if (*compare) return cmd_compare(config_path, ov);
    if (*theory) return cmd_theory(config_path, json);
    if (*lemma1) return cmd_verify_lemma1(config_path, iters, seed);
    if (*selftest) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
