#include "dmcmc/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "dmcmc/config.hpp"
#include "dmcmc/experiment.hpp"
#include "dmcmc/io.hpp"
#include "dmcmc/metrics.hpp"
#include "dmcmc/problems.hpp"
#include "dmcmc/rng.hpp"
#include "dmcmc/samplers.hpp"
#include "dmcmc/theory.hpp"

namespace dmcmc {

Topology random_connected_topology(int n_agents, int extra_edges, std::uint64_t seed) {
  RngStream rng(seed, "random-topology");
  std::vector<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> seen;
  for (int i = 1; i < n_agents; ++i) {
    const int j = static_cast<int>(rng.uniform() * i);
    edges.emplace_back(std::min(i, j), std::max(i, j));
    seen.insert(edges.back());
  }
  for (int e = 0; e < extra_edges; ++e) {
    const int i = static_cast<int>(rng.uniform() * n_agents);
    const int j = static_cast<int>(rng.uniform() * n_agents);
    if (i == j) continue;
    const auto edge = std::make_pair(std::min(i, j), std::max(i, j));
    if (seen.insert(edge).second) edges.push_back(edge);
  }
  return Topology::custom(n_agents, std::move(edges));
}

namespace {

struct Reporter {
  std::vector<CheckResult> results;

  void check(const std::string& name, bool pass, const std::string& detail = "") {
    results.push_back({name, pass, detail});
  }

  template <typename Fn>
  void guarded(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("exception: ") + e.what()});
    }
  }
};

std::string fmt(double v) { return format_double(v); }

void graph_checks(Reporter& rep, std::uint64_t seed) {
  rep.guarded("graph.matrix_identities", [&] {
    double worst = 0.0;
    std::vector<Topology> topos = {build_topology(TopologyKind::fully_connected, 5),
                                   build_topology(TopologyKind::ring_cyclic, 5),
                                   build_topology(TopologyKind::no_edge, 4),
                                   random_connected_topology(7, 4, seed)};
    for (const auto& topo : topos) {
      for (int d = 1; d <= 3; ++d) {
        const auto mats = extend_matrices(topo, d);
        worst = std::max(worst, (mats.l_plus - 0.5 * mats.m_plus * mats.m_plus.transpose())
                                    .cwiseAbs()
                                    .maxCoeff());
        worst = std::max(worst, (mats.l_minus - 0.5 * mats.m_minus * mats.m_minus.transpose())
                                    .cwiseAbs()
                                    .maxCoeff());
        worst = std::max(
            worst,
            (mats.deg - 0.5 * (mats.l_plus + mats.l_minus)).cwiseAbs().maxCoeff());
      }
    }
    rep.check("graph.matrix_identities", worst == 0.0, "max deviation " + fmt(worst));
  });

  rep.guarded("graph.consensus_nullspace", [&] {
    RngStream rng(seed, "consensus");
    double worst = 0.0;
    for (int d = 1; d <= 3; ++d) {
      const auto topo = random_connected_topology(6, 3, seed + d);
      const auto mats = extend_matrices(topo, d);
      const Eigen::VectorXd x = rng.normal_vector(d);
      Eigen::VectorXd stacked(topo.n_agents() * d);
      for (int i = 0; i < topo.n_agents(); ++i) stacked.segment(i * d, d) = x;
      worst = std::max(worst,
                       (mats.m_minus.transpose() * stacked).cwiseAbs().maxCoeff());
    }
    rep.check("graph.consensus_nullspace", worst <= 1e-12, "max residual " + fmt(worst));
  });

  rep.guarded("graph.tau_g_two_routes", [&] {
    double worst = 0.0;
    std::vector<Topology> topos = {build_topology(TopologyKind::ring_cyclic, 5),
                                   build_topology(TopologyKind::fully_connected, 5),
                                   random_connected_topology(9, 5, seed + 17)};
    for (const auto& topo : topos) {
      const auto mats = extend_matrices(topo, 2);
      const auto sc = spectral_constants(mats);
      // Independent route: singular values of the incidence matrices.
      Eigen::BDCSVD<Eigen::MatrixXd> svd_plus(mats.m_plus);
      Eigen::BDCSVD<Eigen::MatrixXd> svd_minus(mats.m_minus);
      const double smax_p = svd_plus.singularValues().maxCoeff();
      double smin_m = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < svd_minus.singularValues().size(); ++i) {
        const double s = svd_minus.singularValues()[i];
        if (s > 1e-7) smin_m = std::min(smin_m, s);
      }
      const double tau_svd = smax_p / smin_m;
      worst = std::max(worst, std::abs(tau_svd - sc.tau_g) / sc.tau_g);
    }
    rep.check("graph.tau_g_two_routes", worst <= 1e-9, "max rel diff " + fmt(worst));
  });

  rep.guarded("graph.mixing_doubly_stochastic", [&] {
    bool ok = true;
    std::ostringstream detail;
    std::vector<Topology> topos = {build_topology(TopologyKind::fully_connected, 6),
                                   build_topology(TopologyKind::ring_cyclic, 7),
                                   build_topology(TopologyKind::no_edge, 4),
                                   random_connected_topology(8, 6, seed + 3)};
    for (const auto& topo : topos) {
      const Eigen::MatrixXd s = mixing_matrix(topo);
      ok = ok && (s - s.transpose()).cwiseAbs().maxCoeff() == 0.0;
      ok = ok && s.minCoeff() >= 0.0;
      for (int i = 0; i < topo.n_agents(); ++i) {
        ok = ok && std::abs(s.row(i).sum() - 1.0) <= 1e-12;
        ok = ok && std::abs(s.col(i).sum() - 1.0) <= 1e-12;
        for (int j = 0; j < topo.n_agents(); ++j) {
          const bool neighbor = std::binary_search(topo.neighbors(i).begin(),
                                                   topo.neighbors(i).end(), j);
          if (i != j) ok = ok && ((s(i, j) > 0) == neighbor);
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
      const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
      ok = ok && std::abs(radius - 1.0) <= 1e-12;
    }
    rep.check("graph.mixing_doubly_stochastic", ok);
  });
}

void problems_checks(Reporter& rep, std::uint64_t seed) {
  const auto linreg = LinRegProblem::generate(2, 4.0, 10.0, 5, 50, seed);
  const auto logreg = LogRegProblem::generate(3, 10.0, 5, 50, seed);

  rep.guarded("problems.gradient_fd", [&] {
    RngStream rng(seed, "grad-fd");
    const double h = 1e-5;
    double worst = 0.0;
    auto check_potential = [&](const LocalPotential& pot, double scale) {
      for (int trial = 0; trial < 50; ++trial) {
        const Eigen::VectorXd x = scale * rng.normal_vector(pot.dim());
        const Eigen::VectorXd g = pot.grad(x);
        for (int r = 0; r < pot.dim(); ++r) {
          Eigen::VectorXd e = Eigen::VectorXd::Zero(pot.dim());
          e[r] = h;
          const double fd = (pot.value(x + e) - pot.value(x - e)) / (2.0 * h);
          worst = std::max(worst, std::abs(fd - g[r]) / std::max(1.0, std::abs(g[r])));
        }
      }
    };
    for (int i = 0; i < linreg.n_agents(); ++i) check_potential(linreg.potential(i), 1.0);
    for (int i = 0; i < logreg.n_agents(); ++i) check_potential(logreg.potential(i), 0.3);
    rep.check("problems.gradient_fd", worst <= 1e-5, "max rel err " + fmt(worst));
  });

  rep.guarded("problems.hessian_fd", [&] {
    RngStream rng(seed, "hess-fd");
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < logreg.n_agents(); ++i) {
      const auto& pot = logreg.potential(i);
      for (int trial = 0; trial < 20; ++trial) {
        const Eigen::VectorXd x = 0.3 * rng.normal_vector(pot.dim());
        const Eigen::MatrixXd hess = pot.hess(x);
        for (int r = 0; r < pot.dim(); ++r) {
          Eigen::VectorXd e = Eigen::VectorXd::Zero(pot.dim());
          e[r] = h;
          const Eigen::VectorXd fd = (pot.grad(x + e) - pot.grad(x - e)) / (2.0 * h);
          for (int cidx = 0; cidx < pot.dim(); ++cidx)
            worst = std::max(worst, std::abs(fd[cidx] - hess(cidx, r)) /
                                        std::max(1.0, std::abs(hess(cidx, r))));
        }
      }
    }
    rep.check("problems.hessian_fd", worst <= 1e-4, "max rel err " + fmt(worst));
  });

  rep.guarded("problems.strong_convexity_and_lipschitz", [&] {
    RngStream rng(seed, "convexity");
    const auto lin_cc = strong_convexity_constants(linreg);
    const auto log_cc = strong_convexity_constants(logreg);
    bool ok = true;
    for (int pair = 0; pair < 1000; ++pair) {
      {
        const int i = pair % linreg.n_agents();
        const auto& pot = linreg.potential(i);
        const Eigen::VectorXd a = rng.normal_vector(2), b = rng.normal_vector(2);
        const Eigen::VectorXd dg = pot.grad(a) - pot.grad(b);
        const double dist_sq = (a - b).squaredNorm();
        ok = ok && dg.dot(a - b) >= lin_cc.m_f * dist_sq * (1.0 - 1e-9);
        ok = ok && dg.norm() <= lin_cc.M_f * std::sqrt(dist_sq) * (1.0 + 1e-9);
      }
      {
        const int i = pair % logreg.n_agents();
        const auto& pot = logreg.potential(i);
        const Eigen::VectorXd a = 0.5 * rng.normal_vector(3), b = 0.5 * rng.normal_vector(3);
        const Eigen::VectorXd dg = pot.grad(a) - pot.grad(b);
        const double dist_sq = (a - b).squaredNorm();
        ok = ok && dg.dot(a - b) >= log_cc.m_f * dist_sq * (1.0 - 1e-9);
        ok = ok && dg.norm() <= log_cc.M_f * std::sqrt(dist_sq) * (1.0 + 1e-9);
      }
    }
    rep.check("problems.strong_convexity_and_lipschitz", ok);
  });

  rep.guarded("problems.map_equals_posterior_mean", [&] {
    const Eigen::VectorXd x_star = centralized_minimizer(linreg.potentials());
    const auto post = linreg_true_posterior(linreg);
    const double err = (x_star - post.mean).norm();
    rep.check("problems.map_equals_posterior_mean", err <= 1e-8, "deviation " + fmt(err));
  });

  rep.guarded("problems.prox_optimality", [&] {
    RngStream rng(seed, "prox");
    double worst = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
      const double gamma = 0.05 + rng.uniform();
      {
        const Eigen::VectorXd v = rng.normal_vector(2);
        const auto& pot = linreg.potential(trial % linreg.n_agents());
        const Eigen::VectorXd x = pot.prox(gamma, v);
        worst = std::max(worst, (pot.grad(x) + (x - v) / gamma).norm());
      }
      {
        const Eigen::VectorXd v = 0.5 * rng.normal_vector(3);
        const auto& pot = logreg.potential(trial % logreg.n_agents());
        const Eigen::VectorXd x = pot.prox(gamma, v);
        worst = std::max(worst, (pot.grad(x) + (x - v) / gamma).norm());
      }
    }
    rep.check("problems.prox_optimality", worst <= 1e-9, "max residual " + fmt(worst));
  });
}

void samplers_checks(Reporter& rep, std::uint64_t seed) {
  const auto topo = build_topology(TopologyKind::ring_cyclic, 5);
  const auto linreg = LinRegProblem::generate(2, 4.0, 10.0, 5, 50, seed);
  const auto pots = linreg.potentials();

  rep.guarded("samplers.sync_round_permutation", [&] {
    RngStream rng(seed, "perm");
    const std::vector<int> permuted = {3, 0, 4, 1, 2};
    const Eigen::MatrixXd mixing = mixing_matrix(topo);
    bool ok = true;

    AdmmState admm;
    admm.rho = 5.0;
    LangevinState lang;
    for (int i = 0; i < 5; ++i) {
      admm.x.push_back(rng.normal_vector(2));
      admm.p.push_back(rng.normal_vector(2));
      lang.x.push_back(rng.normal_vector(2));
      lang.v.push_back(rng.normal_vector(2));
    }
    const NoiseDraw noise = draw_noise(rng, 5, 2);

    auto identical = [](const std::vector<Eigen::VectorXd>& a,
                        const std::vector<Eigen::VectorXd>& b) {
      for (std::size_t i = 0; i < a.size(); ++i)
        if ((a[i].array() != b[i].array()).any()) return false;
      return true;
    };
    {
      const auto s1 = dadmms_step(admm, topo, pots, noise);
      const auto s2 = dadmms_step(admm, topo, pots, noise, &permuted);
      ok = ok && identical(s1.x, s2.x) && identical(s1.p, s2.p);
    }
    {
      const auto s1 = dsgld_step(lang, mixing, pots, 0.009, noise);
      const auto s2 = dsgld_step(lang, mixing, pots, 0.009, noise, &permuted);
      ok = ok && identical(s1.x, s2.x);
    }
    {
      const auto s1 = dsghmc_step(lang, mixing, pots, 0.1, 7.0, noise);
      const auto s2 = dsghmc_step(lang, mixing, pots, 0.1, 7.0, noise, &permuted);
      ok = ok && identical(s1.x, s2.x) && identical(s1.v, s2.v);
    }
    {
      DulaSchedule sched;
      const auto s1 = dula_step(lang, topo, pots, sched, noise);
      const auto s2 = dula_step(lang, topo, pots, sched, noise, &permuted);
      ok = ok && identical(s1.x, s2.x);
    }
    rep.check("samplers.sync_round_permutation", ok);
  });

  rep.guarded("samplers.noiseless_dadmms_is_cadmm", [&] {
    RngStream rng(seed, "noiseless");
    AdmmState a, b;
    a.rho = b.rho = 5.0;
    a.noise_on = false;
    b.noise_on = false;
    for (int i = 0; i < 5; ++i) {
      a.x.push_back(rng.normal_vector(2));
      a.p.push_back(Eigen::VectorXd::Zero(2));
    }
    b.x = a.x;
    b.p = a.p;
    bool identical = true;
    for (int k = 0; k < 50; ++k) {
      const NoiseDraw noise = draw_noise(rng, 5, 2);
      a = dadmms_step(a, topo, pots, noise);  // noise_on = false: ignored
      b = cadmm_step(b, topo, pots);
      for (int i = 0; i < 5; ++i) {
        identical = identical && (a.x[i].array() == b.x[i].array()).all();
        identical = identical && (a.p[i].array() == b.p[i].array()).all();
      }
    }
    rep.check("samplers.noiseless_dadmms_is_cadmm", identical);
  });

  rep.guarded("samplers.dual_sum_conservation", [&] {
    RngStream rng(seed, "dual-sum");
    AdmmState state;
    state.rho = 5.0;
    for (int i = 0; i < 5; ++i) {
      state.x.push_back(rng.normal_vector(2));
      state.p.push_back(Eigen::VectorXd::Zero(2));
    }
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      state = dadmms_step(state, topo, pots, draw_noise(rng, 5, 2));
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(2);
      for (const auto& p : state.p) sum += p;
      worst = std::max(worst, sum.cwiseAbs().maxCoeff());
    }
    rep.check("samplers.dual_sum_conservation", worst <= 1e-9, "max |sum p| " + fmt(worst));
  });

  rep.guarded("samplers.determinism", [&] {
    AlgorithmParams params;
    params.algo = Algorithm::dadmms;
    const auto h1 = run_chain(params, pots, topo, 20, 1, 77);
    const auto h2 = run_chain(params, pots, topo, 20, 1, 77);
    bool identical = h1.iterations == h2.iterations;
    for (std::size_t r = 0; identical && r < h1.states.size(); ++r)
      for (std::size_t i = 0; i < h1.states[r].size(); ++i)
        identical =
            identical && (h1.states[r][i].array() == h2.states[r][i].array()).all();
    rep.check("samplers.determinism", identical);
  });
}

void metrics_checks(Reporter& rep, std::uint64_t seed) {
  RngStream rng(seed, "metrics");
  auto random_summary = [&](int d) {
    GaussianSummary s;
    s.mean = rng.normal_vector(d);
    Eigen::MatrixXd a(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) a(r, c) = rng.normal();
    s.covariance = a * a.transpose() + 0.05 * Eigen::MatrixXd::Identity(d, d);
    return s;
  };

  rep.guarded("metrics.w2_metric_axioms", [&] {
    bool ok = true;
    double worst_triangle = 0.0;
    double worst_symmetry = 0.0;
    double worst_identity = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int d = 1 + trial % 3;
      const auto a = random_summary(d), b = random_summary(d), c = random_summary(d);
      const double ab = wasserstein2_gaussian(a, b);
      const double ac = wasserstein2_gaussian(a, c);
      const double cb = wasserstein2_gaussian(c, b);
      ok = ok && ab >= 0.0;
      worst_symmetry = std::max(worst_symmetry, std::abs(ab - wasserstein2_gaussian(b, a)));
      // W(a, a) is sqrt of eigendecomposition roundoff, so it scales like
      // sqrt(eps * tr), not eps.
      worst_identity = std::max(worst_identity, wasserstein2_gaussian(a, a));
      worst_triangle = std::max(worst_triangle, ab - (ac + cb));
    }
    ok = ok && worst_triangle <= 1e-8 && worst_symmetry <= 1e-8 && worst_identity <= 1e-6;
    rep.check("metrics.w2_metric_axioms", ok,
              "worst triangle slack " + fmt(worst_triangle) + ", symmetry " +
                  fmt(worst_symmetry) + ", identity " + fmt(worst_identity));
  });

  rep.guarded("metrics.w2_homogeneity", [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 1 + trial % 3;
      auto a = random_summary(d), b = random_summary(d);
      const double w = wasserstein2_gaussian(a, b);
      const double scale = 0.1 + 3.0 * rng.uniform();
      a.mean *= scale;
      b.mean *= scale;
      a.covariance *= scale * scale;
      b.covariance *= scale * scale;
      const double ws = wasserstein2_gaussian(a, b);
      worst = std::max(worst, std::abs(ws - scale * w) / (scale * w));
    }
    rep.check("metrics.w2_homogeneity", worst <= 1e-8, "max rel err " + fmt(worst));
  });

  rep.guarded("metrics.empirical_permutation_invariance", [&] {
    std::vector<Eigen::VectorXd> samples;
    for (int i = 0; i < 64; ++i) samples.push_back(rng.normal_vector(3));
    const auto s1 = empirical_gaussian(samples);
    std::vector<Eigen::VectorXd> shuffled = samples;
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[static_cast<std::size_t>(rng.uniform() * i)]);
    const auto s2 = empirical_gaussian(shuffled);
    const double err = std::max((s1.mean - s2.mean).cwiseAbs().maxCoeff(),
                                (s1.covariance - s2.covariance).cwiseAbs().maxCoeff());
    rep.check("metrics.empirical_permutation_invariance", err <= 1e-12,
              "max deviation " + fmt(err));
  });
}

void theory_checks(Reporter& rep, std::uint64_t seed) {
  rep.guarded("theory.young_norm_inequality", [&] {
    RngStream rng(seed, "young-ineq");
    double worst = 0.0;
    for (int trial = 0; trial < 100000; ++trial) {
      const int d = 1 + trial % 5;
      const Eigen::VectorXd x = rng.normal_vector(d);
      const Eigen::VectorXd y = rng.normal_vector(d);
      const double kappa = 1.0 + 100.0 * rng.uniform_pos();
      const double lhs = (x + y).squaredNorm() + (kappa - 1.0) * x.squaredNorm();
      const double rhs = (1.0 - 1.0 / kappa) * y.squaredNorm();
      worst = std::min(worst, lhs - rhs);
    }
    rep.check("theory.young_norm_inequality", worst >= -1e-12, "min slack " + fmt(worst));
  });

  rep.guarded("theory.contraction_iff", [&] {
    RngStream rng(seed, "iff");
    bool ok = true;
    for (int trial = 0; trial < 10000; ++trial) {
      SpectralConstants sc;
      sc.sigma_min_m_minus = 0.2 + 3.0 * rng.uniform();
      sc.sigma_max_m_plus = sc.sigma_min_m_minus + 3.0 * rng.uniform_pos();
      sc.sigma_max_m_minus = sc.sigma_min_m_minus + rng.uniform();
      sc.tau_g = sc.sigma_max_m_plus / sc.sigma_min_m_minus;
      const double m_f = 0.2 + 4.0 * rng.uniform();
      const double M_f = m_f * (1.0 + 2.0 * rng.uniform());
      const double kappa = 1.0 + 5.0 * rng.uniform_pos();
      const double rho = 0.1 + 8.0 * rng.uniform();
      const double delta = delta_of(kappa, rho, sc, m_f, M_f);
      const double a = (2.0 * m_f + 1.0) / (2.0 * m_f * (1.0 + delta));
      ok = ok && ((a < 1.0) == (2.0 * m_f * delta > 1.0));
    }
    rep.check("theory.contraction_iff", ok);
  });

  rep.guarded("theory.delta_max_consistency", [&] {
    RngStream rng(seed, "dmax");
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 3 + static_cast<int>(rng.uniform() * 17);
      const auto topo = random_connected_topology(n, n / 2, seed + 91 + trial);
      const auto sc = spectral_constants(extend_matrices(topo, 2));
      const double m_f = 0.5 + 2.0 * rng.uniform();
      const double M_f = m_f * (1.0 + 3.0 * rng.uniform());
      const double tau_f = M_f / m_f;
      const double kappa = optimal_kappa(tau_f, sc.tau_g);
      const double rho = optimal_rho(kappa, sc, M_f);
      const double direct = delta_of(kappa, rho, sc, m_f, M_f);
      const double closed = delta_max(tau_f, sc.tau_g);
      worst = std::max(worst, std::abs(direct - closed) / closed);
    }
    rep.check("theory.delta_max_consistency", worst <= 1e-9, "max rel diff " + fmt(worst));
  });

  rep.guarded("theory.bound_monotone", [&] {
    const auto topo = build_topology(TopologyKind::ring_cyclic, 5);
    SpectralConstants sc = spectral_constants(extend_matrices(topo, 2));
    ConvexityConstants cc{2.5, 2.5, 1.0};
    const auto tc = make_theory_constants(sc, cc);
    GaussianPosterior target;
    target.mean = Eigen::VectorXd::Zero(2);
    target.covariance = 0.1 * Eigen::MatrixXd::Identity(2, 2);
    const auto bound = bound_trajectory(tc, topo, 2, 50, 5.0, 20000, seed, target,
                                        Eigen::VectorXd::Zero(2));
    bool ok = tc.a < 1.0;
    for (std::size_t k = 1; k < bound.values.size(); ++k)
      ok = ok && bound.values[k] <= bound.values[k - 1] + 1e-12;
    ok = ok && bound.values.back() >= bound.constant_floor;
    rep.check("theory.bound_monotone", ok);
  });
}

void harness_checks(Reporter& rep, std::uint64_t seed) {
  rep.guarded("harness.determinism", [&] {
    ExperimentConfig config;
    config.problem = {ProblemKind::linreg, 2, 4.0, 10.0, 10, {}};
    config.topology = {TopologyKind::ring_cyclic, 4};
    config.algorithm = {"dadmms", AlgorithmParams{Algorithm::dadmms, 5.0, 0, 0, {}}};
    config.run.n_trials = 6;
    config.run.n_iters = 4;
    config.run.seed = seed;
    config.run.workers = 1;
    const std::string first = series_csv_string(run_experiment(config).series);
    config.run.workers = 3;  // schedule must not affect aggregated bytes
    const std::string second = series_csv_string(run_experiment(config).series);
    rep.check("harness.determinism", !first.empty() && first == second);
  });
}

}  // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  Reporter rep;
  graph_checks(rep, seed);
  problems_checks(rep, seed);
  samplers_checks(rep, seed);
  metrics_checks(rep, seed);
  theory_checks(rep, seed);
  harness_checks(rep, seed);
  return rep.results;
}

}  // namespace dmcmc
