#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dmcmc/problems.hpp"
#include "dmcmc/rng.hpp"
#include "dmcmc/selftest.hpp"
#include "dmcmc/theory.hpp"

using namespace dmcmc;

namespace {

SpectralConstants ring5_spectra() {
  return spectral_constants(extend_matrices(build_topology(TopologyKind::ring_cyclic, 5), 2));
}

}  // namespace

TEST_CASE("delta: large-kappa limit of the first argument is 1/tau_G^2") {
  const auto sc = ring5_spectra();
  const double kappa = 1e15;
  const double first = (kappa - 1.0) * sc.sigma_min_m_minus * sc.sigma_min_m_minus /
                       (kappa * sc.sigma_max_m_plus * sc.sigma_max_m_plus);
  CHECK(first == doctest::Approx(1.0 / (sc.tau_g * sc.tau_g)).epsilon(1e-12));
}

TEST_CASE("delta at the optimal rho matches the reduced second argument") {
  const auto sc = ring5_spectra();
  const double m_f = 2.0, M_f = 3.0;
  for (double kappa : {1.5, 2.0, 5.0, 20.0}) {
    const double rho = optimal_rho(kappa, sc, M_f);
    const double second =
        m_f / (rho / 4.0 * sc.sigma_max_m_plus * sc.sigma_max_m_plus +
               kappa * M_f * M_f / (rho * sc.sigma_min_m_minus * sc.sigma_min_m_minus));
    const double reduced = m_f * sc.sigma_min_m_minus /
                           (std::sqrt(kappa) * M_f * sc.sigma_max_m_plus);
    CHECK(second == doctest::Approx(reduced).epsilon(1e-12));

    // Perturbing rho by +-1% strictly decreases the second argument.
    for (double bump : {0.99, 1.01}) {
      const double rho_p = bump * rho;
      const double second_p =
          m_f / (rho_p / 4.0 * sc.sigma_max_m_plus * sc.sigma_max_m_plus +
                 kappa * M_f * M_f / (rho_p * sc.sigma_min_m_minus * sc.sigma_min_m_minus));
      CHECK(second_p < second);
    }

    // First-order optimality of the second argument via central differences.
    const double h = 1e-5 * rho;
    const auto second_at = [&](double r) {
      return m_f / (r / 4.0 * sc.sigma_max_m_plus * sc.sigma_max_m_plus +
                    kappa * M_f * M_f / (r * sc.sigma_min_m_minus * sc.sigma_min_m_minus));
    };
    const double deriv = (second_at(rho + h) - second_at(rho - h)) / (2.0 * h);
    CHECK(std::abs(deriv) <= 1e-6);
  }
}

TEST_CASE("random (kappa, rho) draws never exceed delta_max") {
  const auto sc = ring5_spectra();
  const double m_f = 1.7, M_f = 2.9;
  const double dmax = delta_max(M_f / m_f, sc.tau_g);
  RngStream rng(3, "delta-search");
  double best = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double kappa = 1.0 + 50.0 * rng.uniform_pos();
    const double rho = 0.01 + 50.0 * rng.uniform();
    const double delta = delta_of(kappa, rho, sc, m_f, M_f);
    CHECK(delta <= dmax * (1.0 + 1e-12));
    best = std::max(best, delta);
  }
  CHECK(best > 0.9 * dmax);  // the search comes close to the maximizer
  CHECK_THROWS(delta_of(1.0, 1.0, sc, m_f, M_f));
}

TEST_CASE("optimal rho plug-in value") {
  SpectralConstants sc;
  sc.sigma_min_m_minus = 1.0;
  sc.sigma_max_m_plus = 1.0;
  sc.sigma_max_m_minus = 1.0;
  sc.tau_g = 1.0;
  CHECK(optimal_rho(4.0, sc, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("optimal kappa: plug-in value, branch equality, grid maximizer") {
  CHECK(optimal_kappa(1.0, 1.0) ==
        doctest::Approx(1.0 + 0.5 * std::sqrt(5.0) + 0.5).epsilon(1e-14));

  const auto sc = ring5_spectra();
  const double m_f = 2.0, M_f = 5.0;
  const double tau_f = M_f / m_f;
  const double kappa = optimal_kappa(tau_f, sc.tau_g);
  CHECK(kappa > 1.0);

  const auto branch1 = [&](double k) {
    return (k - 1.0) * sc.sigma_min_m_minus * sc.sigma_min_m_minus /
           (k * sc.sigma_max_m_plus * sc.sigma_max_m_plus);
  };
  const auto branch2 = [&](double k) {
    return m_f * sc.sigma_min_m_minus /
           (std::sqrt(k) * M_f * sc.sigma_max_m_plus);
  };
  CHECK(std::abs(branch1(kappa) - branch2(kappa)) / branch2(kappa) <= 1e-9);

  // kappa* maximizes min(branch1, branch2) over a log grid on (1, 1e3].
  const double at_star = std::min(branch1(kappa), branch2(kappa));
  for (int g = 0; g <= 300; ++g) {
    const double k = 1.0 + std::pow(10.0, -3.0 + 6.0 * g / 300.0);
    if (k > 1000.0) break;
    CHECK(std::min(branch1(k), branch2(k)) <= at_star * (1.0 + 1e-9));
  }
}

TEST_CASE("delta_max: plug-in value, consistency, monotonicity") {
  CHECK(delta_max(1.0, 1.0) ==
        doctest::Approx(0.5 * std::sqrt(5.0) - 0.5).epsilon(1e-14));

  const auto sc = ring5_spectra();
  const double m_f = 2.2, M_f = 3.1;
  const double tau_f = M_f / m_f;
  const double via_opt =
      delta_of(optimal_kappa(tau_f, sc.tau_g), optimal_rho(optimal_kappa(tau_f, sc.tau_g), sc, M_f),
               sc, m_f, M_f);
  CHECK(std::abs(via_opt - delta_max(tau_f, sc.tau_g)) / via_opt <= 1e-9);

  for (int i = 1; i < 40; ++i) {
    const double t = 1.0 + 0.25 * i;
    CHECK(delta_max(t, 1.5) < delta_max(t - 0.25, 1.5));
    CHECK(delta_max(1.5, t) < delta_max(1.5, t - 0.25));
  }
}

TEST_CASE("sufficient condition reproduces the worked thresholds") {
  const auto ring = spectral_constants(
      extend_matrices(build_topology(TopologyKind::ring_cyclic, 5), 1));
  CHECK(sufficient_condition(2.0, 1.2, ring.tau_g).satisfied);
  CHECK_FALSE(sufficient_condition(2.0, 1.25, ring.tau_g).satisfied);
  const auto thr_ring = tau_f_threshold(2.0, ring.tau_g);
  REQUIRE(thr_ring.has_value());
  CHECK(std::abs(*thr_ring - 1.23) <= 0.01);

  const auto fc = spectral_constants(
      extend_matrices(build_topology(TopologyKind::fully_connected, 5), 1));
  const auto thr_fc = tau_f_threshold(2.0, fc.tau_g);
  REQUIRE(thr_fc.has_value());
  CHECK(std::abs(*thr_fc - std::sqrt(6.0)) <= 0.01);

  // Large m_f with a fixed positive left-hand side keeps the predicate true.
  CHECK(sufficient_condition(1e9, 1.2, ring.tau_g).satisfied);
  // Condition is never satisfiable once 2 m_f <= tau_G^2.
  CHECK_FALSE(tau_f_threshold(0.5, 2.0).has_value());
}

TEST_CASE("contraction constants follow their defining algebra") {
  const auto sc = ring5_spectra();
  ConvexityConstants cc{2.0, 2.4, 1.2};
  const auto tc = make_theory_constants(sc, cc);
  CHECK(tc.kappa == doctest::Approx(optimal_kappa(1.2, sc.tau_g)));
  CHECK(tc.rho == doctest::Approx(optimal_rho(tc.kappa, sc, 2.4)));
  CHECK(tc.a == doctest::Approx((2.0 * 2.0 + 1.0) / (2.0 * 2.0 * (1.0 + tc.delta))));
  CHECK(tc.b == doctest::Approx(1.0 / (2.0 * (1.0 + tc.delta))));
  CHECK(tc.c == doctest::Approx(2.0 * std::sqrt(2.0) * tc.delta /
                                ((1.0 + tc.delta) * sc.sigma_min_m_minus *
                                 sc.sigma_min_m_minus)));
  CHECK(tc.d_const ==
        doctest::Approx(tc.rho * sc.sigma_max_m_minus * sc.sigma_max_m_minus / 2.0));
  CHECK(tc.e == doctest::Approx(2.0 * tc.delta /
                                ((1.0 + tc.delta) * tc.rho * sc.sigma_min_m_minus *
                                 sc.sigma_min_m_minus)));

  // Explicit overrides are honored.
  const auto tc2 = make_theory_constants(sc, cc, 3.0, 1.5);
  CHECK(tc2.kappa == 3.0);
  CHECK(tc2.rho == 1.5);
}

TEST_CASE("bound trajectory: exact noise second moment and geometric decay") {
  const auto topo = build_topology(TopologyKind::ring_cyclic, 5);
  const auto sc = ring5_spectra();
  ConvexityConstants cc{2.5, 2.5, 1.0};  // isotropic: condition holds
  const auto tc = make_theory_constants(sc, cc);
  REQUIRE(tc.a < 1.0);

  GaussianPosterior target;
  target.mean = Eigen::VectorXd::Zero(2);
  target.covariance = 0.05 * Eigen::MatrixXd::Identity(2, 2);
  const double w0 = 4.0;
  const auto bound =
      bound_trajectory(tc, topo, 2, 80, w0, 100000, 9, target, target.mean);

  CHECK(bound.e_dw_sq == doctest::Approx(40.0));  // d * sum deg^2 = 2 * 20
  // Monte Carlo average of ||Dw||^2 agrees with the trace identity to ~1%.
  CHECK(bound.y_bound <= bound.y_bound_jensen);
  CHECK(bound.r_bound == doctest::Approx(bound.r_bound_jensen).epsilon(0.02));

  // Geometric component on top of the constant floor.
  const double sqrt_a = std::sqrt(tc.a);
  for (std::size_t idx = 0; idx < bound.values.size(); ++idx) {
    const double geometric = w0 / std::sqrt(tc.m_f) * std::pow(sqrt_a, bound.iterations[idx] - 1);
    CHECK(bound.values[idx] - bound.constant_floor ==
          doctest::Approx(geometric).epsilon(1e-10));
  }
  // Tail approaches the constant floor.
  CHECK(bound.values.back() - bound.constant_floor <=
        w0 * std::pow(sqrt_a, 78.0));

  CHECK_THROWS(bound_trajectory(tc, topo, 2, 10, w0, 100, 9, target, target.mean));
  auto bad = tc;
  bad.a = 1.5;
  CHECK_THROWS(bound_trajectory(bad, topo, 2, 10, w0, 100000, 9, target, target.mean));
}

TEST_CASE("stacked-iterate equivalence on the 5-cycle") {
  const auto topo = build_topology(TopologyKind::ring_cyclic, 5);
  const auto problem = LinRegProblem::generate(2, 4.0, 10.0, 5, 50, 20);
  const auto pots = problem.potentials();

  const auto with_noise = lemma1_equivalence(pots, topo, 5.0, 50, 11, true);
  CHECK(with_noise.max_x_deviation <= 1e-6);
  CHECK(with_noise.max_p_deviation <= 1e-9);
  CHECK(with_noise.max_beta_colspace_residual <= 1e-9);

  // Noiseless: both routes reduce to the optimizer and still coincide.
  const auto noiseless = lemma1_equivalence(pots, topo, 5.0, 50, 11, false);
  CHECK(noiseless.max_x_deviation <= 1e-6);
  CHECK(noiseless.max_p_deviation <= 1e-9);
}

TEST_CASE("stacked-iterate equivalence on a disconnected graph") {
  const auto topo = Topology::custom(4, {{0, 1}});  // two isolated agents
  const auto problem = LinRegProblem::generate(2, 4.0, 10.0, 4, 20, 21);
  const auto res = lemma1_equivalence(problem.potentials(), topo, 5.0, 30, 13, true);
  CHECK(res.max_x_deviation <= 1e-6);
  CHECK(res.max_p_deviation <= 1e-9);
}

TEST_CASE("KKT residuals at the replicated pooled minimizer") {
  const auto topo = build_topology(TopologyKind::ring_cyclic, 5);
  const auto problem = LinRegProblem::generate(2, 4.0, 10.0, 5, 50, 22);
  const auto pots = problem.potentials();
  const auto mats = extend_matrices(topo, 2);
  const Eigen::VectorXd x_star = centralized_minimizer(pots);

  const auto res = kkt_residuals(pots, mats, x_star);
  CHECK(res.stationarity <= 1e-8);
  CHECK(res.consensus <= 1e-12);  // replicated vector is consensus by construction
  CHECK(res.coupling == 0.0);     // Z* is defined as M+^T X* / 2

  // Away from the optimum the stationarity residual must be visible.
  const auto off = kkt_residuals(pots, mats, x_star + Eigen::VectorXd::Ones(2));
  CHECK(off.stationarity > 1e-3);
}

TEST_CASE("measured initial graph distance is positive and seed-stable") {
  const auto topo = build_topology(TopologyKind::ring_cyclic, 5);
  const auto problem = LinRegProblem::generate(2, 4.0, 10.0, 5, 50, 23);
  const auto pots = problem.potentials();
  const auto mats = extend_matrices(topo, 2);
  const Eigen::VectorXd x_star = centralized_minimizer(pots);

  RngStream rng(55, "wg");
  std::vector<std::vector<Eigen::VectorXd>> inits;
  for (int t = 0; t < 16; ++t) {
    std::vector<Eigen::VectorXd> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(rng.normal_vector(2));
    inits.push_back(std::move(xs));
  }
  const double w0 = measured_initial_wg(mats, pots, 5.0, inits, x_star);
  CHECK(w0 > 0.0);
  const double w0_again = measured_initial_wg(mats, pots, 5.0, inits, x_star);
  CHECK(w0 == w0_again);
}
