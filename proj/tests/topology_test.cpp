#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dmcmc/selftest.hpp"
#include "dmcmc/topology.hpp"

using namespace dmcmc;

TEST_CASE("named topology families") {
  const auto fc = build_topology(TopologyKind::fully_connected, 5);
  CHECK(fc.n_edges() == 10);
  for (int i = 0; i < 5; ++i) CHECK(fc.degree(i) == 4);

  const auto ring = build_topology(TopologyKind::ring_cyclic, 5);
  CHECK(ring.n_edges() == 5);
  for (int i = 0; i < 5; ++i) CHECK(ring.degree(i) == 2);

  const auto empty = build_topology(TopologyKind::no_edge, 20);
  CHECK(empty.n_edges() == 0);
  for (int i = 0; i < 20; ++i) CHECK(empty.degree(i) == 0);

  CHECK_THROWS(build_topology(TopologyKind::ring_cyclic, 2));
  CHECK_THROWS(build_topology(TopologyKind::fully_connected, 0));
  CHECK_THROWS(Topology::custom(3, {{0, 0}}));
  CHECK_THROWS(Topology::custom(3, {{0, 1}, {1, 0}}));
  CHECK_THROWS(Topology::custom(3, {{0, 5}}));
}

TEST_CASE("arc enumeration is canonical") {
  const auto topo = build_topology(TopologyKind::ring_cyclic, 3);
  const auto arcs = topo.arcs();
  const std::vector<std::pair<int, int>> expected = {{0, 1}, {1, 0}, {0, 2},
                                                     {2, 0}, {1, 2}, {2, 1}};
  CHECK(arcs == expected);
}

TEST_CASE("extended matrices of the 5-cycle") {
  const auto topo = build_topology(TopologyKind::ring_cyclic, 5);
  const auto mats = extend_matrices(topo, 1);
  // L- is the standard cycle Laplacian: diag 2, -1 on ring neighbors.
  Eigen::MatrixXd c5 = 2.0 * Eigen::MatrixXd::Identity(5, 5);
  for (int i = 0; i < 5; ++i) {
    c5(i, (i + 1) % 5) = -1.0;
    c5((i + 1) % 5, i) = -1.0;
  }
  CHECK((mats.l_minus - c5).cwiseAbs().maxCoeff() == 0.0);
  CHECK((mats.deg - 2.0 * Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((mats.deg - 0.5 * (mats.l_plus + mats.l_minus)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(mats.m_plus.rows() == 5);
  CHECK(mats.m_plus.cols() == 10);
}

TEST_CASE("no_edge extended matrices are zero") {
  const auto mats = extend_matrices(build_topology(TopologyKind::no_edge, 3), 2);
  CHECK(mats.m_plus.size() == 0);  // 6 x 0
  CHECK(mats.m_plus.rows() == 6);
  CHECK(mats.l_plus.cwiseAbs().maxCoeff() == 0.0);
  CHECK(mats.l_minus.cwiseAbs().maxCoeff() == 0.0);
  CHECK(mats.deg.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix product identities hold exactly for all families") {
  for (int d = 1; d <= 3; ++d) {
    for (const auto& topo : {build_topology(TopologyKind::fully_connected, 5),
                             build_topology(TopologyKind::ring_cyclic, 5),
                             build_topology(TopologyKind::no_edge, 4),
                             random_connected_topology(8, 5, 11)}) {
      const auto mats = extend_matrices(topo, d);
      CHECK((mats.l_plus - 0.5 * mats.m_plus * mats.m_plus.transpose())
                .cwiseAbs()
                .maxCoeff() == 0.0);
      CHECK((mats.l_minus - 0.5 * mats.m_minus * mats.m_minus.transpose())
                .cwiseAbs()
                .maxCoeff() == 0.0);
      CHECK((mats.deg - 0.5 * (mats.l_plus + mats.l_minus)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("spectral constants reproduce the worked graph values") {
  const auto ring = spectral_constants(extend_matrices(
      build_topology(TopologyKind::ring_cyclic, 5), 1));
  // Closed-form cycle eigenvalues: signless max 4, signed smallest nonzero
  // 2 - 2 cos(2 pi / 5).
  const double fiedler = 2.0 - 2.0 * std::cos(2.0 * M_PI / 5.0);
  CHECK(ring.sigma_min_m_minus ==
        doctest::Approx(std::sqrt(2.0 * fiedler)).epsilon(1e-12));
  CHECK(ring.sigma_max_m_plus == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
  CHECK(ring.tau_g == doctest::Approx(1.70).epsilon(0.005));
  CHECK(ring.tau_g == doctest::Approx(std::sqrt(4.0 / fiedler)).epsilon(1e-12));

  const auto fc = spectral_constants(extend_matrices(
      build_topology(TopologyKind::fully_connected, 5), 1));
  CHECK(fc.tau_g == doctest::Approx(1.26).epsilon(0.005));
  CHECK(fc.tau_g == doctest::Approx(std::sqrt(8.0 / 5.0)).epsilon(1e-12));

  // Extension dimension must not change the spectra.
  const auto ring3 = spectral_constants(extend_matrices(
      build_topology(TopologyKind::ring_cyclic, 5), 3));
  CHECK(ring3.tau_g == doctest::Approx(ring.tau_g).epsilon(1e-12));
}

TEST_CASE("disconnected graphs are rejected by spectral_constants") {
  CHECK_THROWS(spectral_constants(extend_matrices(
      build_topology(TopologyKind::no_edge, 5), 1)));
  // Two components.
  const auto split = Topology::custom(4, {{0, 1}, {2, 3}});
  CHECK_THROWS(spectral_constants(extend_matrices(split, 2)));
}

TEST_CASE("mixing matrix examples") {
  const Eigen::MatrixXd id = mixing_matrix(build_topology(TopologyKind::no_edge, 4));
  CHECK((id - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd pair = mixing_matrix(build_topology(TopologyKind::fully_connected, 2));
  CHECK(pair(0, 0) == doctest::Approx(0.5));
  CHECK(pair(0, 1) == doctest::Approx(0.5));
  CHECK(pair(1, 0) == doctest::Approx(0.5));
  CHECK(pair(1, 1) == doctest::Approx(0.5));

  // Ring of 5: all degrees 2, Metropolis weight 1/3 everywhere.
  const auto ring_topo = build_topology(TopologyKind::ring_cyclic, 5);
  const Eigen::MatrixXd ring = mixing_matrix(ring_topo);
  for (int i = 0; i < 5; ++i) {
    CHECK(ring(i, i) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    for (int j : ring_topo.neighbors(i))
      CHECK(ring(i, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("consensus vectors are annihilated by the oriented incidence transpose") {
  const auto topo = random_connected_topology(7, 4, 5);
  for (int d = 1; d <= 3; ++d) {
    const auto mats = extend_matrices(topo, d);
    Eigen::VectorXd x(d);
    for (int r = 0; r < d; ++r) x[r] = std::cos(1.0 + r);
    Eigen::VectorXd stacked(topo.n_agents() * d);
    for (int i = 0; i < topo.n_agents(); ++i) stacked.segment(i * d, d) = x;
    CHECK((mats.m_minus.transpose() * stacked).cwiseAbs().maxCoeff() <= 1e-14);
  }
}
