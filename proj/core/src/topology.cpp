#include "dmcmc/topology.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace dmcmc {

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::fully_connected: return "fully_connected";
    case TopologyKind::ring_cyclic: return "ring_cyclic";
    case TopologyKind::no_edge: return "no_edge";
    case TopologyKind::custom: return "custom";
  }
  return "unknown";
}

TopologyKind topology_kind_from_string(const std::string& s) {
  if (s == "fully_connected") return TopologyKind::fully_connected;
  if (s == "ring_cyclic") return TopologyKind::ring_cyclic;
  if (s == "no_edge") return TopologyKind::no_edge;
  if (s == "custom") return TopologyKind::custom;
  throw std::invalid_argument("unknown topology kind: " + s);
}

Topology::Topology(TopologyKind kind, int n_agents, std::vector<std::pair<int, int>> edges)
    : kind_(kind), n_agents_(n_agents), edges_(std::move(edges)), neighbors_(n_agents) {
  for (const auto& [i, j] : edges_) {
    neighbors_[i].push_back(j);
    neighbors_[j].push_back(i);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

Topology Topology::build(TopologyKind kind, int n_agents) {
  if (n_agents < 1) throw std::invalid_argument("topology requires n_agents >= 1");
  std::vector<std::pair<int, int>> edges;
  switch (kind) {
    case TopologyKind::fully_connected:
      for (int i = 0; i < n_agents; ++i)
        for (int j = i + 1; j < n_agents; ++j) edges.emplace_back(i, j);
      break;
    case TopologyKind::ring_cyclic:
      if (n_agents < 3) throw std::invalid_argument("ring_cyclic requires n_agents >= 3");
      for (int i = 0; i < n_agents; ++i) {
        int j = (i + 1) % n_agents;
        edges.emplace_back(std::min(i, j), std::max(i, j));
      }
      std::sort(edges.begin(), edges.end());
      break;
    case TopologyKind::no_edge:
      break;
    case TopologyKind::custom:
      throw std::invalid_argument("use Topology::custom for explicit edge sets");
  }
  return Topology(kind, n_agents, std::move(edges));
}

Topology Topology::custom(int n_agents, std::vector<std::pair<int, int>> edges) {
  if (n_agents < 1) throw std::invalid_argument("topology requires n_agents >= 1");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges) {
    if (e.first == e.second) throw std::invalid_argument("self-loop in edge set");
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first < 0 || e.second >= n_agents)
      throw std::invalid_argument("edge endpoint out of range");
    if (!seen.insert(e).second) throw std::invalid_argument("duplicate edge");
  }
  std::sort(edges.begin(), edges.end());
  return Topology(TopologyKind::custom, n_agents, std::move(edges));
}

Topology build_topology(TopologyKind kind, int n_agents) {
  return Topology::build(kind, n_agents);
}

std::vector<std::pair<int, int>> Topology::arcs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(2 * edges_.size());
  for (const auto& [i, j] : edges_) {
    out.emplace_back(i, j);
    out.emplace_back(j, i);
  }
  return out;
}

ExtendedMatrices extend_matrices(const Topology& topo, int d) {
  if (d < 1) throw std::invalid_argument("extend_matrices requires d >= 1");
  const int n = topo.n_agents();
  const auto arcs = topo.arcs();
  const int na = static_cast<int>(arcs.size());

  ExtendedMatrices out;
  out.dim = d;
  out.n_agents = n;
  out.arcs = arcs;
  out.m_plus = Eigen::MatrixXd::Zero(n * d, na * d);
  out.m_minus = Eigen::MatrixXd::Zero(n * d, na * d);
  // Arc q = (i, j) contributes the identity at block (i, q) of A1^T and at
  // block (j, q) of A2^T; M+ = (A1 + A2)^T, M- = (A1 - A2)^T.
  for (int q = 0; q < na; ++q) {
    const auto [i, j] = arcs[q];
    for (int r = 0; r < d; ++r) {
      out.m_plus(i * d + r, q * d + r) += 1.0;
      out.m_plus(j * d + r, q * d + r) += 1.0;
      out.m_minus(i * d + r, q * d + r) += 1.0;
      out.m_minus(j * d + r, q * d + r) -= 1.0;
    }
  }

  out.l_plus = Eigen::MatrixXd::Zero(n * d, n * d);
  out.l_minus = Eigen::MatrixXd::Zero(n * d, n * d);
  out.deg = Eigen::MatrixXd::Zero(n * d, n * d);
  for (int i = 0; i < n; ++i) {
    const double deg_i = topo.degree(i);
    for (int r = 0; r < d; ++r) {
      out.l_plus(i * d + r, i * d + r) = deg_i;
      out.l_minus(i * d + r, i * d + r) = deg_i;
      out.deg(i * d + r, i * d + r) = deg_i;
    }
  }
  for (const auto& [i, j] : topo.edges()) {
    for (int r = 0; r < d; ++r) {
      out.l_plus(i * d + r, j * d + r) = 1.0;
      out.l_plus(j * d + r, i * d + r) = 1.0;
      out.l_minus(i * d + r, j * d + r) = -1.0;
      out.l_minus(j * d + r, i * d + r) = -1.0;
    }
  }
  return out;
}

SpectralConstants spectral_constants(const ExtendedMatrices& mats) {
  // sigma(M)^2 = 2 * eigenvalues of L = M M^T / 2; the extended signed
  // Laplacian of a connected graph has exactly `dim` zero eigenvalues.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_plus(mats.l_plus,
                                                         Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_minus(mats.l_minus,
                                                          Eigen::EigenvaluesOnly);
  const auto& ev_plus = es_plus.eigenvalues();
  const auto& ev_minus = es_minus.eigenvalues();

  const double lambda_fiedler = ev_minus[mats.dim];  // ascending order
  if (lambda_fiedler <= 1e-10)
    throw std::runtime_error(
        "spectral_constants: graph is disconnected (sigma_min(M-) = 0)");

  SpectralConstants sc;
  sc.sigma_max_m_plus = std::sqrt(2.0 * ev_plus[ev_plus.size() - 1]);
  sc.sigma_min_m_minus = std::sqrt(2.0 * lambda_fiedler);
  sc.sigma_max_m_minus = std::sqrt(2.0 * ev_minus[ev_minus.size() - 1]);
  sc.tau_g = sc.sigma_max_m_plus / sc.sigma_min_m_minus;
  return sc;
}

Eigen::MatrixXd mixing_matrix(const Topology& topo) {
  const int n = topo.n_agents();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j : topo.neighbors(i)) {
      s(i, j) = 1.0 / (1.0 + std::max(topo.degree(i), topo.degree(j)));
      row += s(i, j);
    }
    s(i, i) = 1.0 - row;
  }
  return s;
}

}  // namespace dmcmc
