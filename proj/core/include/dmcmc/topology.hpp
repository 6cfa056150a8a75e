#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dmcmc {

enum class TopologyKind { fully_connected, ring_cyclic, no_edge, custom };

std::string to_string(TopologyKind kind);
TopologyKind topology_kind_from_string(const std::string& s);

/// Undirected communication graph over agents 0..N-1.
///
/// Edges are stored as (i, j) with i < j, sorted lexicographically; the
/// directed arc set enumerates both orientations of each edge, (i -> j)
/// before (j -> i), so every derived matrix has one canonical layout.
class Topology {
 public:
  static Topology build(TopologyKind kind, int n_agents);
  static Topology custom(int n_agents, std::vector<std::pair<int, int>> edges);

  int n_agents() const { return n_agents_; }
  TopologyKind kind() const { return kind_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  /// Both orientations of every edge in canonical order.
  std::vector<std::pair<int, int>> arcs() const;
  const std::vector<int>& neighbors(int i) const { return neighbors_.at(i); }
  int degree(int i) const { return static_cast<int>(neighbors_.at(i).size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

 private:
  Topology(TopologyKind kind, int n_agents, std::vector<std::pair<int, int>> edges);

  TopologyKind kind_;
  int n_agents_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> neighbors_;
};

Topology build_topology(TopologyKind kind, int n_agents);

/// Incidence-derived matrices of the bidirected graph, Kronecker-extended
/// by I_d so they act on stacked agent states in R^{Nd}.
///
/// m_plus / m_minus are the unoriented / oriented incidence matrices
/// (N*d x |A|*d with |A| = 2|E|); l_plus / l_minus the signless / signed
/// Laplacians and deg the degree matrix (all N*d x N*d), satisfying
/// l_plus = m_plus * m_plus^T / 2, l_minus = m_minus * m_minus^T / 2 and
/// deg = (l_plus + l_minus) / 2 exactly.
struct ExtendedMatrices {
  int dim = 0;
  int n_agents = 0;
  std::vector<std::pair<int, int>> arcs;
  Eigen::MatrixXd m_plus;
  Eigen::MatrixXd m_minus;
  Eigen::MatrixXd l_plus;
  Eigen::MatrixXd l_minus;
  Eigen::MatrixXd deg;
};

ExtendedMatrices extend_matrices(const Topology& topo, int d);

/// Extreme singular values of the extended incidence matrices.
/// sigma_min_m_minus is the smallest nonzero singular value; tau_g is the
/// graph condition number sigma_max(M+) / sigma_min(M-).
struct SpectralConstants {
  double sigma_max_m_plus = 0;
  double sigma_min_m_minus = 0;
  double sigma_max_m_minus = 0;
  double tau_g = 0;
};

/// Throws if the underlying graph is disconnected (the smallest nonzero
/// eigenvalue of the signed Laplacian would be <= 1e-10).
SpectralConstants spectral_constants(const ExtendedMatrices& mats);

/// Symmetric doubly stochastic mixing matrix with Metropolis weights
/// S_ij = 1 / (1 + max(N_i, N_j)) on edges and S_ii = 1 - sum_j S_ij.
Eigen::MatrixXd mixing_matrix(const Topology& topo);

}  // namespace dmcmc
