#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "dmcmc/potentials.hpp"

namespace dmcmc {

/// One agent's dataset: row l of z is the feature vector of point l.
struct AgentData {
  Eigen::MatrixXd z;
  Eigen::VectorXd y;
};

struct GaussianPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// min over agents of the strong-convexity constant, max of the gradient
/// Lipschitz constant, and their ratio tau_f = M_f / m_f.
struct ConvexityConstants {
  double m_f = 0;
  double M_f = 0;
  double tau_f = 0;
};

/// Bayesian linear regression split across agents: agent i holds n_i points
/// (z, y) with y = x^T z + noise, and the local potential
/// f_i(x) = sum_l (y_l - x^T z_l)^2 / (2 xi^2) + ||x||^2 / (2 lambda N).
class LinRegProblem {
 public:
  static LinRegProblem generate(int d, double xi, double lambda_prior, int n_agents,
                                int n_per_agent, std::uint64_t seed);
  /// Explicit datasets, e.g. for crafted conditioning in experiments.
  static LinRegProblem from_data(int d, double xi, double lambda_prior,
                                 std::vector<AgentData> data, Eigen::VectorXd x_true);

  int dim() const { return d_; }
  double xi() const { return xi_; }
  double lambda_prior() const { return lambda_; }
  int n_agents() const { return static_cast<int>(data_.size()); }
  const std::vector<AgentData>& data() const { return data_; }
  const Eigen::VectorXd& x_true() const { return x_true_; }

  /// Undefined when the problem was generated with xi = 0 (noiseless data
  /// exists for oracle tests, but the potentials divide by xi^2).
  const QuadraticPotential& potential(int i) const;
  PotentialSet potentials() const;

 private:
  LinRegProblem(int d, double xi, double lambda, std::vector<AgentData> data,
                Eigen::VectorXd x_true);

  int d_;
  double xi_;
  double lambda_;
  std::vector<AgentData> data_;
  Eigen::VectorXd x_true_;
  std::vector<QuadraticPotential> potentials_;
};

/// Bayesian logistic regression split across agents. Within each agent the
/// label-1 points come first; the local potential is
/// f_i(x) = sum_l softplus(psi_l x^T z_l) + ||x||^2 / (2 lambda N) with
/// psi_l = -1 on label-1 points and +1 otherwise.
class LogRegProblem {
 public:
  static LogRegProblem generate(int d, double lambda_prior, int n_agents,
                                int n_per_agent, std::uint64_t seed);
  static LogRegProblem from_data(int d, double lambda_prior, std::vector<AgentData> data,
                                 Eigen::VectorXd x_true);

  int dim() const { return d_; }
  double lambda_prior() const { return lambda_; }
  int n_agents() const { return static_cast<int>(data_.size()); }
  const std::vector<AgentData>& data() const { return data_; }
  const Eigen::VectorXd& x_true() const { return x_true_; }
  /// Count of label-1 points of agent i (they occupy the leading rows).
  int n_label_one(int i) const;

  const LogisticPotential& potential(int i) const { return potentials_[i]; }
  PotentialSet potentials() const;

  /// All agents' points stacked, for whole-dataset accuracy evaluation.
  AgentData pooled() const;

 private:
  LogRegProblem(int d, double lambda, std::vector<AgentData> data, Eigen::VectorXd x_true);

  int d_;
  double lambda_;
  std::vector<AgentData> data_;
  Eigen::VectorXd x_true_;
  std::vector<LogisticPotential> potentials_;
};

GaussianPosterior linreg_true_posterior(const LinRegProblem& problem);

/// Fraction of points whose predicted label (1 iff x^T z >= 0) matches y.
double predict_accuracy(const Eigen::VectorXd& x, const AgentData& dataset);

ConvexityConstants strong_convexity_constants(const LinRegProblem& problem);
ConvexityConstants strong_convexity_constants(const LogRegProblem& problem);

}  // namespace dmcmc
