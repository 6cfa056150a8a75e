#include "dmcmc/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "dmcmc/rng.hpp"

namespace dmcmc {

namespace {

void check_sizes(int d, int n_agents, int n_per_agent) {
  if (d < 1 || n_agents < 1 || n_per_agent < 0)
    throw std::invalid_argument("problem sizes must be positive");
}

}  // namespace

LinRegProblem::LinRegProblem(int d, double xi, double lambda, std::vector<AgentData> data,
                             Eigen::VectorXd x_true)
    : d_(d), xi_(xi), lambda_(lambda), data_(std::move(data)), x_true_(std::move(x_true)) {
  if (lambda_ <= 0) throw std::invalid_argument("lambda_prior must be positive");
  const int n = n_agents();
  bool has_data = false;
  for (const auto& agent : data_) has_data = has_data || agent.z.rows() > 0;
  // xi = 0 yields exact noiseless observations for oracle tests; the
  // potentials (which divide by xi^2) are then left unconstructed.
  if (has_data && xi_ <= 0) return;
  potentials_.reserve(n);
  for (const auto& agent : data_) {
    // f_i(x) = x^T h x / 2 - b^T x + c, h = Z^T Z / xi^2 + I / (lambda N).
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d_, d_) / (lambda_ * n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d_);
    double c = 0.0;
    if (agent.z.rows() > 0) {
      h += agent.z.transpose() * agent.z / (xi_ * xi_);
      b += agent.z.transpose() * agent.y / (xi_ * xi_);
      c = agent.y.squaredNorm() / (2.0 * xi_ * xi_);
    }
    potentials_.emplace_back(std::move(h), std::move(b), c);
  }
}

LinRegProblem LinRegProblem::generate(int d, double xi, double lambda_prior, int n_agents,
                                      int n_per_agent, std::uint64_t seed) {
  check_sizes(d, n_agents, n_per_agent);
  if (xi < 0) throw std::invalid_argument("xi must be nonnegative");
  RngStream rng(seed, "linreg-data");
  Eigen::VectorXd x_true = std::sqrt(lambda_prior) * rng.normal_vector(d);
  std::vector<AgentData> data(n_agents);
  for (auto& agent : data) {
    agent.z.resize(n_per_agent, d);
    agent.y.resize(n_per_agent);
    for (int l = 0; l < n_per_agent; ++l) {
      agent.z.row(l) = rng.normal_vector(d).transpose();
      agent.y[l] = agent.z.row(l).dot(x_true) + xi * rng.normal();
    }
  }
  return LinRegProblem(d, xi, lambda_prior, std::move(data), std::move(x_true));
}

LinRegProblem LinRegProblem::from_data(int d, double xi, double lambda_prior,
                                       std::vector<AgentData> data, Eigen::VectorXd x_true) {
  if (data.empty()) throw std::invalid_argument("from_data requires at least one agent");
  return LinRegProblem(d, xi, lambda_prior, std::move(data), std::move(x_true));
}

const QuadraticPotential& LinRegProblem::potential(int i) const {
  if (potentials_.empty())
    throw std::logic_error("linreg potentials are undefined when xi = 0");
  return potentials_[static_cast<std::size_t>(i)];
}

PotentialSet LinRegProblem::potentials() const {
  if (potentials_.empty())
    throw std::logic_error("linreg potentials are undefined when xi = 0");
  PotentialSet out;
  out.reserve(potentials_.size());
  for (const auto& p : potentials_) out.push_back(&p);
  return out;
}

LogRegProblem::LogRegProblem(int d, double lambda, std::vector<AgentData> data,
                             Eigen::VectorXd x_true)
    : d_(d), lambda_(lambda), data_(std::move(data)), x_true_(std::move(x_true)) {
  if (lambda_ <= 0) throw std::invalid_argument("lambda_prior must be positive");
  const int n = n_agents();
  potentials_.reserve(n);
  for (const auto& agent : data_) {
    Eigen::MatrixXd signed_z(agent.z.rows(), d_);
    for (Eigen::Index l = 0; l < agent.z.rows(); ++l) {
      const double psi = agent.y[l] == 1.0 ? -1.0 : 1.0;
      signed_z.row(l) = psi * agent.z.row(l);
    }
    potentials_.emplace_back(std::move(signed_z), 1.0 / (lambda_ * n), d_);
  }
}

LogRegProblem LogRegProblem::generate(int d, double lambda_prior, int n_agents,
                                      int n_per_agent, std::uint64_t seed) {
  check_sizes(d, n_agents, n_per_agent);
  RngStream rng(seed, "logreg-data");
  Eigen::VectorXd x_true = std::sqrt(lambda_prior) * rng.normal_vector(d);
  std::vector<AgentData> data(n_agents);
  for (auto& agent : data) {
    Eigen::MatrixXd z(n_per_agent, d);
    Eigen::VectorXd y(n_per_agent);
    for (int l = 0; l < n_per_agent; ++l) {
      z.row(l) = (std::sqrt(20.0) * rng.normal_vector(d)).transpose();
      const double p = rng.uniform();
      const double prob_one = 1.0 / (1.0 + std::exp(-z.row(l).dot(x_true)));
      y[l] = p <= prob_one ? 1.0 : 0.0;
    }
    // Stable reorder: label-1 points first, original order preserved within
    // each label class.
    agent.z.resize(n_per_agent, d);
    agent.y.resize(n_per_agent);
    int pos = 0;
    for (int pass = 0; pass < 2; ++pass) {
      const double want = pass == 0 ? 1.0 : 0.0;
      for (int l = 0; l < n_per_agent; ++l) {
        if (y[l] == want) {
          agent.z.row(pos) = z.row(l);
          agent.y[pos] = y[l];
          ++pos;
        }
      }
    }
  }
  return LogRegProblem(d, lambda_prior, std::move(data), std::move(x_true));
}

LogRegProblem LogRegProblem::from_data(int d, double lambda_prior,
                                       std::vector<AgentData> data, Eigen::VectorXd x_true) {
  if (data.empty()) throw std::invalid_argument("from_data requires at least one agent");
  for (const auto& agent : data) {
    bool seen_zero = false;
    for (Eigen::Index l = 0; l < agent.y.size(); ++l) {
      if (agent.y[l] != 0.0 && agent.y[l] != 1.0)
        throw std::invalid_argument("logreg labels must be 0 or 1");
      if (agent.y[l] == 0.0) seen_zero = true;
      if (agent.y[l] == 1.0 && seen_zero)
        throw std::invalid_argument("logreg data must list label-1 points first");
    }
  }
  return LogRegProblem(d, lambda_prior, std::move(data), std::move(x_true));
}

int LogRegProblem::n_label_one(int i) const {
  const auto& y = data_.at(i).y;
  int count = 0;
  while (count < y.size() && y[count] == 1.0) ++count;
  return count;
}

PotentialSet LogRegProblem::potentials() const {
  PotentialSet out;
  out.reserve(potentials_.size());
  for (const auto& p : potentials_) out.push_back(&p);
  return out;
}

AgentData LogRegProblem::pooled() const {
  Eigen::Index total = 0;
  for (const auto& agent : data_) total += agent.z.rows();
  AgentData out;
  out.z.resize(total, d_);
  out.y.resize(total);
  Eigen::Index pos = 0;
  for (const auto& agent : data_) {
    out.z.middleRows(pos, agent.z.rows()) = agent.z;
    out.y.segment(pos, agent.y.size()) = agent.y;
    pos += agent.z.rows();
  }
  return out;
}

GaussianPosterior linreg_true_posterior(const LinRegProblem& problem) {
  const int d = problem.dim();
  Eigen::MatrixXd precision = Eigen::MatrixXd::Identity(d, d) / problem.lambda_prior();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  for (const auto& agent : problem.data()) {
    if (agent.z.rows() == 0) continue;
    const double inv_var = 1.0 / (problem.xi() * problem.xi());
    precision += inv_var * agent.z.transpose() * agent.z;
    rhs += inv_var * agent.z.transpose() * agent.y;
  }
  GaussianPosterior post;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("posterior precision is not positive definite");
  post.covariance = llt.solve(Eigen::MatrixXd::Identity(d, d));
  post.covariance = 0.5 * (post.covariance + post.covariance.transpose()).eval();
  post.mean = llt.solve(rhs);
  return post;
}

double predict_accuracy(const Eigen::VectorXd& x, const AgentData& dataset) {
  if (dataset.z.rows() == 0) throw std::invalid_argument("predict_accuracy: empty dataset");
  Eigen::Index correct = 0;
  for (Eigen::Index l = 0; l < dataset.z.rows(); ++l) {
    const double assigned = dataset.z.row(l).dot(x) >= 0.0 ? 1.0 : 0.0;
    if (assigned == dataset.y[l]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.z.rows());
}

ConvexityConstants strong_convexity_constants(const LinRegProblem& problem) {
  ConvexityConstants out;
  out.m_f = std::numeric_limits<double>::infinity();
  out.M_f = 0.0;
  for (int i = 0; i < problem.n_agents(); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(problem.potential(i).h(),
                                                      Eigen::EigenvaluesOnly);
    out.m_f = std::min(out.m_f, es.eigenvalues().minCoeff());
    out.M_f = std::max(out.M_f, es.eigenvalues().maxCoeff());
  }
  out.tau_f = out.M_f / out.m_f;
  return out;
}

ConvexityConstants strong_convexity_constants(const LogRegProblem& problem) {
  // Only the ridge term is a uniform lower bound; the data term's Hessian
  // can come arbitrarily close to singular. The upper bound uses the 1/4
  // cap of the logistic second derivative.
  ConvexityConstants out;
  out.m_f = 1.0 / (problem.lambda_prior() * problem.n_agents());
  out.M_f = 0.0;
  for (int i = 0; i < problem.n_agents(); ++i) {
    const auto& z = problem.data()[i].z;
    double top = out.m_f;
    if (z.rows() > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z.transpose() * z,
                                                        Eigen::EigenvaluesOnly);
      top += 0.25 * es.eigenvalues().maxCoeff();
    }
    out.M_f = std::max(out.M_f, top);
  }
  out.tau_f = out.M_f / out.m_f;
  return out;
}

}  // namespace dmcmc
