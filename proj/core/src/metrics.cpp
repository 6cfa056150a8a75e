#include "dmcmc/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace dmcmc {

GaussianSummary to_summary(const GaussianPosterior& posterior) {
  return {posterior.mean, posterior.covariance};
}

GaussianSummary empirical_gaussian(const std::vector<Eigen::VectorXd>& samples) {
  const auto m = static_cast<Eigen::Index>(samples.size());
  if (m < 2) throw std::invalid_argument("empirical_gaussian requires at least 2 samples");
  const Eigen::Index d = samples.front().size();

  GaussianSummary out;
  out.mean = Eigen::VectorXd::Zero(d);
  for (const auto& s : samples) out.mean += s;
  out.mean /= static_cast<double>(m);

  out.covariance = Eigen::MatrixXd::Zero(d, d);
  for (const auto& s : samples) {
    const Eigen::VectorXd c = s - out.mean;
    out.covariance += c * c.transpose();
  }
  out.covariance /= static_cast<double>(m - 1);
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_sqrt: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  // Scale the indefiniteness tolerance with the matrix magnitude.
  const double floor = -tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < floor)
      throw std::runtime_error("psd_sqrt: matrix is indefinite beyond tolerance");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

double wasserstein2_gaussian(const GaussianSummary& a, const GaussianSummary& b) {
  const Eigen::MatrixXd root_a = psd_sqrt(a.covariance);
  const Eigen::MatrixXd root_b = psd_sqrt(b.covariance);
  // tr((S_b^{1/2} S_a S_b^{1/2})^{1/2}) equals the nuclear norm of
  // S_a^{1/2} S_b^{1/2}.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(root_a * root_b);
  const double cross = svd.singularValues().sum();
  const double w2 = (a.mean - b.mean).squaredNorm() + a.covariance.trace() +
                    b.covariance.trace() - 2.0 * cross;
  return std::sqrt(std::max(w2, 0.0));
}

Eigen::VectorXd average_iterate(const std::vector<Eigen::VectorXd>& agent_states) {
  if (agent_states.empty())
    throw std::invalid_argument("average_iterate requires at least one agent");
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(agent_states.front().size());
  for (const auto& x : agent_states) avg += x;
  return avg / static_cast<double>(agent_states.size());
}

namespace {

void check_histories(const std::vector<ChainHistory>& histories) {
  if (histories.size() < 2)
    throw std::invalid_argument("series require at least 2 trials");
  for (const auto& h : histories)
    if (h.iterations != histories.front().iterations)
      throw std::invalid_argument("histories disagree on recorded iterations");
}

}  // namespace

ConvergenceSeries wasserstein_series(const std::vector<ChainHistory>& histories,
                                     const GaussianPosterior& target,
                                     const std::string& metric_prefix) {
  check_histories(histories);
  const GaussianSummary tgt = to_summary(target);
  const auto& iterations = histories.front().iterations;
  const int n_agents = static_cast<int>(histories.front().states.front().size());
  const std::string metric = metric_prefix + "w2";

  ConvergenceSeries series;
  std::vector<Eigen::VectorXd> ensemble(histories.size());
  for (std::size_t r = 0; r < iterations.size(); ++r) {
    for (int i = 0; i < n_agents; ++i) {
      for (std::size_t t = 0; t < histories.size(); ++t)
        ensemble[t] = histories[t].states[r][i];
      series.rows.push_back({iterations[r], metric, std::to_string(i),
                             wasserstein2_gaussian(empirical_gaussian(ensemble), tgt)});
    }
    for (std::size_t t = 0; t < histories.size(); ++t)
      ensemble[t] = average_iterate(histories[t].states[r]);
    series.rows.push_back({iterations[r], metric, "avg",
                           wasserstein2_gaussian(empirical_gaussian(ensemble), tgt)});
  }
  return series;
}

ConvergenceSeries accuracy_series(const std::vector<ChainHistory>& histories,
                                  const LogRegProblem& problem,
                                  const std::string& metric_prefix) {
  check_histories(histories);
  const AgentData pooled = problem.pooled();
  const auto& iterations = histories.front().iterations;
  const int n_agents = static_cast<int>(histories.front().states.front().size());
  const auto n_trials = static_cast<double>(histories.size());

  ConvergenceSeries series;
  std::vector<double> accs(histories.size());
  for (std::size_t r = 0; r < iterations.size(); ++r) {
    for (int i = 0; i < n_agents; ++i) {
      double mean = 0.0;
      for (std::size_t t = 0; t < histories.size(); ++t) {
        accs[t] = predict_accuracy(histories[t].states[r][i], pooled);
        mean += accs[t];
      }
      mean /= n_trials;
      double var = 0.0;
      for (double a : accs) var += (a - mean) * (a - mean);
      var /= n_trials - 1.0;
      series.rows.push_back(
          {iterations[r], metric_prefix + "accuracy_mean", std::to_string(i), mean});
      series.rows.push_back({iterations[r], metric_prefix + "accuracy_std",
                             std::to_string(i), std::sqrt(var)});
    }
  }
  return series;
}

}  // namespace dmcmc
