#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "dmcmc/problems.hpp"
#include "dmcmc/samplers.hpp"

namespace dmcmc {

/// Moments of a trial ensemble. The covariance is stored symmetrized;
/// eigenvalue clamping for near-degenerate ensembles happens inside the
/// Wasserstein evaluation.
struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

GaussianSummary to_summary(const GaussianPosterior& posterior);

/// Sample mean and covariance (1/(M-1) normalization); requires M >= 2.
GaussianSummary empirical_gaussian(const std::vector<Eigen::VectorXd>& samples);

/// Closed-form 2-Wasserstein distance between Gaussians,
///   W^2 = ||m_a - m_b||^2 + tr(S_a + S_b - 2 (S_b^{1/2} S_a S_b^{1/2})^{1/2}),
/// with PSD eigenvalue clamping so near-singular ensemble covariances are
/// accepted. Throws if a covariance is indefinite beyond tolerance.
double wasserstein2_gaussian(const GaussianSummary& a, const GaussianSummary& b);

/// Symmetric PSD square root with eigenvalues clamped at zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, double tol = 1e-8);

Eigen::VectorXd average_iterate(const std::vector<Eigen::VectorXd>& agent_states);

/// One record of a per-iteration metric table; `agent` is an agent index
/// rendered as a string or "avg" for the average-iterate series.
struct SeriesRow {
  long iteration;
  std::string metric;
  std::string agent;
  double value;
};

struct ConvergenceSeries {
  std::vector<SeriesRow> rows;
};

/// Per-iteration Wasserstein distances of the trial ensembles to `target`:
/// one "w2" row per agent plus one for the average iterate. All histories
/// must share the same recorded iteration grid.
ConvergenceSeries wasserstein_series(const std::vector<ChainHistory>& histories,
                                     const GaussianPosterior& target,
                                     const std::string& metric_prefix = "");

/// Per-iteration, per-agent mean and 1/(M-1) std of whole-dataset prediction
/// accuracy over the trial ensemble.
ConvergenceSeries accuracy_series(const std::vector<ChainHistory>& histories,
                                  const LogRegProblem& problem,
                                  const std::string& metric_prefix = "");

}  // namespace dmcmc
