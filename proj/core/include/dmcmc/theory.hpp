#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "dmcmc/potentials.hpp"
#include "dmcmc/problems.hpp"
#include "dmcmc/samplers.hpp"
#include "dmcmc/topology.hpp"

namespace dmcmc {

/// Contraction analysis constants for the noisy consensus-ADMM sampler:
/// delta and the coefficients a..e of the recursive Wasserstein bound, for a
/// given (kappa, rho) pair and problem/graph conditioning.
struct TheoryConstants {
  double kappa = 0;
  double rho = 0;
  double delta = 0;
  double a = 0;
  double b = 0;
  double c = 0;
  double d_const = 0;
  double e = 0;
  double m_f = 0;
  double M_f = 0;
  double tau_f = 0;
  double tau_g = 0;
  double sigma_max_m_minus = 0;
  double sigma_min_m_minus = 0;
};

/// delta(kappa, rho) = min of the two contraction arguments; requires
/// kappa > 1 and rho > 0.
double delta_of(double kappa, double rho, const SpectralConstants& sc, double m_f,
                double M_f);

/// rho maximizing the second argument of delta for fixed kappa:
/// 2 sqrt(kappa) M_f / (sigma_min(M-) sigma_max(M+)).
double optimal_rho(double kappa, const SpectralConstants& sc, double M_f);

/// kappa equalizing the two branches of delta_max(kappa); the global
/// maximizer of delta over (kappa, rho).
double optimal_kappa(double tau_f, double tau_g);

/// Maximum achievable delta over kappa > 1, rho > 0.
double delta_max(double tau_f, double tau_g);

struct SufficientCondition {
  bool satisfied = false;
  /// Signed margin of tau_f^-1 sqrt(tau_f^-2 + 4 tau_g^-2) - tau_f^-2 > 1/m_f.
  double margin = 0;
};

SufficientCondition sufficient_condition(double m_f, double tau_f, double tau_g);

/// Largest tau_f for which the sufficient condition holds at this m_f
/// (bisection on the predicate); nullopt when no tau_f > 0 satisfies it.
std::optional<double> tau_f_threshold(double m_f, double tau_g);

/// Assembles TheoryConstants; kappa defaults to optimal_kappa and rho to
/// optimal_rho(kappa).
TheoryConstants make_theory_constants(const SpectralConstants& sc,
                                      const ConvexityConstants& cc,
                                      std::optional<double> kappa = std::nullopt,
                                      std::optional<double> rho = std::nullopt);

/// Iteration-indexed upper bound on the Wasserstein distance of the stacked
/// iterate to the product target, plus the noise constants that form its
/// floor. y/r bounds carry both the Monte Carlo estimate and the
/// deterministic Jensen variant (E||Dw|| <= sqrt(E||Dw||^2)).
struct BoundTrajectory {
  std::vector<long> iterations;
  std::vector<double> values;
  double w0 = 0;
  double y_bound = 0;
  double r_bound = 0;
  double y_bound_jensen = 0;
  double r_bound_jensen = 0;
  double e_dw_sq = 0;
  double coupling_term = 0;  // NaN when the target term is not evaluated
  double constant_floor = 0;
};

/// Evaluates the geometric-decay bound with constants tc. Throws when
/// a >= 1 (not contractive) or mc_samples < 1e4. `target` is the
/// single-agent target distribution; when absent (no closed-form target,
/// e.g. logistic regression) the final coupling term is reported as NaN and
/// excluded from the floor.
BoundTrajectory bound_trajectory(const TheoryConstants& tc, const Topology& topo, int d,
                                 long n_iters, double w0, long mc_samples,
                                 std::uint64_t seed,
                                 const std::optional<GaussianPosterior>& target,
                                 const Eigen::VectorXd& x_star);

/// Initial graph-norm distance between the (Z, beta) iterates and their
/// optimal values, measured over an ensemble of initial stacked states with
/// the point-mass coupling: w0^2 = rho E||Z0 - Z*||^2 + ||beta*||^2 / rho.
double measured_initial_wg(const ExtendedMatrices& mats, const PotentialSet& potentials,
                           double rho,
                           const std::vector<std::vector<Eigen::VectorXd>>& initial_states,
                           const Eigen::VectorXd& x_star);

struct Lemma1Result {
  double max_x_deviation = 0;
  double max_p_deviation = 0;
  double max_beta_colspace_residual = 0;
};

/// Runs the per-agent algorithm and the stacked (Z, beta) recursion with a
/// shared injected noise sequence and reports the worst-case deviations
/// between them (and of beta from the column space of M-^T).
Lemma1Result lemma1_equivalence(const PotentialSet& potentials, const Topology& topo,
                                double rho, long n_iters, std::uint64_t seed,
                                bool with_noise = true);

struct KktResiduals {
  double stationarity = 0;  // ||grad f(X*) + M- beta*||
  double consensus = 0;     // ||M-^T X*||
  double coupling = 0;      // ||M+^T X* / 2 - Z*||
};

/// Replicates x_star across agents, computes the least-squares multiplier in
/// the column space of M-^T, and evaluates the optimality residuals.
KktResiduals kkt_residuals(const PotentialSet& potentials, const ExtendedMatrices& mats,
                           const Eigen::VectorXd& x_star);

/// Minimizer of the pooled problem sum_i f_i (Newton; exact for quadratics).
Eigen::VectorXd centralized_minimizer(const PotentialSet& potentials);

}  // namespace dmcmc
