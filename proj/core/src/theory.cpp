#include "dmcmc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "dmcmc/metrics.hpp"
#include "dmcmc/rng.hpp"

namespace dmcmc {

double delta_of(double kappa, double rho, const SpectralConstants& sc, double m_f,
                double M_f) {
  if (kappa <= 1.0) throw std::invalid_argument("delta_of requires kappa > 1");
  if (rho <= 0.0) throw std::invalid_argument("delta_of requires rho > 0");
  const double smin2 = sc.sigma_min_m_minus * sc.sigma_min_m_minus;
  const double smax2 = sc.sigma_max_m_plus * sc.sigma_max_m_plus;
  const double first = (kappa - 1.0) * smin2 / (kappa * smax2);
  const double second = m_f / (rho / 4.0 * smax2 + kappa * M_f * M_f / (rho * smin2));
  return std::min(first, second);
}

double optimal_rho(double kappa, const SpectralConstants& sc, double M_f) {
  if (kappa <= 1.0) throw std::invalid_argument("optimal_rho requires kappa > 1");
  return 2.0 * std::sqrt(kappa) * M_f / (sc.sigma_min_m_minus * sc.sigma_max_m_plus);
}

double optimal_kappa(double tau_f, double tau_g) {
  if (tau_f <= 0 || tau_g <= 0)
    throw std::invalid_argument("optimal_kappa requires positive condition numbers");
  const double r2 = (tau_g * tau_g) / (tau_f * tau_f);
  return 1.0 + 0.5 * std::sqrt(4.0 * r2 + r2 * r2) + 0.5 * r2;
}

double delta_max(double tau_f, double tau_g) {
  if (tau_f <= 0 || tau_g <= 0)
    throw std::invalid_argument("delta_max requires positive condition numbers");
  return 0.5 / tau_f * std::sqrt(1.0 / (tau_f * tau_f) + 4.0 / (tau_g * tau_g)) -
         0.5 / (tau_f * tau_f);
}

SufficientCondition sufficient_condition(double m_f, double tau_f, double tau_g) {
  if (m_f <= 0 || tau_f <= 0 || tau_g <= 0)
    throw std::invalid_argument("sufficient_condition requires positive inputs");
  const double lhs = 1.0 / tau_f *
                         std::sqrt(1.0 / (tau_f * tau_f) + 4.0 / (tau_g * tau_g)) -
                     1.0 / (tau_f * tau_f);
  SufficientCondition out;
  out.margin = lhs - 1.0 / m_f;
  out.satisfied = out.margin > 0.0;
  return out;
}

std::optional<double> tau_f_threshold(double m_f, double tau_g) {
  // The margin is decreasing in tau_f with limit 2/tau_g^2 - 1/m_f as
  // tau_f -> 0+; when that limit is <= 0 no tau_f qualifies.
  if (2.0 * m_f <= tau_g * tau_g) return std::nullopt;
  double lo = 1e-8, hi = 1.0;
  while (sufficient_condition(m_f, hi, tau_g).satisfied) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sufficient_condition(m_f, mid, tau_g).satisfied)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

TheoryConstants make_theory_constants(const SpectralConstants& sc,
                                      const ConvexityConstants& cc,
                                      std::optional<double> kappa,
                                      std::optional<double> rho) {
  TheoryConstants tc;
  tc.m_f = cc.m_f;
  tc.M_f = cc.M_f;
  tc.tau_f = cc.tau_f;
  tc.tau_g = sc.tau_g;
  tc.sigma_max_m_minus = sc.sigma_max_m_minus;
  tc.sigma_min_m_minus = sc.sigma_min_m_minus;
  tc.kappa = kappa ? *kappa : optimal_kappa(cc.tau_f, sc.tau_g);
  tc.rho = rho ? *rho : optimal_rho(tc.kappa, sc, cc.M_f);
  tc.delta = delta_of(tc.kappa, tc.rho, sc, cc.m_f, cc.M_f);
  tc.a = (2.0 * tc.m_f + 1.0) / (2.0 * tc.m_f * (1.0 + tc.delta));
  tc.b = 1.0 / (2.0 * (1.0 + tc.delta));
  tc.c = 2.0 * std::numbers::sqrt2 * tc.delta /
         ((1.0 + tc.delta) * sc.sigma_min_m_minus * sc.sigma_min_m_minus);
  tc.d_const = tc.rho * sc.sigma_max_m_minus * sc.sigma_max_m_minus / 2.0;
  tc.e = 2.0 * tc.delta /
         ((1.0 + tc.delta) * tc.rho * sc.sigma_min_m_minus * sc.sigma_min_m_minus);
  return tc;
}

BoundTrajectory bound_trajectory(const TheoryConstants& tc, const Topology& topo, int d,
                                 long n_iters, double w0, long mc_samples,
                                 std::uint64_t seed,
                                 const std::optional<GaussianPosterior>& target,
                                 const Eigen::VectorXd& x_star) {
  if (tc.a >= 1.0)
    throw std::runtime_error("bound_trajectory: a >= 1, bound is not contractive");
  if (mc_samples < 10000)
    throw std::invalid_argument("bound_trajectory requires mc_samples >= 1e4");

  const int n = topo.n_agents();
  const double sqrt2 = std::numbers::sqrt2;
  const double m_f = tc.m_f;

  double sum_deg_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double deg = topo.degree(i);
    sum_deg_sq += deg * deg;
  }
  const double e_dw_sq = d * sum_deg_sq;  // E||Dw||^2 = d * sum_i N_i^2

  // w_bar = ||D w / (sqrt2 m_f)|| + ||sqrt2 D w|| is proportional to ||Dw||.
  const double cw = 1.0 / (sqrt2 * m_f) + sqrt2;
  const double coef_y =
      2.0 * tc.b / std::sqrt(m_f) * cw + tc.c * tc.sigma_max_m_minus * std::sqrt(tc.rho) +
      tc.c * tc.d_const / std::sqrt(m_f);
  const double coef_r = sqrt2 * tc.b / m_f * cw + tc.b * cw * cw +
                        tc.b / (2.0 * m_f * m_f) + sqrt2 * tc.c * tc.d_const / m_f - tc.e;

  // Monte Carlo over the per-round noise for E(y) and E(r).
  RngStream rng(seed, "bound-mc");
  double sum_y = 0.0, sum_r = 0.0;
  for (long s = 0; s < mc_samples; ++s) {
    double dw_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double deg = topo.degree(i);
      for (int r = 0; r < d; ++r) {
        const double w = rng.normal();
        dw_sq += deg * deg * w * w;
      }
    }
    const double dw = std::sqrt(dw_sq);
    sum_y += coef_y * dw;
    sum_r += coef_r * dw_sq;
  }

  BoundTrajectory out;
  out.w0 = w0;
  out.e_dw_sq = e_dw_sq;
  out.y_bound = sum_y / static_cast<double>(mc_samples);
  out.r_bound = std::abs(sum_r / static_cast<double>(mc_samples));
  out.y_bound_jensen = coef_y * std::sqrt(e_dw_sq);
  out.r_bound_jensen = std::abs(coef_r) * e_dw_sq;

  if (target.has_value()) {
    // X* - D w / (sqrt2 m_f) is Gaussian, blockwise mean x_star and
    // covariance N_i^2 / (2 m_f^2) I_d; the product target factorizes too,
    // so the squared distance decomposes over agents.
    const GaussianSummary tgt = to_summary(*target);
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double deg = topo.degree(i);
      GaussianSummary block;
      block.mean = x_star;
      block.covariance =
          deg * deg / (2.0 * m_f * m_f) * Eigen::MatrixXd::Identity(d, d);
      const double w = wasserstein2_gaussian(block, tgt);
      sq += w * w;
    }
    out.coupling_term = std::sqrt(sq);
  } else {
    out.coupling_term = std::numeric_limits<double>::quiet_NaN();
  }

  const double sqrt_a = std::sqrt(tc.a);
  out.constant_floor = out.y_bound / (std::sqrt(tc.a * m_f) * (1.0 - sqrt_a)) +
                       std::sqrt(out.r_bound) / (std::sqrt(m_f) * (1.0 - sqrt_a)) +
                       std::sqrt(e_dw_sq) / (sqrt2 * m_f) +
                       (std::isnan(out.coupling_term) ? 0.0 : out.coupling_term);

  out.iterations.reserve(n_iters);
  out.values.reserve(n_iters);
  double decay = 1.0;  // (sqrt a)^(k-1) at k = 1
  for (long k = 1; k <= n_iters; ++k) {
    out.iterations.push_back(k);
    out.values.push_back(w0 / std::sqrt(m_f) * decay + out.constant_floor);
    decay *= sqrt_a;
  }
  return out;
}

namespace {

Eigen::VectorXd stack_states(const std::vector<Eigen::VectorXd>& xs) {
  const int n = static_cast<int>(xs.size());
  const int d = static_cast<int>(xs.front().size());
  Eigen::VectorXd out(n * d);
  for (int i = 0; i < n; ++i) out.segment(i * d, d) = xs[i];
  return out;
}

/// Least-squares multiplier in the column space of M-^T for the replicated
/// optimum: minimum-norm solution of M- beta = -grad f(X*).
Eigen::VectorXd optimal_multiplier(const PotentialSet& potentials,
                                   const ExtendedMatrices& mats,
                                   const Eigen::VectorXd& x_star) {
  const int n = mats.n_agents;
  const int d = mats.dim;
  Eigen::VectorXd grad_star(n * d);
  for (int i = 0; i < n; ++i) grad_star.segment(i * d, d) = potentials[i]->grad(x_star);
  return mats.m_minus.completeOrthogonalDecomposition().solve(-grad_star);
}

}  // namespace

double measured_initial_wg(const ExtendedMatrices& mats, const PotentialSet& potentials,
                           double rho,
                           const std::vector<std::vector<Eigen::VectorXd>>& initial_states,
                           const Eigen::VectorXd& x_star) {
  if (initial_states.empty())
    throw std::invalid_argument("measured_initial_wg requires at least one trial");
  const int n = mats.n_agents;
  const int d = mats.dim;
  Eigen::VectorXd x_star_stacked(n * d);
  for (int i = 0; i < n; ++i) x_star_stacked.segment(i * d, d) = x_star;
  const Eigen::VectorXd z_star = 0.5 * mats.m_plus.transpose() * x_star_stacked;
  const Eigen::VectorXd beta_star = optimal_multiplier(potentials, mats, x_star);

  double mean_z_sq = 0.0;
  for (const auto& xs : initial_states) {
    const Eigen::VectorXd z0 = 0.5 * mats.m_plus.transpose() * stack_states(xs);
    mean_z_sq += (z0 - z_star).squaredNorm();
  }
  mean_z_sq /= static_cast<double>(initial_states.size());
  return std::sqrt(rho * mean_z_sq + beta_star.squaredNorm() / rho);
}

Lemma1Result lemma1_equivalence(const PotentialSet& potentials, const Topology& topo,
                                double rho, long n_iters, std::uint64_t seed,
                                bool with_noise) {
  const int n = topo.n_agents();
  const int d = potentials.front()->dim();
  const ExtendedMatrices mats = extend_matrices(topo, d);
  const int ad = static_cast<int>(mats.arcs.size()) * d;

  // Projector onto col(M-^T) via the pseudo-inverse of 2 L- = M- M-^T.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(2.0 * mats.l_minus);
  Eigen::VectorXd inv_ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv_ev.size(); ++i)
    inv_ev[i] = inv_ev[i] > 1e-10 ? 1.0 / inv_ev[i] : 0.0;
  const Eigen::MatrixXd pinv_2lm =
      es.eigenvectors() * inv_ev.asDiagonal() * es.eigenvectors().transpose();
  const Eigen::MatrixXd projector =
      mats.m_minus.transpose() * pinv_2lm * mats.m_minus;

  RngStream init_rng(seed, "lemma1-init");
  RngStream noise_rng(seed, "lemma1-noise");
  std::vector<Eigen::VectorXd> x0;
  x0.reserve(n);
  for (int i = 0; i < n; ++i) x0.push_back(init_rng.normal_vector(d));

  // Route 1: the per-agent algorithm.
  AdmmState state;
  state.x = x0;
  state.p.assign(n, Eigen::VectorXd::Zero(d));
  state.rho = rho;
  state.noise_on = with_noise;

  // Route 2: the stacked (Z, beta) recursion, Z0 = M+^T X0 / 2, beta0 = 0.
  Eigen::VectorXd z = 0.5 * mats.m_plus.transpose() * stack_states(x0);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(ad);

  Lemma1Result result;
  const NoiseDraw zero_noise{std::vector<Eigen::VectorXd>(n, Eigen::VectorXd::Zero(d))};
  for (long k = 0; k < n_iters; ++k) {
    const NoiseDraw noise = with_noise ? draw_noise(noise_rng, n, d) : zero_noise;
    state = dadmms_step(state, topo, potentials, noise);

    const Eigen::VectorXd m_plus_z = mats.m_plus * z;
    const Eigen::VectorXd m_minus_beta = mats.m_minus * beta;
    std::vector<Eigen::VectorXd> x_lemma(n);
    for (int i = 0; i < n; ++i) {
      const int deg = topo.degree(i);
      const Eigen::VectorXd rhs = rho * m_plus_z.segment(i * d, d) -
                                  m_minus_beta.segment(i * d, d) -
                                  std::numbers::sqrt2 * deg * noise.w[i];
      if (deg == 0) {
        x_lemma[i] = potentials[i]->minimize_tilted(-rhs);
      } else {
        x_lemma[i] = potentials[i]->prox(1.0 / (2.0 * rho * deg),
                                         rhs / (2.0 * rho * deg));
      }
    }
    const Eigen::VectorXd x_stacked = stack_states(x_lemma);
    z = 0.5 * mats.m_plus.transpose() * x_stacked;
    beta += rho / 2.0 * mats.m_minus.transpose() * x_stacked;

    const Eigen::VectorXd p_lemma = mats.m_minus * beta;
    for (int i = 0; i < n; ++i) {
      result.max_x_deviation = std::max(
          result.max_x_deviation, (state.x[i] - x_lemma[i]).lpNorm<Eigen::Infinity>());
      result.max_p_deviation = std::max(
          result.max_p_deviation,
          (state.p[i] - p_lemma.segment(i * d, d)).lpNorm<Eigen::Infinity>());
    }
    result.max_beta_colspace_residual = std::max(
        result.max_beta_colspace_residual, (beta - projector * beta).norm());
  }
  return result;
}

KktResiduals kkt_residuals(const PotentialSet& potentials, const ExtendedMatrices& mats,
                           const Eigen::VectorXd& x_star) {
  const int n = mats.n_agents;
  const int d = mats.dim;
  Eigen::VectorXd x_stacked(n * d);
  Eigen::VectorXd grad_star(n * d);
  for (int i = 0; i < n; ++i) {
    x_stacked.segment(i * d, d) = x_star;
    grad_star.segment(i * d, d) = potentials[i]->grad(x_star);
  }
  const Eigen::VectorXd beta_star = optimal_multiplier(potentials, mats, x_star);
  const Eigen::VectorXd z_star = 0.5 * mats.m_plus.transpose() * x_stacked;

  KktResiduals out;
  out.stationarity = (grad_star + mats.m_minus * beta_star).norm();
  out.consensus = (mats.m_minus.transpose() * x_stacked).norm();
  out.coupling = (0.5 * mats.m_plus.transpose() * x_stacked - z_star).norm();
  return out;
}

Eigen::VectorXd centralized_minimizer(const PotentialSet& potentials) {
  const int d = potentials.front()->dim();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (const auto* pot : potentials) {
      g += pot->grad(x);
      h += pot->hess(x);
    }
    if (g.norm() <= 1e-12) return x;
    const Eigen::VectorXd step = h.ldlt().solve(g);
    double t = 1.0;
    auto total = [&](const Eigen::VectorXd& y) {
      double v = 0.0;
      for (const auto* pot : potentials) v += pot->value(y);
      return v;
    };
    const double fx = total(x);
    Eigen::VectorXd cand = x - step;
    while (total(cand) >= fx && t > 1e-14) {
      t *= 0.5;
      cand = x - t * step;
    }
    x = cand;
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
  for (const auto* pot : potentials) g += pot->grad(x);
  if (g.norm() > 1e-8)
    throw std::runtime_error("centralized_minimizer: Newton did not converge");
  return x;
}

}  // namespace dmcmc
