#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

namespace dmcmc {

/// One agent's potential f_i: value, gradient, Hessian, and the proximal
/// oracle prox_{gamma f}(v) = argmin_x { f(x) + ||x - v||^2 / (2 gamma) }.
class LocalPotential {
 public:
  virtual ~LocalPotential() = default;

  virtual int dim() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd grad(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::MatrixXd hess(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd prox(double gamma, const Eigen::VectorXd& v) const = 0;
  /// argmin_x { f(x) + tilt^T x }; the isolated-agent primal update.
  virtual Eigen::VectorXd minimize_tilted(const Eigen::VectorXd& tilt) const = 0;
};

/// f(x) = x^T h x / 2 - b^T x + c with h symmetric positive definite.
class QuadraticPotential final : public LocalPotential {
 public:
  QuadraticPotential(Eigen::MatrixXd h, Eigen::VectorXd b, double c = 0.0);

  int dim() const override { return static_cast<int>(b_.size()); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd hess(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd prox(double gamma, const Eigen::VectorXd& v) const override;
  Eigen::VectorXd minimize_tilted(const Eigen::VectorXd& tilt) const override;

  const Eigen::MatrixXd& h() const { return h_; }
  const Eigen::VectorXd& b() const { return b_; }

 private:
  Eigen::MatrixXd h_;
  Eigen::VectorXd b_;
  double c_;
};

/// f(x) = sum_l softplus(s_l^T x) + ridge ||x||^2 / 2, where the rows of
/// `signed_z` are psi_l * z_l. Prox and tilted minimization run a damped
/// Newton iteration (backtracking halving) to gradient norm 1e-9.
class LogisticPotential final : public LocalPotential {
 public:
  LogisticPotential(Eigen::MatrixXd signed_z, double ridge, int dim);

  int dim() const override { return dim_; }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd hess(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd prox(double gamma, const Eigen::VectorXd& v) const override;
  Eigen::VectorXd minimize_tilted(const Eigen::VectorXd& tilt) const override;

  double ridge() const { return ridge_; }
  const Eigen::MatrixXd& signed_z() const { return signed_z_; }

  static constexpr double kGradTol = 1e-9;
  static constexpr int kMaxNewtonIters = 100;

 private:
  Eigen::MatrixXd signed_z_;
  double ridge_;
  int dim_;
};

using PotentialSet = std::vector<const LocalPotential*>;

}  // namespace dmcmc
