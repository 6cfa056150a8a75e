#include "dmcmc/potentials.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace dmcmc {

QuadraticPotential::QuadraticPotential(Eigen::MatrixXd h, Eigen::VectorXd b, double c)
    : h_(std::move(h)), b_(std::move(b)), c_(c) {
  if (h_.rows() != h_.cols() || h_.rows() != b_.size())
    throw std::invalid_argument("quadratic potential shape mismatch");
}

double QuadraticPotential::value(const Eigen::VectorXd& x) const {
  return 0.5 * x.dot(h_ * x) - b_.dot(x) + c_;
}

Eigen::VectorXd QuadraticPotential::grad(const Eigen::VectorXd& x) const {
  return h_ * x - b_;
}

Eigen::MatrixXd QuadraticPotential::hess(const Eigen::VectorXd&) const { return h_; }

Eigen::VectorXd QuadraticPotential::prox(double gamma, const Eigen::VectorXd& v) const {
  if (gamma <= 0) throw std::invalid_argument("prox requires gamma > 0");
  Eigen::MatrixXd a = h_;
  a.diagonal().array() += 1.0 / gamma;
  return a.ldlt().solve(b_ + v / gamma);
}

Eigen::VectorXd QuadraticPotential::minimize_tilted(const Eigen::VectorXd& tilt) const {
  return h_.ldlt().solve(b_ - tilt);
}

namespace {

double softplus(double t) {
  // log(1 + exp(t)) without overflow.
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

}  // namespace

LogisticPotential::LogisticPotential(Eigen::MatrixXd signed_z, double ridge, int dim)
    : signed_z_(std::move(signed_z)), ridge_(ridge), dim_(dim) {
  if (signed_z_.rows() > 0 && signed_z_.cols() != dim_)
    throw std::invalid_argument("logistic potential shape mismatch");
  if (ridge_ <= 0) throw std::invalid_argument("logistic potential requires ridge > 0");
}

double LogisticPotential::value(const Eigen::VectorXd& x) const {
  double v = 0.5 * ridge_ * x.squaredNorm();
  for (Eigen::Index l = 0; l < signed_z_.rows(); ++l)
    v += softplus(signed_z_.row(l).dot(x));
  return v;
}

Eigen::VectorXd LogisticPotential::grad(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = ridge_ * x;
  for (Eigen::Index l = 0; l < signed_z_.rows(); ++l)
    g += sigmoid(signed_z_.row(l).dot(x)) * signed_z_.row(l).transpose();
  return g;
}

Eigen::MatrixXd LogisticPotential::hess(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd h = ridge_ * Eigen::MatrixXd::Identity(dim_, dim_);
  for (Eigen::Index l = 0; l < signed_z_.rows(); ++l) {
    const double s = sigmoid(signed_z_.row(l).dot(x));
    h += (s * (1.0 - s)) * (signed_z_.row(l).transpose() * signed_z_.row(l));
  }
  return h;
}

namespace {

/// Damped Newton on a smooth strongly convex objective.
Eigen::VectorXd newton_minimize(const Eigen::VectorXd& start,
                                const std::function<double(const Eigen::VectorXd&)>& f,
                                const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
                                const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& h,
                                double tol, int max_iters, const char* what) {
  Eigen::VectorXd x = start;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd gx = g(x);
    if (gx.norm() <= tol) return x;
    const Eigen::VectorXd step = h(x).ldlt().solve(gx);
    // Inside the quadratic basin (small Newton decrement) the objective
    // decrease falls below float resolution, so the value-based line search
    // cannot certify progress; take the full step there.
    if (gx.dot(step) <= 1e-4) {
      x -= step;
      continue;
    }
    const double fx = f(x);
    double t = 1.0;
    Eigen::VectorXd cand = x - step;
    while (f(cand) >= fx && t > 1e-14) {
      t *= 0.5;
      cand = x - t * step;
    }
    x = cand;
  }
  if (g(x).norm() <= tol) return x;
  throw std::runtime_error(std::string(what) +
                           ": Newton did not converge within iteration limit");
}

}  // namespace

Eigen::VectorXd LogisticPotential::prox(double gamma, const Eigen::VectorXd& v) const {
  if (gamma <= 0) throw std::invalid_argument("prox requires gamma > 0");
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim_, dim_);
  return newton_minimize(
      v,
      [&](const Eigen::VectorXd& x) { return value(x) + (x - v).squaredNorm() / (2.0 * gamma); },
      [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return grad(x) + (x - v) / gamma; },
      [&](const Eigen::VectorXd& x) -> Eigen::MatrixXd { return hess(x) + eye / gamma; },
      kGradTol, kMaxNewtonIters, "logistic prox");
}

Eigen::VectorXd LogisticPotential::minimize_tilted(const Eigen::VectorXd& tilt) const {
  return newton_minimize(
      Eigen::VectorXd::Zero(dim_),
      [&](const Eigen::VectorXd& x) { return value(x) + tilt.dot(x); },
      [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return grad(x) + tilt; },
      [&](const Eigen::VectorXd& x) -> Eigen::MatrixXd { return hess(x); },
      kGradTol, kMaxNewtonIters, "logistic tilted minimize");
}

}  // namespace dmcmc
