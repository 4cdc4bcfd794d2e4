#include "rsmv/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace rsmv {

namespace {

void require_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("kappa must be positive and finite");
}

void require_epsilon(double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("epsilon must be nonnegative and finite");
}

double quad_form(const MarketModel& m, const Vector& x) {
  return (m.chol().triangularView<Eigen::Upper>() * x).squaredNorm();
}

Vector eigenvalues(const MarketModel& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.cov(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

bool tilt_vanishes(const MarketInvariants& inv) {
  const double scale = std::abs(inv.c) + inv.b * inv.b / inv.a;
  return inv.d() <= 1e-13 * std::max(scale, 1e-300);
}

}  // namespace

MarketInvariants market_invariants(const MarketModel& m) {
  MarketInvariants inv;
  const Vector e = Vector::Ones(m.n());
  inv.inv_e = m.solve(e);
  inv.inv_r = m.solve(m.mean());
  inv.a = e.dot(inv.inv_e);
  inv.b = e.dot(inv.inv_r);
  inv.c = m.mean().dot(inv.inv_r);
  return inv;
}

Portfolio equal_weight(Eigen::Index n) {
  Portfolio p;
  p.weights = Vector::Constant(n, 1.0 / static_cast<double>(n));
  p.label = PortfolioLabel::EW;
  return p;
}

Portfolio min_variance(const MarketModel& m) {
  const MarketInvariants inv = market_invariants(m);
  Portfolio p;
  p.weights = inv.inv_e / inv.a;
  p.label = PortfolioLabel::MIN;
  p.value = 1.0 / inv.a;
  return p;
}

Portfolio mean_variance(const MarketModel& m, double kappa) {
  require_kappa(kappa);
  const MarketInvariants inv = market_invariants(m);
  Portfolio p;
  p.weights = inv.inv_e / inv.a + inv.tilt() / (2.0 * kappa);
  p.label = PortfolioLabel::MV;
  const double t = 2.0 * kappa - inv.b;
  p.value = t * t / (4.0 * kappa * inv.a) - inv.c / (4.0 * kappa);
  return p;
}

RhoFunction::RhoFunction(const MarketModel& m, double kappa) : kappa_(kappa) {
  require_kappa(kappa);
  const Vector e = Vector::Ones(m.n());
  const Vector r_hat = -2.0 * mean_variance(m, kappa).weights;
  const auto w = m.chol().triangularView<Eigen::Upper>();
  // S = L L^T with L = W^T, hence L^T r_hat = W r_hat and L^-1 e = W^-T e.
  const Vector u = w * r_hat;
  const Vector z = m.chol().transpose().triangularView<Eigen::Lower>().solve(e);
  a_ = z.squaredNorm();
  uu_ = u.squaredNorm();
  uw_ = u.dot(z);
  ww_ = a_;
  s_ = r_hat.sum();
}

double RhoFunction::value(double rho) const {
  const double kr = kappa_ * rho;
  const double g = 1.0 / (kr * a_);
  const double q = uu_ + 2.0 * s_ * uw_ * g + s_ * s_ * ww_ * g * g;
  const double den = 1.0 + kr;
  return kappa_ * kappa_ * q / (4.0 * den * den);
}

double RhoFunction::derivative(double rho) const {
  const double kr = kappa_ * rho;
  const double g = 1.0 / (kr * a_);
  const double q = uu_ + 2.0 * s_ * uw_ * g + s_ * s_ * ww_ * g * g;
  const double dq = (2.0 * s_ * uw_ + 2.0 * s_ * s_ * ww_ * g) * (-g / rho);
  const double den = 1.0 + kr;
  return kappa_ * kappa_ / 4.0 * (-2.0 * kappa_ * q / (den * den * den) + dq / (den * den));
}

RmvDecomposition rho_star(const MarketModel& m, double kappa, double epsilon) {
  require_kappa(kappa);
  require_epsilon(epsilon);
  RmvDecomposition out;
  const MarketInvariants inv = market_invariants(m);
  out.mv_equals_min = tilt_vanishes(inv);
  if (epsilon == 0.0) {
    out.rho_star = std::numeric_limits<double>::infinity();
    out.alpha = 1.0;
    out.kappa_effective = kappa;
    return out;
  }

  const RhoFunction f(m, kappa);
  const double target = epsilon / 4.0;
  double lo = 1e-12, hi = 1e12;
  while (f.value(lo) < target && lo > 1e-300) lo *= 1e-6;
  while (f.value(hi) > target && hi < 1e300) hi *= 1e6;

  double rho = std::sqrt(lo) * std::sqrt(hi);
  const double tol = 1e-12 * std::max(1.0, epsilon);
  int it = 0;
  for (; it < 500; ++it) {
    const double g = f.value(rho) - target;
    if (g > 0.0) lo = rho; else hi = rho;
    if (std::abs(g) <= 1e-3 * tol || hi / lo - 1.0 < 1e-15) break;
    const double dg = f.derivative(rho);
    double next = rho - g / dg;
    if (!(dg < 0.0) || !(next > lo && next < hi)) next = std::sqrt(lo) * std::sqrt(hi);
    rho = next;
  }
  out.iterations = it;
  out.rho_star = rho;
  const double kr = kappa * rho;
  out.alpha = kr / (1.0 + kr);
  out.kappa_effective = kappa + 1.0 / rho;
  return out;
}

Portfolio rmv(const MarketModel& m, double kappa, double epsilon) {
  const RmvDecomposition dec = rho_star(m, kappa, epsilon);
  const Portfolio x_mv = mean_variance(m, kappa);
  const Portfolio x_min = min_variance(m);
  Portfolio p;
  p.label = PortfolioLabel::RMV;
  if (epsilon == 0.0) {
    p.weights = x_mv.weights;
  } else if (dec.mv_equals_min) {
    p.weights = x_min.weights;
  } else {
    p.weights = dec.alpha * x_mv.weights + (1.0 - dec.alpha) * x_min.weights;
  }
  p.value = rmv_objective(m, kappa, epsilon, p.weights);
  return p;
}

Portfolio wvar(const MarketModel& m, double epsilon) {
  require_epsilon(epsilon);
  const MarketInvariants inv = market_invariants(m);
  const double threshold = inv.c - inv.b * inv.b / inv.a;
  if (!(epsilon > threshold)) {
    std::ostringstream os;
    os << "epsilon below WVaR threshold " << threshold;
    throw WvarThresholdError(os.str(), threshold);
  }
  const double root = std::sqrt(inv.b * inv.b - inv.a * (inv.c - epsilon));
  Portfolio p;
  p.label = PortfolioLabel::WVaR;
  p.weights = inv.inv_e / inv.a + inv.tilt() / root;
  p.value = (-inv.b + root) / inv.a;
  return p;
}

double wvar_equivalent_kappa(const MarketModel& m, double epsilon) {
  const MarketInvariants inv = market_invariants(m);
  const double disc = inv.b * inv.b - inv.a * (inv.c - epsilon);
  if (!(disc > 0.0)) throw std::invalid_argument("epsilon below WVaR threshold");
  return 0.5 * std::sqrt(disc);
}

Portfolio unified(const MarketModel& m, double kappa, double alpha) {
  require_kappa(kappa);
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
  const MarketInvariants inv = market_invariants(m);
  Portfolio p;
  p.label = PortfolioLabel::UNIFIED;
  p.weights = inv.inv_e / inv.a + (alpha / (2.0 * kappa)) * inv.tilt();
  return p;
}

double alpha_wvar(const MarketModel& m, double kappa, double epsilon) {
  return kappa / wvar_equivalent_kappa(m, epsilon);
}

Portfolio l2_mv(const MarketModel& m, double kappa, double epsilon) {
  require_kappa(kappa);
  require_epsilon(epsilon);
  Matrix cov = m.cov();
  cov.diagonal().array() += std::sqrt(epsilon) / kappa;
  const MarketModel ridge = MarketModel::from_moments(m.mean(), std::move(cov));
  Portfolio p = mean_variance(ridge, kappa);
  p.label = PortfolioLabel::L2MV;
  p.value = l2_objective(m, kappa, epsilon, p.weights);
  return p;
}

double ew_distance_bound(const MarketModel& m, double kappa, double epsilon) {
  require_kappa(kappa);
  require_epsilon(epsilon);
  const Vector lam = eigenvalues(m);
  const double l_min = lam(0), l_max = lam(lam.size() - 1);
  const double n = static_cast<double>(m.n());
  const double c = m.mean().norm() / (2.0 * kappa) + l_max * (l_max - l_min) / (std::sqrt(n) * l_min);
  return c / (l_min + std::sqrt(epsilon) / kappa);
}

double min_ew_bound(const MarketModel& m) {
  const Vector lam = eigenvalues(m);
  const double cond = lam(lam.size() - 1) / lam(0);
  return cond * (cond - 1.0) / static_cast<double>(m.n());
}

double epsilon_for_combination(const MarketModel& m, double kappa, double beta) {
  require_kappa(kappa);
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  if (beta == 1.0) return std::numeric_limits<double>::infinity();
  const Vector lam = eigenvalues(m);
  const double l_min = lam(0), l_max = lam(lam.size() - 1);
  const double n = static_cast<double>(m.n());
  const double c = m.mean().norm() / (2.0 * kappa) + l_max * (l_max - l_min) / (std::sqrt(n) * l_min);
  const Vector ew = Vector::Constant(m.n(), 1.0 / n);
  const double dist = (mean_variance(m, kappa).weights - ew).norm();
  if (!(dist > 0.0)) throw std::invalid_argument("x_MV coincides with the 1/N portfolio");
  const double target = (1.0 - beta) * dist;
  const double root = kappa * (c / target - l_min);
  if (root <= 0.0) return 0.0;
  return root * root;
}

double mv_objective(const MarketModel& m, double kappa, const Vector& x) {
  return kappa * quad_form(m, x) - m.mean().dot(x);
}

double rmv_objective(const MarketModel& m, double kappa, double epsilon, const Vector& x) {
  const double v = quad_form(m, x);
  return kappa * v + std::sqrt(epsilon) * std::sqrt(v) - m.mean().dot(x);
}

double wvar_objective(const MarketModel& m, double epsilon, const Vector& x) {
  return std::sqrt(epsilon) * std::sqrt(quad_form(m, x)) - m.mean().dot(x);
}

double l2_objective(const MarketModel& m, double kappa, double epsilon, const Vector& x) {
  return kappa * quad_form(m, x) - m.mean().dot(x) + std::sqrt(epsilon) * x.squaredNorm();
}

std::vector<FrontierPoint> frontier(const MarketModel& m, const std::vector<double>& kappa_grid) {
  std::vector<FrontierPoint> out;
  out.reserve(kappa_grid.size());
  for (double k : kappa_grid) {
    const Vector x = mean_variance(m, k).weights;
    out.push_back({k, quad_form(m, x), m.mean().dot(x)});
  }
  return out;
}

std::vector<FrontierPoint> rmv_frontier(const MarketModel& m, const std::vector<double>& kappa_grid,
                                        double epsilon) {
  std::vector<FrontierPoint> out;
  out.reserve(kappa_grid.size());
  for (double k : kappa_grid) {
    const Vector x = rmv(m, k, epsilon).weights;
    out.push_back({k, quad_form(m, x), m.mean().dot(x)});
  }
  return out;
}

}  // namespace rsmv
