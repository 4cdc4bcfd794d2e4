#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsmv/market_model.hpp"
#include "rsmv/portfolio.hpp"

namespace rsmv {

/// Raised by wvar() when epsilon does not exceed r^T S^-1 r - (r^T S^-1 e)^2 / e^T S^-1 e.
class WvarThresholdError : public std::invalid_argument {
 public:
  WvarThresholdError(const std::string& what, double threshold)
      : std::invalid_argument(what), threshold_(threshold) {}
  double threshold() const { return threshold_; }

 private:
  double threshold_;
};

/// Scalars shared by the closed-form portfolios, all computed through the
/// Cholesky factor of the market.
struct MarketInvariants {
  Vector inv_e;     // S^-1 e
  Vector inv_r;     // S^-1 r
  double a = 0.0;   // e^T S^-1 e
  double b = 0.0;   // e^T S^-1 r
  double c = 0.0;   // r^T S^-1 r
  /// c - b^2 / a >= 0; zero iff r lies in span{e}.
  double d() const { return std::max(c - b * b / a, 0.0); }
  /// Projected tilt P r = S^-1 r - S^-1 e (b / a), so that x_MV = x_MIN + P r / (2 kappa).
  Vector tilt() const { return inv_r - inv_e * (b / a); }
};

MarketInvariants market_invariants(const MarketModel& m);

Portfolio equal_weight(Eigen::Index n);
Portfolio min_variance(const MarketModel& m);
Portfolio mean_variance(const MarketModel& m, double kappa);

/// Root of f(rho) = eps / 4 plus the derived RMV mixing weight.
struct RmvDecomposition {
  double rho_star = std::numeric_limits<double>::infinity();
  double alpha = 1.0;  // kappa rho / (1 + kappa rho)
  double kappa_effective = 0.0;  // kappa + 1 / rho
  /// r lies in span{e}: x_MV = x_MIN and every RMV portfolio equals x_MIN.
  bool mv_equals_min = false;
  int iterations = 0;
};

/// f(rho) = kappa^2 / (4 (1 + kappa rho)^2) ||L^T r_hat + (r_hat^T e) L^-1 e / (kappa rho e^T S^-1 e)||^2
/// with r_hat = -2 x_MV and S = L L^T.
class RhoFunction {
 public:
  RhoFunction(const MarketModel& m, double kappa);
  double value(double rho) const;
  double derivative(double rho) const;
  double kappa() const { return kappa_; }

 private:
  double kappa_;
  double a_;
  double uu_, uw_, ww_, s_;  // |L^T r_hat|^2, <L^T r_hat, L^-1 e>, |L^-1 e|^2, r_hat^T e
};

RmvDecomposition rho_star(const MarketModel& m, double kappa, double epsilon);

Portfolio rmv(const MarketModel& m, double kappa, double epsilon);

Portfolio wvar(const MarketModel& m, double epsilon);
/// Risk aversion at which the MV portfolio coincides with the WVaR portfolio.
double wvar_equivalent_kappa(const MarketModel& m, double epsilon);

/// x = (alpha / 2) S_hat r + x_MIN.
Portfolio unified(const MarketModel& m, double kappa, double alpha);
/// alpha for the WVaR row of the unified family.
double alpha_wvar(const MarketModel& m, double kappa, double epsilon);

/// Closed-form minimizer of kappa x^T S x - r^T x + sqrt(eps) ||x||^2 on e^T x = 1.
Portfolio l2_mv(const MarketModel& m, double kappa, double epsilon);

/// Upper bound on ||x_l2mv - e/n||.
double ew_distance_bound(const MarketModel& m, double kappa, double epsilon);
/// cond(S) (cond(S) - 1) / n, a bound on ||x_MIN - e/n||.
double min_ew_bound(const MarketModel& m);
/// epsilon at which the l2-regularized bound equals (1 - beta) ||x_MV - e/n||.
double epsilon_for_combination(const MarketModel& m, double kappa, double beta);

/// Objectives evaluated directly from weights.
double mv_objective(const MarketModel& m, double kappa, const Vector& x);
double rmv_objective(const MarketModel& m, double kappa, double epsilon, const Vector& x);
double wvar_objective(const MarketModel& m, double epsilon, const Vector& x);
double l2_objective(const MarketModel& m, double kappa, double epsilon, const Vector& x);

struct FrontierPoint {
  double kappa = 0.0;
  double variance = 0.0;
  double expected_return = 0.0;
};

std::vector<FrontierPoint> frontier(const MarketModel& m, const std::vector<double>& kappa_grid);
std::vector<FrontierPoint> rmv_frontier(const MarketModel& m, const std::vector<double>& kappa_grid,
                                        double epsilon);

}  // namespace rsmv
