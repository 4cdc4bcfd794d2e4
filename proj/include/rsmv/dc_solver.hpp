#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rsmv/market_model.hpp"
#include "rsmv/portfolio.hpp"
#include "rsmv/prox.hpp"

namespace rsmv {

/// Scaled solver data: minimize 1/2 |Wx|^2 + lam |Wx| - r_tilde^T x plus the
/// sparsity term on e^T x = 1.
struct DcProblem {
  Matrix w;  // upper Cholesky factor, W^T W = Sigma
  Vector r_tilde;
  Vector phi_tilde;
  double lam = 0.0;
  double t = 0.0;
  bool t_auto = false;

  // Unscaled inputs kept for reporting.
  double kappa = 0.5;
  double epsilon = 0.0;
  Vector phi;
  std::shared_ptr<const MarketModel> market;

  Eigen::Index n() const { return r_tilde.size(); }
  void validate() const;
};

/// Radius of the ball used for the Lipschitz surrogate in t_default.
inline constexpr double kLipschitzRadius = 10.0;

/// L_hat = |W|_2^2 R + lam |W|_2 + |r_tilde|.
double lipschitz_estimate(const DcProblem& p, double radius = kLipschitzRadius);
/// 0.5 * min(1/n, phi_min / (2 L_hat)).
double t_default(const DcProblem& p, double radius = kLipschitzRadius);

/// Throws std::invalid_argument unless kappa > 0, epsilon >= 0 and every phi_i > 0.
DcProblem build_problem(const MarketModel& m, double kappa, double epsilon, const Vector& phi,
                        std::optional<double> t = std::nullopt);

struct CappedL1Value {
  double total = 0.0;
  double p = 0.0;
  double q = 0.0;
};
CappedL1Value capped_l1(const Vector& x, const Vector& phi_tilde, double t);

/// Subgradient of q_t: phi/t where x_i >= t, -phi/t where x_i <= -t, else 0.
Vector q_select(const Vector& x, const Vector& phi_tilde, double t);

/// 1/2 |Wx|^2 + lam |Wx| - r_tilde^T x.
double smooth_part(const DcProblem& p, const Vector& x);
/// smooth_part + capped-l1 term.
double dc_objective(const DcProblem& p, const Vector& x);
/// smooth_part + p_t (the convex l1 model).
double l1_objective(const DcProblem& p, const Vector& x);
/// smooth_part + sum of phi_tilde over the support (support_of semantics).
double rsmv_objective(const DcProblem& p, const Vector& x);
/// Gradient of smooth_part.
Vector smooth_gradient(const DcProblem& p, const Vector& x);

struct NewtonConfig {
  double mu = 1e-4;
  double eta_bar = 0.5;
  double tau = 0.5;
  double tau1 = 0.1;
  double tau2 = 0.1;
  double beta = 0.5;
  int max_newton = 200;
  int max_linesearch = 50;
  /// Accept the subproblem once |grad h| falls below this floor.
  double inner_floor = 1e-12;
  /// Accept x once its residual is at most accept_ratio * sigma * |x - x^k|.
  /// Zero forces a solve down to inner_floor.
  double accept_ratio = 0.25;
  /// ...and once the certified gap g_k(x) - (-h + offset) is at most this.
  double gap_tol = 1e-9;
};

struct CgConfig {
  int max_iter = 0;  // 0 means 2 * (n + 1)
  double base_tol = 0.5;
};

struct SolverConfig {
  /// With relative_sigma the three sigma values are multiples of |W|_2^2.
  bool relative_sigma = true;
  double sigma0 = 1e-2;
  double gamma = 1.25;
  double sigma_max = 1.0;
  double outer_tol = 1e-5;
  int max_outer = 5000;
  NewtonConfig newton;
  CgConfig cg;

  void validate() const;
};

/// Outer iterate of the proximal DC loop.
struct OuterIterate {
  Vector x;
  Vector q;
  double sigma = 1.0;
  double f_value = 0.0;
};

struct NewtonState {
  Vector y;
  double v = 0.0;
  double grad_norm = 0.0;
};

/// Dual of the proximal subproblem at a fixed outer iterate.
class SubproblemDual {
 public:
  SubproblemDual(const DcProblem& prob, const OuterIterate& outer);

  double value(const Vector& y, double v) const;
  /// (prox_lam(y) - W prox(x_tilde), 1 - e^T prox(x_tilde)).
  Vector gradient(const Vector& y, double v) const;
  /// x_tilde = x^k - (W^T y + e v - q - r_tilde) / sigma.
  Vector x_tilde(const Vector& y, double v) const;
  /// Primal point prox(x_tilde) before normalization.
  Vector primal(const Vector& y, double v) const;
  const Vector& thresholds() const { return w_; }
  double sigma() const { return sigma_; }

  /// Primal subproblem objective g_k on e^T x = 1.
  double primal_objective(const Vector& x) const;
  /// Strong-duality constant: g_k* = -h* + (sigma/2)|x^k|^2.
  double dual_offset() const;

  const DcProblem& problem() const { return prob_; }
  const OuterIterate& outer() const { return outer_; }

 private:
  friend class NewtonOperator;
  const DcProblem& prob_;
  const OuterIterate& outer_;
  double sigma_;
  Vector c_;  // q + r_tilde
  Vector w_;  // phi_tilde / (t sigma)
};

/// Generalized Hessian element of h_k at (y, v), applied matrix-free.
class NewtonOperator {
 public:
  NewtonOperator(const SubproblemDual& dual, const Vector& y, double v);

  Vector apply(const Vector& d) const;
  Vector diagonal() const;
  Matrix dense() const;
  Eigen::Index active_count() const { return static_cast<Eigen::Index>(active_.size()); }

 private:
  L2JacobianElement u_;
  std::vector<int> active_;
  Matrix w_active_;  // columns of W on the active set
  double sigma_;
  Eigen::Index n_;
};

double dual_objective(const NewtonState& s, const OuterIterate& outer, const DcProblem& prob);
Vector dual_gradient(const NewtonState& s, const OuterIterate& outer, const DcProblem& prob);
NewtonOperator newton_operator(const SubproblemDual& dual, const NewtonState& s);

/// Minimal-norm element of g + w .* sign(x) + s e over the free scalar s,
/// where coordinates with |x_i| <= zero_tol contribute the interval [-w_i, w_i].
double min_norm_residual(const Vector& g, const Vector& w, const Vector& x, double zero_tol = 0.0);

enum class SolveStatus { Converged, MaxIter, NumericalFailure };
std::string_view to_string(SolveStatus s);

struct SubproblemResult {
  NewtonState state;
  Vector x_next;
  double delta_norm = 0.0;
  /// Primal-dual gap at exit, nonnegative up to rounding by weak duality.
  double gap = 0.0;
  int newton_iterations = 0;
  int cg_iterations = 0;
  /// Accepted Newton steps whose CG residual exceeded min(eta_bar, |grad h|^(1 + tau)).
  int cg_rule_misses = 0;
  bool ok = true;
  std::string message;
};

SubproblemResult solve_subproblem(const SubproblemDual& dual, const SolverConfig& config,
                                  const std::optional<NewtonState>& warm_start);

struct TraceEntry {
  double f = 0.0;
  double rel_step = 0.0;
  double sigma = 0.0;
  double descent_margin = 0.0;  // f_prev - f - sigma/4 |dx|^2
  int newton_iterations = 0;
  double budget_error = 0.0;  // |e^T x^{k+1} - 1|
};

struct SolveReport {
  Portfolio portfolio;
  double rsmv_objective = 0.0;
  double dc_objective = 0.0;
  int cardinality = 0;
  int outer_iterations = 0;
  int newton_iterations_total = 0;
  int cg_iterations_total = 0;
  double wall_time = 0.0;
  SolveStatus status = SolveStatus::Converged;
  std::string solver;
  std::string init;
  std::string message;
  std::vector<TraceEntry> trace;
  /// |x^{k+1} - x*| / |x^k - x*| over the last outer iterations.
  std::vector<double> tail_ratios;
  int descent_violations = 0;
  int cg_rule_misses = 0;
  double t = 0.0;
};

/// Receives every finished outer loop, the L1 pre-runs inside pdca and ac-pdca included.
/// May be called from several threads at once.
using SolveObserver = std::function<void(const DcProblem&, const SolveReport&)>;
void set_solve_observer(SolveObserver observer);

/// Proximal DC algorithm. Without x0 the L1 model solution is used as the
/// starting point (falling back to e/n).
SolveReport solve_pdca(const DcProblem& prob, const SolverConfig& config = {},
                       const std::optional<Vector>& x0 = std::nullopt);
/// Proximal point method on the convex weighted-l1 model, from e/n unless x0 is given.
SolveReport solve_l1mv(const DcProblem& prob, const SolverConfig& config = {},
                       const std::optional<Vector>& x0 = std::nullopt);
/// L1 model at tolerance 1e-3, then the DC loop on its support.
SolveReport solve_accelerated(const DcProblem& prob, const SolverConfig& config = {});

/// Minimal-norm residual of the lifted stationarity inclusion, and the
/// dead-zone property of the point.
struct StationarityCheck {
  double residual = 0.0;
  bool dead_zone_ok = true;
};
StationarityCheck lifted_stationarity_check(const Vector& x, const DcProblem& prob);

}  // namespace rsmv
