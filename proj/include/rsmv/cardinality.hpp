#pragma once

#include <limits>
#include <string_view>
#include <vector>

#include "rsmv/dc_solver.hpp"
#include "rsmv/exact_oracle.hpp"
#include "rsmv/market_model.hpp"

namespace rsmv {

/// Equicorrelated market with a uniform per-asset cost.
struct CardScenario {
  double kappa = 1.0;
  double sigma = 0.1;
  double rho = 0.3;
  double delta = 0.0;  // sqrt(eps) / (kappa sigma^2)
  double phi = 0.0;
  std::vector<double> sorted_returns;  // descending

  int n() const { return static_cast<int>(sorted_returns.size()); }
  void validate() const;
  /// Copy with returns sorted in descending order.
  static CardScenario make(double kappa, double sigma, double rho, double delta, double phi,
                           std::vector<double> returns);
  double epsilon() const;
};

/// Set objective of the l2^2 model on support S (indices into `raw_returns`).
double v_set(const CardScenario& sc, const std::vector<int>& support, const Vector& raw_returns);

/// Upper bound from the 1/s strategy on the s highest returns.
double v_upper(const CardScenario& sc, int s);

/// argmin of v_upper over 1..N; ties go to the smaller s.
int best_s(const CardScenario& sc);

struct TransitionBounds {
  int s_star = 1;
  double b_minus = std::numeric_limits<double>::infinity();
  double b_plus = std::numeric_limits<double>::infinity();
};

TransitionBounds transition_bounds(const CardScenario& sc, int s_star);

/// Closed form for r_[i] = r - dr (i - 1).
TransitionBounds linear_returns_bounds(const CardScenario& sc, int s_star, double dr);

enum class ConditionClass { C1Shrink, C2Same, C3Grow, Indeterminate };
std::string_view to_string(ConditionClass c);

/// First matching interval test in the order C1, C2, C3.
ConditionClass classify_delta(const CardScenario& sc, int s_star, double delta_increment);

enum class SurfaceBackend { Exact, Pdca };

struct SurfaceCell {
  double epsilon = 0.0;
  double phi = 0.0;
  int cardinality = 0;
  /// Unscaled objective kappa x'Sx + sqrt(eps) sqrt(x'Sx) - r'x + sum of phi over the support.
  double objective = 0.0;
};

struct SurfaceOptions {
  SurfaceBackend backend = SurfaceBackend::Exact;
  int workers = 1;
  SolverConfig solver;
  std::optional<double> t;
};

/// Row-major over (epsilon, phi): cell (i, j) at index i * phi_grid.size() + j.
std::vector<SurfaceCell> cardinality_surface(const MarketModel& m, double kappa,
                                             const std::vector<double>& epsilon_grid,
                                             const std::vector<double>& phi_grid,
                                             const SurfaceOptions& options = {});

/// True when the cardinality along some fixed-phi slice strictly decreases and later strictly increases.
bool has_nonmonotone_slice(const std::vector<SurfaceCell>& cells, std::size_t n_eps, std::size_t n_phi);

}  // namespace rsmv
