#include "rsmv/cardinality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

#include "rsmv/closed_form.hpp"

namespace rsmv {

namespace {

/// Prefix sums R_s of the sorted returns, R_0 = 0.
std::vector<double> prefix_sums(const CardScenario& sc) {
  std::vector<double> r(sc.sorted_returns.size() + 1, 0.0);
  for (std::size_t i = 0; i < sc.sorted_returns.size(); ++i) r[i + 1] = r[i] + sc.sorted_returns[i];
  return r;
}

}  // namespace

void CardScenario::validate() const {
  const int n_assets = n();
  if (n_assets < 1) throw std::invalid_argument("scenario needs at least one asset");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const double lower = n_assets > 1 ? -1.0 / (n_assets - 1) : -1.0;
  if (!(rho > lower && rho < 1.0)) throw std::invalid_argument("rho outside (-1/(N-1), 1)");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  if (!(phi >= 0.0)) throw std::invalid_argument("phi must be nonnegative");
  if (!std::is_sorted(sorted_returns.begin(), sorted_returns.end(), std::greater<>()))
    throw std::invalid_argument("returns must be sorted in descending order");
}

CardScenario CardScenario::make(double kappa, double sigma, double rho, double delta, double phi,
                                std::vector<double> returns) {
  std::sort(returns.begin(), returns.end(), std::greater<>());
  CardScenario sc{kappa, sigma, rho, delta, phi, std::move(returns)};
  sc.validate();
  return sc;
}

double CardScenario::epsilon() const {
  const double root = delta * kappa * sigma * sigma;
  return root * root;
}

double v_set(const CardScenario& sc, const std::vector<int>& support, const Vector& raw_returns) {
  if (support.empty()) throw std::invalid_argument("support must be nonempty");
  const double k = static_cast<double>(support.size());
  const double ks2 = sc.kappa * sc.sigma * sc.sigma;
  double sum = 0.0, sq = 0.0;
  for (int i : support) {
    sum += raw_returns(i);
    sq += raw_returns(i) * raw_returns(i);
  }
  return ks2 * (1.0 - sc.rho + sc.rho * k + sc.delta) / k +
         (sum * sum - k * sq) / (4.0 * ks2 * (1.0 - sc.rho + sc.delta) * k) - sum / k + sc.phi * k;
}

double v_upper(const CardScenario& sc, int s) {
  if (s < 1 || s > sc.n()) throw std::invalid_argument("s must lie in 1..N");
  const double ks2 = sc.kappa * sc.sigma * sc.sigma;
  double rs = 0.0;
  for (int i = 0; i < s; ++i) rs += sc.sorted_returns[i];
  const double ds = static_cast<double>(s);
  return ks2 * (1.0 - sc.rho + sc.rho * ds + sc.delta) / ds - rs / ds + sc.phi * ds;
}

int best_s(const CardScenario& sc) {
  int best = 1;
  double best_v = v_upper(sc, 1);
  for (int s = 2; s <= sc.n(); ++s) {
    const double v = v_upper(sc, s);
    if (v < best_v) {
      best_v = v;
      best = s;
    }
  }
  return best;
}

TransitionBounds transition_bounds(const CardScenario& sc, int s_star) {
  const int n = sc.n();
  if (s_star < 1 || s_star > n) throw std::invalid_argument("s_star must lie in 1..N");
  const std::vector<double> r = prefix_sums(sc);
  const double ks2 = sc.kappa * sc.sigma * sc.sigma;
  const double base = sc.rho - sc.delta - 1.0;
  const double s = static_cast<double>(s_star);
  TransitionBounds tb;
  tb.s_star = s_star;
  if (s_star > 1) {
    double m = std::numeric_limits<double>::infinity();
    for (int l = 1; l < s_star; ++l) {
      const double dl = static_cast<double>(l);
      m = std::min(m, (dl * r[s_star] - s * r[l]) / (s - dl) - sc.phi * s * dl);
    }
    tb.b_minus = base - m / ks2;
  }
  if (s_star < n) {
    double m = std::numeric_limits<double>::infinity();
    for (int l = s_star + 1; l <= n; ++l) {
      const double dl = static_cast<double>(l);
      m = std::min(m, (dl * r[s_star] - s * r[l]) / (dl - s) + sc.phi * s * dl);
    }
    tb.b_plus = base + m / ks2;
  }
  return tb;
}

TransitionBounds linear_returns_bounds(const CardScenario& sc, int s_star, double dr) {
  const double ks2 = sc.kappa * sc.sigma * sc.sigma;
  const double base = sc.rho - sc.delta - 1.0;
  const double s = static_cast<double>(s_star);
  TransitionBounds tb;
  tb.s_star = s_star;
  if (s_star > 1) tb.b_minus = base + s * (s - 1.0) * (dr / 2.0 + sc.phi) / ks2;
  if (s_star < sc.n()) tb.b_plus = base + s * (s + 1.0) * (dr / 2.0 + sc.phi) / ks2;
  return tb;
}

std::string_view to_string(ConditionClass c) {
  switch (c) {
    case ConditionClass::C1Shrink: return "C1_shrink";
    case ConditionClass::C2Same: return "C2_same";
    case ConditionClass::C3Grow: return "C3_grow";
    case ConditionClass::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

ConditionClass classify_delta(const CardScenario& sc, int s_star, double delta_increment) {
  if (!(delta_increment >= 0.0)) throw std::invalid_argument("delta increment must be nonnegative");
  const TransitionBounds tb = transition_bounds(sc, s_star);
  const double d = delta_increment;
  // With s* = 1 there is no smaller count, whatever the infinite B- would allow.
  if (s_star > 1 && d > 0.0 && d <= std::min(tb.b_minus, tb.b_plus)) return ConditionClass::C1Shrink;
  if (std::max(0.0, tb.b_minus) <= d && d <= tb.b_plus) return ConditionClass::C2Same;
  if (d > 0.0 && d >= std::max({0.0, tb.b_minus, tb.b_plus})) return ConditionClass::C3Grow;
  return ConditionClass::Indeterminate;
}

std::vector<SurfaceCell> cardinality_surface(const MarketModel& m, double kappa,
                                             const std::vector<double>& epsilon_grid,
                                             const std::vector<double>& phi_grid,
                                             const SurfaceOptions& options) {
  if (epsilon_grid.empty() || phi_grid.empty()) throw std::invalid_argument("grids must be nonempty");
  const std::size_t total = epsilon_grid.size() * phi_grid.size();
  if (options.backend == SurfaceBackend::Exact) {
    const auto count = support_count(static_cast<int>(m.n()), static_cast<int>(m.n()));
    if (m.n() > 20 || count > kEnumerationBudget)
      throw EnumerationBudgetError("exact surface needs " + std::to_string(count) +
                                       " supports per cell; use the pdca backend",
                                   count);
  }
  std::vector<SurfaceCell> cells(total);
  auto eval = [&](std::size_t idx) {
    const double eps = epsilon_grid[idx / phi_grid.size()];
    const double phi = phi_grid[idx % phi_grid.size()];
    const Vector phi_vec = Vector::Constant(m.n(), phi);
    SurfaceCell& c = cells[idx];
    c.epsilon = eps;
    c.phi = phi;
    if (options.backend == SurfaceBackend::Exact) {
      const SupportSolution s = solve_exact(m, kappa, eps, phi_vec);
      c.cardinality = static_cast<int>(support_of(s.weights).size());
      c.objective = s.objective;
    } else {
      const DcProblem p = build_problem(m, kappa, eps, phi_vec, options.t);
      const SolveReport r = solve_pdca(p, options.solver);
      c.cardinality = r.cardinality;
      c.objective = 2.0 * kappa * r.rsmv_objective;
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) eval(i);
    return cells;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = static_cast<std::size_t>(w); i < total; i += static_cast<std::size_t>(workers))
          eval(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return cells;
}

bool has_nonmonotone_slice(const std::vector<SurfaceCell>& cells, std::size_t n_eps, std::size_t n_phi) {
  for (std::size_t j = 0; j < n_phi; ++j) {
    bool decreased = false;
    for (std::size_t i = 1; i < n_eps; ++i) {
      const int prev = cells[(i - 1) * n_phi + j].cardinality;
      const int cur = cells[i * n_phi + j].cardinality;
      if (cur < prev) decreased = true;
      else if (cur > prev && decreased) return true;
    }
  }
  return false;
}

}  // namespace rsmv
