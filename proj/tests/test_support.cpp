#include "test_support.hpp"

#include <cmath>
#include <sstream>

namespace rsmv::tu {

Matrix random_spd(std::mt19937_64& rng, int n, double lo, double hi) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(std::log(lo), std::log(hi));
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Vector eig(n);
  for (int i = 0; i < n; ++i) eig(i) = std::exp(unif(rng));
  Matrix s = q * eig.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

MarketModel random_market(std::uint64_t seed, int n, double mu, double sd) {
  std::mt19937_64 rng(seed * 7919 + 17);
  std::normal_distribution<double> gauss(mu, sd);
  Matrix cov = random_spd(rng, n);
  Vector mean(n);
  for (int i = 0; i < n; ++i) mean(i) = gauss(rng);
  return MarketModel::from_moments(mean, cov);
}

Vector project_out_e(const Vector& g) { return g.array() - g.mean(); }

Vector minimize_on_budget(const Objective& f, const Gradient& grad, Vector x, int max_iter) {
  const Eigen::Index n = x.size();
  x /= x.sum();
  if (n == 1) return x;
  // Orthonormal basis of {d : e^T d = 0}.
  Matrix e = Matrix::Zero(n, n);
  e.col(0).setOnes();
  for (Eigen::Index i = 1; i < n; ++i) e(i, i) = 1.0;
  const Matrix q = Eigen::HouseholderQR<Matrix>(e).householderQ();
  const Matrix z = q.rightCols(n - 1);

  for (int it = 0; it < max_iter; ++it) {
    const Vector g = z.transpose() * grad(x);
    if (g.norm() < 1e-15) break;
    const double h = 1e-6;
    Matrix hess(n - 1, n - 1);
    for (Eigen::Index k = 0; k < n - 1; ++k) {
      const Vector gp = z.transpose() * grad(x + h * z.col(k));
      const Vector gm = z.transpose() * grad(x - h * z.col(k));
      hess.col(k) = (gp - gm) / (2.0 * h);
    }
    hess = 0.5 * (hess + hess.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(hess);
    Vector ev = es.eigenvalues().cwiseMax(1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()));
    const Vector step = -es.eigenvectors() * (es.eigenvectors().transpose() * g).cwiseQuotient(ev);
    const double f0 = f(x);
    double a = 1.0;
    Vector xn = x + a * (z * step);
    while (f(xn) > f0 + 1e-4 * a * g.dot(step) && a > 1e-12) {
      a *= 0.5;
      xn = x + a * (z * step);
    }
    if ((xn - x).norm() < 1e-16) break;
    x = xn;
  }
  return x;
}

double golden_min(const std::function<double(double)>& f, double a, double b, int iters) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

void RunAudit::record(const DcProblem& p, const SolveReport& r) {
  bool dead_zone_bad = false;
  const bool dc_converged_run = r.solver == "pdca" && r.status == SolveStatus::Converged;
  // The support property is only promised for t < min(1/n, phi_min / (2 L)), i.e. below 2 * t_default.
  const bool premise = p.t < 2.0 * t_default(p);
  if (dc_converged_run) dead_zone_bad = !lifted_stationarity_check(r.portfolio.weights, p).dead_zone_ok;
  long descent = 0, feas = 0, newton = 0;
  for (const auto& e : r.trace) {
    if (e.descent_margin < -1e-10) ++descent;
    if (e.budget_error > 1e-10) ++feas;
    newton += e.newton_iterations;
  }
  std::lock_guard<std::mutex> lock(mutex);
  ++runs;
  outer_iterations += static_cast<long>(r.trace.size());
  descent_violations += descent;
  feasibility_violations += feas;
  newton_steps += newton;
  cg_rule_misses += r.cg_rule_misses;
  if (dc_converged_run && premise) {
    ++dc_converged;
    if (dead_zone_bad) ++dead_zone_violations;
  } else if (dc_converged_run && dead_zone_bad) {
    ++dead_zone_large_t;
  }
}

std::string RunAudit::summary() {
  std::lock_guard<std::mutex> lock(mutex);
  std::ostringstream os;
  os << "runs=" << runs << " outer_iterations=" << outer_iterations << " descent_violations=" << descent_violations
     << " feasibility_violations=" << feasibility_violations << " converged_dc_runs=" << dc_converged
     << " dead_zone_violations=" << dead_zone_violations << " dead_zone_large_t=" << dead_zone_large_t
     << " newton_steps=" << newton_steps
     << " cg_rule_misses=" << cg_rule_misses;
  return os.str();
}

RunAudit& audit() {
  static RunAudit a;
  return a;
}

void install_audit() {
  set_solve_observer([](const DcProblem& p, const SolveReport& r) { audit().record(p, r); });
}

}  // namespace rsmv::tu
