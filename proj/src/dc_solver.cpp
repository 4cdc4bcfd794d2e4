#include "rsmv/dc_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rsmv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Vector mul_w(const Matrix& w, const Vector& x) { return w.triangularView<Eigen::Upper>() * x; }

Vector mul_wt(const Matrix& w, const Vector& y) {
  return w.transpose().triangularView<Eigen::Lower>() * y;
}

/// Largest singular value of the upper factor by power iteration on W^T W.
double spectral_norm(const Matrix& w) {
  const Eigen::Index n = w.rows();
  if (n == 0) return 0.0;
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double est = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Vector u = mul_wt(w, mul_w(w, v));
    const double nu = u.norm();
    if (nu == 0.0) return 0.0;
    v = u / nu;
    if (std::abs(nu - est) <= 1e-13 * nu) {
      est = nu;
      break;
    }
    est = nu;
  }
  return std::sqrt(est);
}

/// Root of a nondecreasing piecewise-linear function whose kinks lie in `kinks`.
double piecewise_linear_root(const std::function<double(double)>& f, std::vector<double> kinks) {
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  if (kinks.empty()) kinks.push_back(0.0);

  double lo = kinks.front(), hi = kinks.back();
  double flo = f(lo), fhi = f(hi);
  // Outside the kinks f is affine; extend until the sign brackets a root.
  for (double step = 1.0 + std::abs(lo); flo > 0.0 && step < 1e300; step *= 2.0) {
    const double nlo = lo - step;
    const double fn = f(nlo);
    kinks.insert(kinks.begin(), nlo);
    lo = nlo;
    flo = fn;
  }
  for (double step = 1.0 + std::abs(hi); fhi < 0.0 && step < 1e300; step *= 2.0) {
    const double nhi = hi + step;
    const double fn = f(nhi);
    kinks.push_back(nhi);
    hi = nhi;
    fhi = fn;
  }
  if (flo > 0.0) return lo;
  if (fhi < 0.0) return hi;

  // Binary search for consecutive candidates with f(a) <= 0 <= f(b).
  std::size_t a = 0, b = kinks.size() - 1;
  double fa = flo, fb = fhi;
  while (b - a > 1) {
    const std::size_t mid = (a + b) / 2;
    const double fm = f(kinks[mid]);
    if (fm <= 0.0) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  if (fa == 0.0) return kinks[a];
  if (fb == fa) return kinks[a];
  return kinks[a] - fa * (kinks[b] - kinks[a]) / (fb - fa);
}

/// Preconditioned CG on (G + damping I) d = rhs.
struct CgResult {
  Vector d;
  int iterations = 0;
  double residual = 0.0;
};

CgResult conjugate_gradient(const NewtonOperator& g, double damping, const Vector& rhs, double tol,
                            int max_iter) {
  CgResult out;
  const Eigen::Index m = rhs.size();
  Vector precond = g.diagonal().array() + damping;
  precond = precond.cwiseMax(1e-300).cwiseInverse();
  out.d = Vector::Zero(m);
  Vector r = rhs;
  Vector z = precond.cwiseProduct(r);
  Vector p = z;
  double rz = r.dot(z);
  out.residual = r.norm();
  while (out.residual > tol && out.iterations < max_iter) {
    Vector ap = g.apply(p) + damping * p;
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    out.d += alpha * p;
    r -= alpha * ap;
    ++out.iterations;
    out.residual = r.norm();
    z = precond.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return out;
}

double sigma_scale(const DcProblem& p, const SolverConfig& c) {
  if (!c.relative_sigma) return 1.0;
  const double s = spectral_norm(p.w);
  return s * s;
}

DcProblem restrict_problem(const DcProblem& p, const std::vector<int>& s) {
  const auto k = static_cast<Eigen::Index>(s.size());
  DcProblem out;
  Matrix cov(k, k);
  if (p.market) {
    auto sub = std::make_shared<MarketModel>(p.market->submarket(s));
    out.w = sub->chol();
    out.market = std::move(sub);
  } else {
    Matrix full = p.w.transpose() * p.w;
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) cov(a, b) = full(s[a], s[b]);
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success) throw std::runtime_error("restricted covariance not PD");
    out.w = llt.matrixU();
  }
  out.r_tilde.resize(k);
  out.phi_tilde.resize(k);
  out.phi.resize(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    out.r_tilde(a) = p.r_tilde(s[a]);
    out.phi_tilde(a) = p.phi_tilde(s[a]);
    out.phi(a) = p.phi.size() == p.n() ? p.phi(s[a]) : 2.0 * p.kappa * p.phi_tilde(s[a]);
  }
  out.lam = p.lam;
  out.t = p.t;
  out.t_auto = p.t_auto;
  out.kappa = p.kappa;
  out.epsilon = p.epsilon;
  return out;
}

}  // namespace

void DcProblem::validate() const {
  const Eigen::Index n = r_tilde.size();
  if (n < 1) throw std::invalid_argument("problem needs at least one asset");
  if (w.rows() != n || w.cols() != n) throw std::invalid_argument("W shape mismatch");
  if (phi_tilde.size() != n) throw std::invalid_argument("phi length mismatch");
  if (!(lam >= 0.0)) throw std::invalid_argument("lam must be nonnegative");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if ((phi_tilde.array() < 0.0).any()) throw std::invalid_argument("phi must be nonnegative");
}

double lipschitz_estimate(const DcProblem& p, double radius) {
  const double wn = spectral_norm(p.w);
  return wn * wn * radius + p.lam * wn + p.r_tilde.norm();
}

double t_default(const DcProblem& p, double radius) {
  const double n = static_cast<double>(p.n());
  const double lh = lipschitz_estimate(p, radius);
  const double phi_min = p.phi_tilde.minCoeff();
  return 0.5 * std::min(1.0 / n, phi_min / (2.0 * lh));
}

DcProblem build_problem(const MarketModel& m, double kappa, double epsilon, const Vector& phi,
                        std::optional<double> t) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("epsilon must be nonnegative");
  if (phi.size() != m.n()) throw std::invalid_argument("phi length must equal the asset count");
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    if (!(phi(i) > 0.0) || !std::isfinite(phi(i))) {
      std::ostringstream os;
      os << "phi[" << i << "] must be positive";
      throw std::invalid_argument(os.str());
    }
  }
  DcProblem p;
  p.market = std::make_shared<MarketModel>(m);
  p.w = m.chol();
  p.r_tilde = m.mean() / (2.0 * kappa);
  p.phi_tilde = phi / (2.0 * kappa);
  p.lam = std::sqrt(epsilon) / (2.0 * kappa);
  p.kappa = kappa;
  p.epsilon = epsilon;
  p.phi = phi;
  if (t) {
    if (!(*t > 0.0)) throw std::invalid_argument("t must be positive");
    p.t = *t;
  } else {
    p.t = t_default(p);
    p.t_auto = true;
  }
  return p;
}

CappedL1Value capped_l1(const Vector& x, const Vector& phi_tilde, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  CappedL1Value v;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i));
    v.p += phi_tilde(i) * a / t;
    v.q += phi_tilde(i) * std::max({0.0, x(i) / t - 1.0, -x(i) / t - 1.0});
    v.total += phi_tilde(i) * std::min(a / t, 1.0);
  }
  return v;
}

Vector q_select(const Vector& x, const Vector& phi_tilde, double t) {
  Vector q = Vector::Zero(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) >= t) q(i) = phi_tilde(i) / t;
    else if (x(i) <= -t) q(i) = -phi_tilde(i) / t;
  }
  return q;
}

double smooth_part(const DcProblem& p, const Vector& x) {
  const double wx = mul_w(p.w, x).norm();
  return 0.5 * wx * wx + p.lam * wx - p.r_tilde.dot(x);
}

double dc_objective(const DcProblem& p, const Vector& x) {
  return smooth_part(p, x) + capped_l1(x, p.phi_tilde, p.t).total;
}

double l1_objective(const DcProblem& p, const Vector& x) {
  return smooth_part(p, x) + p.phi_tilde.dot(x.cwiseAbs()) / p.t;
}

double rsmv_objective(const DcProblem& p, const Vector& x) {
  double pen = 0.0;
  for (int i : support_of(x)) pen += p.phi_tilde(i);
  return smooth_part(p, x) + pen;
}

Vector smooth_gradient(const DcProblem& p, const Vector& x) {
  const Vector u = mul_w(p.w, x);
  const double nu = u.norm();
  const double scale = nu > 0.0 ? 1.0 + p.lam / nu : 1.0;
  return mul_wt(p.w, u) * scale - p.r_tilde;
}

void SolverConfig::validate() const {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be positive");
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  if (!(sigma_max >= sigma0)) throw std::invalid_argument("sigma_max must be at least sigma0");
  if (!(outer_tol > 0.0)) throw std::invalid_argument("outer_tol must be positive");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be positive");
  const auto& nw = newton;
  if (!(nw.mu > 0.0 && nw.mu < 0.5)) throw std::invalid_argument("mu must lie in (0, 1/2)");
  if (!(nw.eta_bar > 0.0 && nw.eta_bar < 1.0)) throw std::invalid_argument("eta_bar must lie in (0, 1)");
  if (!(nw.tau > 0.0 && nw.tau <= 1.0)) throw std::invalid_argument("tau must lie in (0, 1]");
  if (!(nw.tau1 > 0.0 && nw.tau1 < 1.0)) throw std::invalid_argument("tau1 must lie in (0, 1)");
  if (!(nw.tau2 > 0.0 && nw.tau2 < 1.0)) throw std::invalid_argument("tau2 must lie in (0, 1)");
  if (!(nw.beta > 0.0 && nw.beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(nw.accept_ratio >= 0.0)) throw std::invalid_argument("accept_ratio must be nonnegative");
  if (!(nw.gap_tol >= 0.0)) throw std::invalid_argument("gap_tol must be nonnegative");
  if (nw.max_newton < 1 || nw.max_linesearch < 1)
    throw std::invalid_argument("Newton iteration limits must be positive");
}

SubproblemDual::SubproblemDual(const DcProblem& prob, const OuterIterate& outer)
    : prob_(prob), outer_(outer), sigma_(outer.sigma) {
  if (!(sigma_ > 0.0)) throw std::invalid_argument("sigma must be positive");
  c_ = outer.q + prob.r_tilde;
  w_ = prob.phi_tilde / (prob.t * sigma_);
}

Vector SubproblemDual::x_tilde(const Vector& y, double v) const {
  Vector a = mul_wt(prob_.w, y) - c_;
  a.array() += v;
  return outer_.x - a / sigma_;
}

Vector SubproblemDual::primal(const Vector& y, double v) const {
  return soft_threshold(x_tilde(y, v), w_);
}

double SubproblemDual::value(const Vector& y, double v) const {
  const double ny = std::max(y.norm() - prob_.lam, 0.0);
  return 0.5 * ny * ny + v + 0.5 * sigma_ * primal(y, v).squaredNorm();
}

Vector SubproblemDual::gradient(const Vector& y, double v) const {
  const Eigen::Index n = prob_.n();
  const Vector p = primal(y, v);
  Vector g(n + 1);
  g.head(n) = block_soft_threshold(y, prob_.lam) - mul_w(prob_.w, p);
  g(n) = 1.0 - p.sum();
  return g;
}

double SubproblemDual::primal_objective(const Vector& x) const {
  const Vector d = x - outer_.x;
  return smooth_part(prob_, x) + prob_.phi_tilde.dot(x.cwiseAbs()) / prob_.t - outer_.q.dot(x) +
         0.5 * sigma_ * d.squaredNorm();
}

double SubproblemDual::dual_offset() const { return 0.5 * sigma_ * outer_.x.squaredNorm(); }

NewtonOperator::NewtonOperator(const SubproblemDual& dual, const Vector& y, double v)
    : u_(jac_prox_scaled_l2(y, dual.prob_.lam)), sigma_(dual.sigma_), n_(dual.prob_.n()) {
  const Vector xt = dual.x_tilde(y, v);
  const Vector& w = dual.w_;
  for (Eigen::Index i = 0; i < n_; ++i)
    if (std::abs(xt(i)) >= w(i)) active_.push_back(static_cast<int>(i));
  w_active_.resize(n_, static_cast<Eigen::Index>(active_.size()));
  for (std::size_t j = 0; j < active_.size(); ++j) w_active_.col(j) = dual.prob_.w.col(active_[j]);
}

Vector NewtonOperator::apply(const Vector& d) const {
  const Vector dy = d.head(n_);
  const double dv = d(n_);
  Vector out(n_ + 1);
  out.head(n_) = u_.apply(dy);
  out(n_) = 0.0;
  if (!active_.empty()) {
    Vector t = w_active_.transpose() * dy;
    t.array() += dv;
    out.head(n_) += (w_active_ * t) / sigma_;
    out(n_) += t.sum() / sigma_;
  }
  return out;
}

Vector NewtonOperator::diagonal() const {
  Vector out(n_ + 1);
  out.head(n_) = u_.diagonal();
  if (!active_.empty()) out.head(n_) += w_active_.rowwise().squaredNorm() / sigma_;
  out(n_) = static_cast<double>(active_.size()) / sigma_;
  return out;
}

Matrix NewtonOperator::dense() const {
  Matrix out(n_ + 1, n_ + 1);
  for (Eigen::Index j = 0; j <= n_; ++j) out.col(j) = apply(Vector::Unit(n_ + 1, j));
  return out;
}

double dual_objective(const NewtonState& s, const OuterIterate& outer, const DcProblem& prob) {
  return SubproblemDual(prob, outer).value(s.y, s.v);
}

Vector dual_gradient(const NewtonState& s, const OuterIterate& outer, const DcProblem& prob) {
  return SubproblemDual(prob, outer).gradient(s.y, s.v);
}

NewtonOperator newton_operator(const SubproblemDual& dual, const NewtonState& s) {
  return NewtonOperator(dual, s.y, s.v);
}

double min_norm_residual(const Vector& g, const Vector& w, const Vector& x, double zero_tol) {
  const Eigen::Index n = g.size();
  std::vector<double> kinks;
  kinks.reserve(2 * n);
  Vector a(n);
  std::vector<char> zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    zero[i] = std::abs(x(i)) <= zero_tol;
    if (zero[i]) {
      a(i) = g(i);
      kinks.push_back(-g(i) - w(i));
      kinks.push_back(-g(i) + w(i));
    } else {
      a(i) = g(i) + w(i) * (x(i) > 0.0 ? 1.0 : -1.0);
      kinks.push_back(-a(i));
    }
  }
  auto component = [&](Eigen::Index i, double s) {
    const double z = a(i) + s;
    if (!zero[i]) return z;
    return z > w(i) ? z - w(i) : (z < -w(i) ? z + w(i) : 0.0);
  };
  auto deriv = [&](double s) {
    double d = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) d += component(i, s);
    return d;
  };
  const double s = piecewise_linear_root(deriv, std::move(kinks));
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = component(i, s);
    r2 += c * c;
  }
  return std::sqrt(r2);
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "numerical_failure";
}

namespace {

/// v with e^T prox(x_tilde(y, v)) = 1 for fixed y.
double budget_multiplier(const SubproblemDual& dual, const Vector& y) {
  const double sigma = dual.sigma();
  const Vector base = dual.x_tilde(y, 0.0);
  const Vector& w = dual.thresholds();
  std::vector<double> kinks;
  kinks.reserve(2 * base.size());
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    kinks.push_back(base(i) - w(i));
    kinks.push_back(base(i) + w(i));
  }
  // u = v / sigma; 1 - sum soft(base - u) is nondecreasing in u.
  auto f = [&](double u) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < base.size(); ++i) {
      const double z = base(i) - u;
      s += z > w(i) ? z - w(i) : (z < -w(i) ? z + w(i) : 0.0);
    }
    return 1.0 - s;
  };
  return sigma * piecewise_linear_root(f, std::move(kinks));
}

/// Minimal-norm element of the subdifferential of g_k plus span{e} at x.
double subproblem_residual(const SubproblemDual& dual, const Vector& x) {
  const DcProblem& p = dual.problem();
  const OuterIterate& o = dual.outer();
  const Vector g = smooth_gradient(p, x) - o.q + dual.sigma() * (x - o.x);
  return min_norm_residual(g, p.phi_tilde / p.t, x);
}

}  // namespace

SubproblemResult solve_subproblem(const SubproblemDual& dual, const SolverConfig& config,
                                  const std::optional<NewtonState>& warm_start) {
  const DcProblem& prob = dual.problem();
  const OuterIterate& outer = dual.outer();
  const NewtonConfig& nc = config.newton;
  const Eigen::Index n = prob.n();
  const int cg_max = config.cg.max_iter > 0 ? config.cg.max_iter : static_cast<int>(2 * (n + 1));
  const double sigma = dual.sigma();

  SubproblemResult res;
  NewtonState& st = res.state;
  if (warm_start && warm_start->y.size() == n) {
    st.y = warm_start->y;
    st.v = warm_start->v;
  } else {
    const Vector u = mul_w(prob.w, outer.x);
    const double nu = u.norm();
    st.y = nu > 0.0 ? Vector(u * (1.0 + prob.lam / nu)) : u;
    st.v = budget_multiplier(dual, st.y);
  }

  Vector wty = mul_wt(prob.w, st.y);
  auto xt_from = [&](const Vector& wt_y, double v) {
    Vector a = wt_y - prob.r_tilde - outer.q;
    a.array() += v;
    return Vector(outer.x - a / sigma);
  };
  auto h_from = [&](const Vector& y, const Vector& wt_y, double v) {
    const double ny = std::max(y.norm() - prob.lam, 0.0);
    return 0.5 * ny * ny + v + 0.5 * sigma * soft_threshold(xt_from(wt_y, v), dual.thresholds()).squaredNorm();
  };

  double h = h_from(st.y, wty, st.v);
  bool normalized_once = false;
  for (int j = 0;; ++j) {
    const Vector p = soft_threshold(xt_from(wty, st.v), dual.thresholds());
    Vector grad(n + 1);
    grad.head(n) = block_soft_threshold(st.y, prob.lam) - mul_w(prob.w, p);
    grad(n) = 1.0 - p.sum();
    st.grad_norm = grad.norm();

    const double mass = p.sum();
    if (std::abs(mass) >= 1e-8) {
      normalized_once = true;
      res.x_next = p / mass;
      res.delta_norm = subproblem_residual(dual, res.x_next);
      const double target = nc.accept_ratio * sigma * (res.x_next - outer.x).norm();
      res.gap = dual.primal_objective(res.x_next) + h - dual.dual_offset();
      if ((res.delta_norm <= target && res.gap <= nc.gap_tol) || st.grad_norm <= nc.inner_floor) return res;
    }
    if (j >= nc.max_newton) {
      res.ok = false;
      res.message = normalized_once ? "Newton iteration limit reached"
                                    : "normalization failed: e^T x vanished";
      return res;
    }

    const NewtonOperator op(dual, st.y, st.v);
    const double damping = nc.tau1 * std::min(nc.tau2, st.grad_norm);
    const double tol = std::min(nc.eta_bar, std::pow(st.grad_norm, 1.0 + nc.tau));
    CgResult cg = conjugate_gradient(op, damping, -grad, tol, cg_max);
    res.cg_iterations += cg.iterations;
    const bool cg_met_rule = cg.residual <= tol;
    Vector d = std::move(cg.d);
    double slope = grad.dot(d);
    if (!(slope < 0.0)) {
      d = -grad;
      slope = -grad.squaredNorm();
    }

    const Vector dy = d.head(n);
    const double dv = d(n);
    const Vector wtd = mul_wt(prob.w, dy);
    const double allowance = 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(h));
    double alpha = 1.0;
    bool accepted = false;
    double h_new = h;
    for (int ls = 0; ls < nc.max_linesearch; ++ls) {
      const Vector y_try = st.y + alpha * dy;
      const Vector wty_try = wty + alpha * wtd;
      h_new = h_from(y_try, wty_try, st.v + alpha * dv);
      if (h_new <= h + nc.mu * alpha * slope + allowance) {
        accepted = true;
        break;
      }
      alpha *= nc.beta;
    }
    ++res.newton_iterations;
    if (accepted && !cg_met_rule) ++res.cg_rule_misses;
    if (!accepted) {
      res.ok = normalized_once && st.grad_norm <= 100.0 * nc.inner_floor;
      res.message = "line search exhausted";
      return res;
    }
    st.y += alpha * dy;
    st.v += alpha * dv;
    wty += alpha * wtd;
    h = h_new;
  }
}

namespace {

enum class Mode { Dc, L1 };

std::mutex observer_mutex;
SolveObserver observer;

void notify(const DcProblem& prob, const SolveReport& rep) {
  SolveObserver f;
  {
    std::lock_guard<std::mutex> lock(observer_mutex);
    f = observer;
  }
  if (f) f(prob, rep);
}

SolveReport run_outer(const DcProblem& prob, const SolverConfig& config, Vector x, Mode mode,
                      const std::string& solver, const std::string& init) {
  prob.validate();
  config.validate();
  const auto t0 = Clock::now();
  const double scale = sigma_scale(prob, config);

  SolveReport rep;
  rep.solver = solver;
  rep.init = init;
  rep.t = prob.t;
  rep.status = SolveStatus::MaxIter;

  auto objective = [&](const Vector& z) {
    return mode == Mode::Dc ? dc_objective(prob, z) : l1_objective(prob, z);
  };
  auto q_of = [&](const Vector& z) {
    return mode == Mode::Dc ? q_select(z, prob.phi_tilde, prob.t) : Vector(Vector::Zero(z.size()));
  };

  x /= x.sum();
  OuterIterate it;
  it.x = x;
  it.sigma = config.sigma0 * scale;
  it.f_value = objective(x);
  const double sigma_max = config.sigma_max * scale;
  std::optional<NewtonState> warm;
  std::deque<Vector> history{x};

  for (int k = 0; k < config.max_outer; ++k) {
    it.q = q_of(it.x);
    SubproblemResult sub;
    {
      SubproblemDual dual(prob, it);
      sub = solve_subproblem(dual, config, warm);
    }
    if (!sub.ok && sub.x_next.size() == 0) {
      // Normalization never succeeded: raise sigma once and retry cold.
      it.sigma *= config.gamma;
      SubproblemDual dual(prob, it);
      sub = solve_subproblem(dual, config, std::nullopt);
    }
    rep.newton_iterations_total += sub.newton_iterations;
    rep.cg_iterations_total += sub.cg_iterations;
    rep.cg_rule_misses += sub.cg_rule_misses;
    if (!sub.ok) {
      rep.status = SolveStatus::NumericalFailure;
      rep.message = sub.message;
      break;
    }
    warm = sub.state;

    const Vector dx = sub.x_next - it.x;
    const double step = dx.norm();
    const double f_new = objective(sub.x_next);
    TraceEntry te;
    te.f = f_new;
    te.sigma = it.sigma;
    te.rel_step = step / (1.0 + it.x.norm());
    te.descent_margin = it.f_value - f_new - 0.25 * it.sigma * step * step;
    te.newton_iterations = sub.newton_iterations;
    te.budget_error = std::abs(sub.x_next.sum() - 1.0);
    if (te.descent_margin < -1e-10) ++rep.descent_violations;
    rep.trace.push_back(te);
    ++rep.outer_iterations;

    it.x = sub.x_next;
    it.f_value = f_new;
    history.push_back(it.x);
    if (history.size() > 7) history.pop_front();

    if (prob.t_auto && it.x.norm() > kLipschitzRadius) {
      rep.status = SolveStatus::NumericalFailure;
      rep.message = "iterate left the ball used to choose t";
      break;
    }
    if (te.rel_step <= config.outer_tol) {
      rep.status = SolveStatus::Converged;
      break;
    }
    it.sigma = std::min(config.gamma * it.sigma, sigma_max);
  }

  const Vector& xs = it.x;
  for (std::size_t i = 0; i + 2 < history.size(); ++i) {
    const double num = (history[i + 1] - xs).norm();
    const double den = (history[i] - xs).norm();
    if (den > 0.0) rep.tail_ratios.push_back(num / den);
  }

  rep.portfolio.weights = xs;
  rep.portfolio.label = PortfolioLabel::SOLVER;
  rep.rsmv_objective = rsmv_objective(prob, xs);
  rep.dc_objective = dc_objective(prob, xs);
  rep.portfolio.value = rep.rsmv_objective;
  rep.cardinality = static_cast<int>(support_of(xs).size());
  rep.wall_time = seconds_since(t0);
  notify(prob, rep);
  return rep;
}

}  // namespace

void set_solve_observer(SolveObserver f) {
  std::lock_guard<std::mutex> lock(observer_mutex);
  observer = std::move(f);
}

SolveReport solve_l1mv(const DcProblem& prob, const SolverConfig& config, const std::optional<Vector>& x0) {
  const Eigen::Index n = prob.n();
  if (x0) {
    if (x0->size() != n) throw std::invalid_argument("x0 length mismatch");
    return run_outer(prob, config, *x0, Mode::L1, "l1mv", "user");
  }
  return run_outer(prob, config, Vector::Constant(n, 1.0 / static_cast<double>(n)), Mode::L1, "l1mv",
                   "ew");
}

SolveReport solve_pdca(const DcProblem& prob, const SolverConfig& config, const std::optional<Vector>& x0) {
  const Eigen::Index n = prob.n();
  if (x0) {
    if (x0->size() != n) throw std::invalid_argument("x0 length mismatch");
    if (std::abs(x0->sum()) < 1e-8) throw std::invalid_argument("x0 must satisfy e^T x = 1");
    return run_outer(prob, config, *x0, Mode::Dc, "pdca", "user");
  }
  const auto t0 = Clock::now();
  const SolveReport l1 = solve_l1mv(prob, config);
  SolveReport rep;
  if (l1.status != SolveStatus::NumericalFailure) {
    rep = run_outer(prob, config, l1.portfolio.weights, Mode::Dc, "pdca", "l1mv");
  } else {
    rep = run_outer(prob, config, Vector::Constant(n, 1.0 / static_cast<double>(n)), Mode::Dc, "pdca",
                    "ew");
  }
  rep.newton_iterations_total += l1.newton_iterations_total;
  rep.cg_iterations_total += l1.cg_iterations_total;
  rep.wall_time = seconds_since(t0);
  return rep;
}

SolveReport solve_accelerated(const DcProblem& prob, const SolverConfig& config) {
  const auto t0 = Clock::now();
  SolverConfig loose = config;
  loose.outer_tol = 1e-3;
  const SolveReport l1 = solve_l1mv(prob, loose);
  const std::vector<int> s = support_of(l1.portfolio.weights);
  if (l1.status == SolveStatus::NumericalFailure || s.empty() ||
      static_cast<Eigen::Index>(s.size()) == prob.n()) {
    SolveReport rep = solve_pdca(prob, config);
    rep.solver = "ac-pdca";
    rep.wall_time = seconds_since(t0);
    return rep;
  }
  const DcProblem sub = restrict_problem(prob, s);
  // The loose L1MV point restricted to its support already starts the reduced
  // pDCA, so the reduced problem skips its own L1MV pre-run.
  Vector x0(static_cast<Eigen::Index>(s.size()));
  for (std::size_t a = 0; a < s.size(); ++a) x0(static_cast<Eigen::Index>(a)) = l1.portfolio.weights(s[a]);
  SolveReport rep = std::abs(x0.sum()) >= 1e-8 ? solve_pdca(sub, config, x0) : solve_pdca(sub, config);
  Vector x = Vector::Zero(prob.n());
  for (std::size_t a = 0; a < s.size(); ++a) x(s[a]) = rep.portfolio.weights(static_cast<Eigen::Index>(a));
  rep.portfolio.weights = x;
  rep.rsmv_objective = rsmv_objective(prob, x);
  rep.dc_objective = dc_objective(prob, x);
  rep.portfolio.value = rep.rsmv_objective;
  rep.cardinality = static_cast<int>(support_of(x).size());
  rep.newton_iterations_total += l1.newton_iterations_total;
  rep.cg_iterations_total += l1.cg_iterations_total;
  rep.solver = "ac-pdca";
  rep.init = "l1mv-support";
  rep.wall_time = seconds_since(t0);
  return rep;
}

StationarityCheck lifted_stationarity_check(const Vector& x, const DcProblem& prob) {
  if (std::abs(x.sum() - 1.0) > 1e-8) throw std::invalid_argument("x must satisfy e^T x = 1");
  StationarityCheck out;
  const double tol = kSupportRelTol * x.cwiseAbs().maxCoeff();
  // Coordinates at or below the support tolerance count as exact zeros.
  Vector xz = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i));
    if (a <= tol) xz(i) = 0.0;
    else if (a < prob.t) out.dead_zone_ok = false;
  }
  const Vector g = smooth_gradient(prob, x) - q_select(xz, prob.phi_tilde, prob.t);
  out.residual = min_norm_residual(g, prob.phi_tilde / prob.t, xz);
  return out;
}

}  // namespace rsmv
