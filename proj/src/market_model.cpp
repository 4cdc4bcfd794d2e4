#include "rsmv/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace rsmv {

namespace {

double smallest_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool try_factor(const Matrix& cov, Matrix& upper) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) return false;
  upper = llt.matrixU();
  return upper.allFinite() && (upper.diagonal().array() > 0.0).all();
}

}  // namespace

void ReturnsTable::validate() const {
  if (data.rows() < 2) throw std::invalid_argument("returns table needs at least 2 periods");
  if (data.cols() < 1) throw std::invalid_argument("returns table needs at least 1 asset");
  if (!asset_ids.empty() && static_cast<Eigen::Index>(asset_ids.size()) != data.cols())
    throw std::invalid_argument("asset id count does not match column count");
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (!std::isfinite(data(i, j))) {
        std::ostringstream os;
        os << "non-finite return at row " << i << ", column " << j;
        throw std::invalid_argument(os.str());
      }
    }
  }
}

MarketModel MarketModel::from_moments(Vector mean, Matrix cov) {
  const Eigen::Index n = mean.size();
  if (n < 1) throw std::invalid_argument("market needs at least one asset");
  if (cov.rows() != n || cov.cols() != n)
    throw std::invalid_argument("covariance shape does not match mean length");
  if (!mean.allFinite() || !cov.allFinite())
    throw std::invalid_argument("market moments must be finite");
  const double scale = std::max(cov.norm(), 1e-300);
  if ((cov - cov.transpose()).norm() > 1e-8 * scale)
    throw std::invalid_argument("covariance is not symmetric");
  cov = 0.5 * (cov + cov.transpose());

  MarketModel m;
  m.mean_ = std::move(mean);
  if (!try_factor(cov, m.w_)) {
    const double jitter = 1e-8 * cov.trace() / static_cast<double>(n);
    Matrix jittered = cov;
    jittered.diagonal().array() += jitter;
    if (!(jitter > 0.0) || !try_factor(jittered, m.w_)) {
      const double lmin = smallest_eigenvalue(cov);
      std::ostringstream os;
      os << "covariance not PD (smallest eigenvalue " << lmin << ")";
      throw CovarianceNotPdError(os.str(), lmin);
    }
    cov = std::move(jittered);
    m.jitter_applied_ = jitter;
  }
  m.cov_ = std::move(cov);
  return m;
}

Matrix MarketModel::solve(const Matrix& b) const {
  Matrix z = w_.transpose().triangularView<Eigen::Lower>().solve(b);
  return w_.triangularView<Eigen::Upper>().solve(z);
}

Vector MarketModel::solve(const Vector& b) const {
  Vector z = w_.transpose().triangularView<Eigen::Lower>().solve(b);
  return w_.triangularView<Eigen::Upper>().solve(z);
}

MarketModel MarketModel::submarket(const std::vector<int>& indices) const {
  const auto k = static_cast<Eigen::Index>(indices.size());
  Vector mu(k);
  Matrix s(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    mu(a) = mean_(indices[a]);
    for (Eigen::Index b = 0; b < k; ++b) s(a, b) = cov_(indices[a], indices[b]);
  }
  return from_moments(std::move(mu), std::move(s));
}

void ParamCov::validate() const {
  if (n < 1) throw std::invalid_argument("ParamCov dimension must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("ParamCov sigma must be positive");
  const double lower = n > 1 ? -1.0 / (n - 1) : -1.0;
  if (!(rho > lower && rho < 1.0))
    throw std::invalid_argument("ParamCov rho outside (-1/(n-1), 1)");
}

MarketModel estimate_market(const ReturnsTable& returns, double jitter) {
  returns.validate();
  if (jitter < 0.0) throw std::invalid_argument("jitter must be nonnegative");
  const Matrix& x = returns.data;
  const double t = static_cast<double>(x.rows());
  Vector mean = x.colwise().mean().transpose();
  Matrix centered = x.rowwise() - mean.transpose();
  Matrix cov = (centered.transpose() * centered) / (t - 1.0);
  cov = 0.5 * (cov + cov.transpose());
  cov.diagonal().array() += jitter;
  return MarketModel::from_moments(std::move(mean), std::move(cov));
}

Matrix param_cov_matrix(const ParamCov& p) {
  p.validate();
  const double s2 = p.sigma * p.sigma;
  Matrix m = Matrix::Constant(p.n, p.n, p.rho * s2);
  m.diagonal().setConstant(s2);
  return m;
}

ParamCov fit_param_cov(const Matrix& cov) {
  const Eigen::Index n = cov.rows();
  if (n < 1 || cov.cols() != n) throw std::invalid_argument("fit_param_cov needs a square matrix");
  const double s2 = cov.diagonal().mean();
  if (!(s2 > 0.0)) throw std::invalid_argument("fit_param_cov: mean diagonal must be positive");
  ParamCov p;
  p.n = static_cast<int>(n);
  p.sigma = std::sqrt(s2);
  if (n == 1) {
    p.rho = 0.0;
    return p;
  }
  const double off_sum = cov.sum() - cov.trace();
  const double off_mean = off_sum / static_cast<double>(n * (n - 1));
  const double lo = -1.0 / static_cast<double>(n - 1) + 1e-6;
  const double hi = 1.0 - 1e-6;
  p.rho = std::clamp(off_mean / s2, lo, hi);
  return p;
}

double param_cov_residual(const ParamCov& p, const Matrix& cov) {
  return (param_cov_matrix(p) - cov).norm();
}

SpectrumSpec SpectrumSpec::explicit_values(std::vector<double> v) {
  SpectrumSpec s;
  s.kind = Kind::Explicit;
  s.values = std::move(v);
  return s;
}

SpectrumSpec SpectrumSpec::log_uniform(double lo, double hi) {
  SpectrumSpec s;
  s.kind = Kind::LogUniform;
  s.lo = lo;
  s.hi = hi;
  return s;
}

SpectrumSpec SpectrumSpec::one_factor(double sigma, double rho, double dispersion) {
  SpectrumSpec s;
  s.kind = Kind::OneFactor;
  s.sigma = sigma;
  s.rho = rho;
  s.dispersion = dispersion;
  return s;
}

MeanSpec MeanSpec::explicit_values(std::vector<double> v) {
  MeanSpec m;
  m.kind = Kind::Explicit;
  m.values = std::move(v);
  return m;
}

MeanSpec MeanSpec::normal(double mu, double sd) {
  MeanSpec m;
  m.kind = Kind::Normal;
  m.mu = mu;
  m.sd = sd;
  return m;
}

MeanSpec MeanSpec::zero() { return MeanSpec{}; }

MarketModel synth_market(std::uint64_t seed, int n, const SpectrumSpec& spectrum,
                         const MeanSpec& mean_spec) {
  if (n < 1) throw std::invalid_argument("synth_market: n must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Vector eig(n);
  switch (spectrum.kind) {
    case SpectrumSpec::Kind::Explicit:
      if (static_cast<int>(spectrum.values.size()) != n)
        throw std::invalid_argument("synth_market: spectrum length must equal n");
      for (int i = 0; i < n; ++i) eig(i) = spectrum.values[i];
      break;
    case SpectrumSpec::Kind::LogUniform: {
      if (!(spectrum.lo > 0.0) || spectrum.hi < spectrum.lo)
        throw std::invalid_argument("synth_market: non-positive eigenvalue in spectrum");
      const double a = std::log(spectrum.lo), b = std::log(spectrum.hi);
      for (int i = 0; i < n; ++i) eig(i) = std::exp(a + (b - a) * unif(rng));
      break;
    }
    case SpectrumSpec::Kind::OneFactor: {
      const double s2 = spectrum.sigma * spectrum.sigma;
      const double idio = s2 * (1.0 - spectrum.rho);
      const double ld = std::log(std::max(spectrum.dispersion, 1.0));
      for (int i = 0; i < n; ++i) eig(i) = idio * std::exp(ld * (2.0 * unif(rng) - 1.0));
      eig(0) = s2 * (1.0 - spectrum.rho + spectrum.rho * n);
      break;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!(eig(i) > 0.0) || !std::isfinite(eig(i)))
      throw std::invalid_argument("synth_market: non-positive eigenvalue in spectrum");
  }

  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Haar measure: flip columns so that diag(R) is positive.
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;

  Matrix cov = q * eig.asDiagonal() * q.transpose();
  cov = 0.5 * (cov + cov.transpose());

  Vector mu(n);
  switch (mean_spec.kind) {
    case MeanSpec::Kind::Explicit:
      if (static_cast<int>(mean_spec.values.size()) != n)
        throw std::invalid_argument("synth_market: mean length must equal n");
      for (int i = 0; i < n; ++i) mu(i) = mean_spec.values[i];
      break;
    case MeanSpec::Kind::Normal:
      for (int i = 0; i < n; ++i) mu(i) = mean_spec.mu + mean_spec.sd * gauss(rng);
      break;
    case MeanSpec::Kind::Zero:
      mu.setZero();
      break;
  }
  return MarketModel::from_moments(std::move(mu), std::move(cov));
}

}  // namespace rsmv

namespace rsmv {

MarketModel synth_equity_market(std::uint64_t seed, int n) {
  return synth_market(seed, n, SpectrumSpec::one_factor(0.06, 0.6, 2.0), MeanSpec::normal(0.008, 0.004));
}

}  // namespace rsmv
