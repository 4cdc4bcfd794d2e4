#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rsmv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a covariance matrix cannot be factored even after jitter.
class CovarianceNotPdError : public std::runtime_error {
 public:
  CovarianceNotPdError(const std::string& what, double smallest_eigenvalue)
      : std::runtime_error(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

/// T x n table of per-period simple returns.
struct ReturnsTable {
  std::vector<std::string> asset_ids;
  Matrix data;  // rows are periods, columns are assets
  std::string frequency = "unknown";

  /// Throws std::invalid_argument when the table breaks its invariants.
  void validate() const;
};

/// Estimated market moments together with the upper Cholesky factor W
/// (W^T W = cov). The object is immutable once built.
class MarketModel {
 public:
  /// Builds a model from moments. `cov` must be symmetric up to a small
  /// relative tolerance; it is stored exactly symmetrized. When the Cholesky
  /// factorization fails a jitter of 1e-8 * trace/n is added once.
  static MarketModel from_moments(Vector mean, Matrix cov);

  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  /// Upper-triangular factor with W^T W = cov.
  const Matrix& chol() const { return w_; }
  Eigen::Index n() const { return mean_.size(); }

  /// Solves cov * X = B with the stored factor.
  Matrix solve(const Matrix& b) const;
  Vector solve(const Vector& b) const;

  /// Restriction to the given asset indices.
  MarketModel submarket(const std::vector<int>& indices) const;

  double jitter_applied() const { return jitter_applied_; }

 private:
  MarketModel() = default;
  Vector mean_;
  Matrix cov_;
  Matrix w_;
  double jitter_applied_ = 0.0;
};

/// Equicorrelation covariance parameters: sigma^2 on the diagonal and
/// rho * sigma^2 off it.
struct ParamCov {
  double sigma = 1.0;
  double rho = 0.0;
  int n = 1;

  void validate() const;
};

MarketModel estimate_market(const ReturnsTable& returns, double jitter = 0.0);

Matrix param_cov_matrix(const ParamCov& p);

/// Nearest equicorrelation matrix in Frobenius norm.
ParamCov fit_param_cov(const Matrix& cov);

/// Frobenius residual ||Sigma(sigma, rho) - cov||_F.
double param_cov_residual(const ParamCov& p, const Matrix& cov);

/// Eigenvalue spectrum for the synthetic generator.
struct SpectrumSpec {
  enum class Kind { Explicit, LogUniform, OneFactor };
  Kind kind = Kind::Explicit;
  std::vector<double> values;  // Explicit
  double lo = 1e-4, hi = 1e-2;  // LogUniform bounds
  // OneFactor: equicorrelated block sigma^2 (1 - rho) plus a market mode,
  // each idiosyncratic eigenvalue scaled by a log-uniform factor in
  // [1/dispersion, dispersion].
  double sigma = 0.05, rho = 0.5, dispersion = 2.0;

  static SpectrumSpec explicit_values(std::vector<double> v);
  static SpectrumSpec log_uniform(double lo, double hi);
  static SpectrumSpec one_factor(double sigma, double rho, double dispersion);
};

struct MeanSpec {
  enum class Kind { Explicit, Normal, Zero };
  Kind kind = Kind::Zero;
  std::vector<double> values;
  double mu = 0.0, sd = 0.0;

  static MeanSpec explicit_values(std::vector<double> v);
  static MeanSpec normal(double mu, double sd);
  static MeanSpec zero();
};

/// Deterministic synthetic market: cov = Q diag(spectrum) Q^T with Q a
/// random orthogonal matrix.
MarketModel synth_market(std::uint64_t seed, int n, const SpectrumSpec& spectrum,
                         const MeanSpec& mean);

/// Monthly-equity-like instance: one_factor(0.06, 0.6, 2) spectrum, means N(0.008, 0.004^2).
MarketModel synth_equity_market(std::uint64_t seed, int n);

}  // namespace rsmv
