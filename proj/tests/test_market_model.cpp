#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "rsmv/market_model.hpp"
#include "test_support.hpp"

using namespace rsmv;

namespace {

ReturnsTable table(const Matrix& data) {
  ReturnsTable t;
  t.data = data;
  for (Eigen::Index j = 0; j < data.cols(); ++j) t.asset_ids.push_back("a" + std::to_string(j));
  return t;
}

void expect_factor_ok(const MarketModel& m) {
  const Matrix& w = m.chol();
  EXPECT_LE((w.transpose() * w - m.cov()).norm(), 1e-10 * m.cov().norm());
  EXPECT_TRUE(m.cov() == m.cov().transpose());
  EXPECT_TRUE(w.isUpperTriangular());
}

}  // namespace

TEST(EstimateMarket, TwoPeriodsOneAsset) {
  Matrix d(2, 1);
  d << 0.0, 0.2;
  const MarketModel m = estimate_market(table(d));
  EXPECT_NEAR(m.mean()(0), 0.1, 1e-15);
  EXPECT_NEAR(m.cov()(0, 0), 0.02, 1e-15);
  EXPECT_EQ(m.jitter_applied(), 0.0);
}

TEST(EstimateMarket, ConstantReturnsWithJitter) {
  const Matrix d = Matrix::Constant(5, 3, 0.01);
  const MarketModel m = estimate_market(table(d), 1e-8);
  EXPECT_LE((m.cov() - 1e-8 * Matrix::Identity(3, 3)).norm(), 1e-20);
}

TEST(EstimateMarket, ConstantReturnsWithoutJitterIsNotPd) {
  const Matrix d = Matrix::Constant(5, 3, 0.01);
  EXPECT_THROW(estimate_market(table(d)), CovarianceNotPdError);
}

TEST(EstimateMarket, MonteCarloIdentityCovariance) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix d(100000, 4);
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j) d(i, j) = g(rng);
  const MarketModel m = estimate_market(table(d));
  EXPECT_LE((m.cov() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 0.05);
  expect_factor_ok(m);
}

TEST(EstimateMarket, RejectsBadTables) {
  EXPECT_THROW(estimate_market(table(Matrix::Zero(1, 2))), std::invalid_argument);
  Matrix d = Matrix::Zero(3, 2);
  d(1, 1) = std::nan("");
  EXPECT_THROW(estimate_market(table(d)), std::invalid_argument);
  EXPECT_THROW(estimate_market(table(Matrix::Random(4, 2)), -1.0), std::invalid_argument);
}

TEST(EstimateMarket, PropertyRowPermutationInvariant) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.01, 0.05);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix d(30, 5);
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      for (Eigen::Index j = 0; j < d.cols(); ++j) d(i, j) = g(rng);
    std::vector<int> perm(30);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix p(30, 5);
    for (int i = 0; i < 30; ++i) p.row(i) = d.row(perm[i]);
    const MarketModel a = estimate_market(table(d));
    const MarketModel b = estimate_market(table(p));
    EXPECT_LE((a.mean() - b.mean()).norm(), 1e-15);
    EXPECT_LE((a.cov() - b.cov()).norm(), 1e-15);
  }
}

TEST(MarketModel, PropertyFactorReproducesCovariance) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const MarketModel m = tu::random_market(s, 2 + static_cast<int>(s % 9));
    expect_factor_ok(m);
    const Vector b = Vector::LinSpaced(m.n(), 1.0, 2.0);
    EXPECT_LE((m.cov() * m.solve(b) - b).norm(), 1e-9 * b.norm());
  }
}

TEST(MarketModel, FromMomentsValidates) {
  EXPECT_THROW(MarketModel::from_moments(Vector::Zero(2), Matrix::Identity(3, 3)), std::invalid_argument);
  Matrix a(2, 2);
  a << 1.0, 0.5, 0.4, 1.0;
  EXPECT_THROW(MarketModel::from_moments(Vector::Zero(2), a), std::invalid_argument);
  Matrix neg(2, 2);
  neg << 1.0, 2.0, 2.0, 1.0;
  try {
    MarketModel::from_moments(Vector::Zero(2), neg);
    FAIL() << "expected CovarianceNotPdError";
  } catch (const CovarianceNotPdError& e) {
    EXPECT_NEAR(e.smallest_eigenvalue(), -1.0, 1e-12);
  }
}

TEST(MarketModel, SubmarketPicksEntries) {
  const MarketModel m = tu::random_market(3, 5);
  const MarketModel s = m.submarket({4, 1});
  EXPECT_EQ(s.mean()(0), m.mean()(4));
  EXPECT_EQ(s.cov()(0, 1), m.cov()(4, 1));
  EXPECT_EQ(s.cov()(1, 1), m.cov()(1, 1));
}

TEST(ParamCov, ZeroCorrelationIsScaledIdentity) {
  const Matrix m = param_cov_matrix({0.3, 0.0, 4});
  EXPECT_LE((m - 0.09 * Matrix::Identity(4, 4)).norm(), 1e-16);
}

TEST(ParamCov, TwoAssetReadOff) {
  Matrix expect(2, 2);
  expect << 1.0, 0.5, 0.5, 1.0;
  EXPECT_EQ(param_cov_matrix({1.0, 0.5, 2}), expect);
}

TEST(ParamCov, EigenvaluesMatchEigensolver) {
  const Matrix m = param_cov_matrix({0.2, 0.3, 4});
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const double s2 = 0.04;
  EXPECT_NEAR(es.eigenvalues()(0), s2 * 0.7, 1e-15);
  EXPECT_NEAR(es.eigenvalues()(1), s2 * 0.7, 1e-15);
  EXPECT_NEAR(es.eigenvalues()(2), s2 * 0.7, 1e-15);
  EXPECT_NEAR(es.eigenvalues()(3), s2 * (1.0 + 3.0 * 0.3), 1e-15);
}

TEST(ParamCov, RejectsOutOfRange) {
  EXPECT_THROW(param_cov_matrix({0.1, 1.0, 3}), std::invalid_argument);
  EXPECT_THROW(param_cov_matrix({0.1, -0.5, 3}), std::invalid_argument);
  EXPECT_THROW(param_cov_matrix({0.0, 0.1, 3}), std::invalid_argument);
}

TEST(FitParamCov, IdentityInput) {
  const ParamCov p = fit_param_cov(Matrix::Identity(3, 3));
  EXPECT_NEAR(p.sigma, 1.0, 1e-15);
  EXPECT_NEAR(p.rho, 0.0, 1e-15);
}

TEST(FitParamCov, PropertyRoundTrip) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> us(0.01, 1.0), ur(-0.15, 0.95);
  for (int k = 0; k < 200; ++k) {
    const ParamCov in{us(rng), ur(rng), 2 + k % 6};
    if (in.rho <= -1.0 / (in.n - 1)) continue;
    const ParamCov out = fit_param_cov(param_cov_matrix(in));
    EXPECT_NEAR(out.sigma, in.sigma, 1e-12);
    EXPECT_NEAR(out.rho, in.rho, 1e-12);
  }
}

TEST(FitParamCov, ResidualMatchesGridSearch) {
  std::mt19937_64 rng(21);
  const Matrix c = tu::random_spd(rng, 5, 0.01, 0.2);
  const ParamCov p = fit_param_cov(c);
  const double res = param_cov_residual(p, c);
  // Coarse grid over (sigma, rho), then a finer grid around the best cell.
  double best = std::numeric_limits<double>::infinity();
  double bs = 0.0, br = 0.0;
  auto scan = [&](double s_lo, double s_hi, double r_lo, double r_hi, int k) {
    for (int i = 0; i <= k; ++i) {
      const double s = s_lo + (s_hi - s_lo) * i / k;
      if (s <= 0.0) continue;
      for (int j = 0; j <= k; ++j) {
        const double r = r_lo + (r_hi - r_lo) * j / k;
        if (r <= -0.25 || r >= 1.0) continue;
        const double v = param_cov_residual({s, r, 5}, c);
        if (v < best) {
          best = v;
          bs = s;
          br = r;
        }
      }
    }
  };
  scan(0.01, 1.0, -0.249, 0.999, 400);
  for (int level = 0; level < 4; ++level) {
    const double ds = 0.01 / std::pow(20.0, level), dr = 0.01 / std::pow(20.0, level);
    scan(bs - ds, bs + ds, br - dr, br + dr, 40);
  }
  EXPECT_NEAR(res, best, 1e-4);
  EXPECT_LE(res, best + 1e-12);
}

TEST(SynthMarket, AllOnesSpectrumIsIdentity) {
  const MarketModel m = synth_market(1, 4, SpectrumSpec::explicit_values({1, 1, 1, 1}), MeanSpec::zero());
  EXPECT_LE((m.cov() - Matrix::Identity(4, 4)).norm(), 1e-12);
}

TEST(SynthMarket, Deterministic) {
  const auto spec = SpectrumSpec::one_factor(0.06, 0.5, 2.0);
  const MarketModel a = synth_market(42, 7, spec, MeanSpec::normal(0.01, 0.01));
  const MarketModel b = synth_market(42, 7, spec, MeanSpec::normal(0.01, 0.01));
  EXPECT_TRUE(a.cov() == b.cov());
  EXPECT_TRUE(a.mean() == b.mean());
  const MarketModel c = synth_market(43, 7, spec, MeanSpec::normal(0.01, 0.01));
  EXPECT_FALSE(a.cov() == c.cov());
}

TEST(SynthMarket, ConditionNumberFromSpectrum) {
  const MarketModel m = synth_market(3, 3, SpectrumSpec::explicit_values({4, 1, 1}), MeanSpec::zero());
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.cov());
  EXPECT_NEAR(es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff(), 4.0, 1e-10);
}

TEST(SynthMarket, RejectsBadSpectrum) {
  EXPECT_THROW(synth_market(1, 3, SpectrumSpec::explicit_values({1, 0, 1}), MeanSpec::zero()),
               std::invalid_argument);
  EXPECT_THROW(synth_market(1, 3, SpectrumSpec::explicit_values({1, 1}), MeanSpec::zero()), std::invalid_argument);
  EXPECT_THROW(synth_market(1, 0, SpectrumSpec::log_uniform(1e-3, 1e-2), MeanSpec::zero()), std::invalid_argument);
}
