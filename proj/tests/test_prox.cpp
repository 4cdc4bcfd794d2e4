#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rsmv/prox.hpp"
#include "test_support.hpp"

using namespace rsmv;

namespace {

Vector random_vector(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

Vector fd_jacobian_apply(const std::function<Vector(const Vector&)>& prox, const Vector& z, const Vector& d,
                         double h = 1e-6) {
  return (prox(z + h * d) - prox(z - h * d)) / (2.0 * h);
}

}  // namespace

TEST(ProxL2, ZeroInput) {
  EXPECT_EQ(prox_scaled_l2(Vector::Zero(3), 0.7).point.norm(), 0.0);
}

TEST(ProxL2, ThreeFourAgainstGridSearch) {
  Vector z(2);
  z << 3.0, 4.0;
  const ProxEval p = prox_scaled_l2(z, 1.0);
  // Oracle: grid over [0, 5]^2, then coordinate polishing with shrinking steps.
  auto obj = [&](double a, double b) {
    return std::hypot(a, b) + 0.5 * ((a - 3.0) * (a - 3.0) + (b - 4.0) * (b - 4.0));
  };
  double ba = 0.0, bb = 0.0, best = obj(0.0, 0.0);
  for (int i = 0; i <= 500; ++i)
    for (int j = 0; j <= 500; ++j) {
      const double a = 0.01 * i, b = 0.01 * j, v = obj(a, b);
      if (v < best) {
        best = v;
        ba = a;
        bb = b;
      }
    }
  for (double step = 0.01; step > 1e-13; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (auto [da, db] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
        const double v = obj(ba + da, bb + db);
        if (v < best) {
          best = v;
          ba += da;
          bb += db;
          moved = true;
        }
      }
    }
  }
  EXPECT_NEAR(p.point(0), ba, 1e-8);
  EXPECT_NEAR(p.point(1), bb, 1e-8);
  EXPECT_NEAR(p.point(0), 2.4, 1e-15);
  EXPECT_NEAR(p.point(1), 3.2, 1e-15);
  EXPECT_NEAR(p.envelope, best, 1e-12);
}

TEST(ProxL2, NormEqualToLambdaGivesZero) {
  Vector z(2);
  z << 0.6, 0.8;
  EXPECT_EQ(prox_scaled_l2(z, 1.0).point.norm(), 0.0);
}

TEST(ProxL2, ZeroLambdaIsIdentity) {
  Vector z(3);
  z << 1.0, -2.0, 0.5;
  EXPECT_TRUE(prox_scaled_l2(z, 0.0).point == z);
  EXPECT_LE((jac_prox_scaled_l2(z, 0.0).dense() - Matrix::Identity(3, 3)).norm(), 0.0);
}

TEST(JacProxL2, InsideBallIsZero) {
  Vector z(3);
  z << 0.1, 0.2, -0.1;
  EXPECT_EQ(jac_prox_scaled_l2(z, 1.0).dense().norm(), 0.0);
}

TEST(JacProxL2, ThreeFourMatchesFiniteDifferences) {
  Vector z(2);
  z << 3.0, 4.0;
  const L2JacobianElement j = jac_prox_scaled_l2(z, 1.0);
  auto prox = [](const Vector& u) { return prox_scaled_l2(u, 1.0).point; };
  for (int k = 0; k < 2; ++k) {
    const Vector d = Vector::Unit(2, k);
    EXPECT_LE((j.apply(d) - fd_jacobian_apply(prox, z, d)).norm(), 1e-6);
  }
}

TEST(JacProxL2, PropertySymmetricPsdUnitSpectrum) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 6;
    const double lam = 0.5 + 0.01 * k;
    Vector z = random_vector(rng, n, 1.0);
    if (k % 3 == 0) z *= lam / z.norm();  // boundary branch
    const Matrix m = jac_prox_scaled_l2(z, lam).dense();
    EXPECT_LE((m - m.transpose()).norm(), 1e-14);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    EXPECT_LE(es.eigenvalues().maxCoeff(), 1.0 + 1e-12);
    EXPECT_LE((m.diagonal() - jac_prox_scaled_l2(z, lam).diagonal()).norm(), 1e-14);
  }
}

TEST(ProxL1, ZeroThresholdIsIdentity) {
  Vector z(3);
  z << 1.0, -2.0, 0.0;
  EXPECT_TRUE(prox_weighted_l1(z, Vector::Zero(3)).point == z);
  EXPECT_TRUE(jac_prox_weighted_l1(z, Vector::Zero(3)).diagonal == Vector::Ones(3));
}

TEST(ProxL1, MixedVectorAgainstScalarMinimization) {
  Vector z(3), w(3);
  z << 2.0, -0.5, 0.1;
  w << 1.0, 1.0, 1.0;
  const Vector p = prox_weighted_l1(z, w).point;
  for (int i = 0; i < 3; ++i) {
    const double oracle =
        tu::golden_min([&](double x) { return w(i) * std::abs(x) + 0.5 * (x - z(i)) * (x - z(i)); }, -5.0, 5.0);
    EXPECT_NEAR(p(i), oracle, 1e-7);
  }
  EXPECT_EQ(p(0), 1.0);
  EXPECT_EQ(p(1), 0.0);
  EXPECT_EQ(p(2), 0.0);
}

TEST(ProxL1, AtThresholdGivesZero) {
  Vector z(2), w(2);
  z << 0.3, -0.7;
  w << 0.3, 0.7;
  EXPECT_EQ(prox_weighted_l1(z, w).point.norm(), 0.0);
}

TEST(JacProxL1, AllActiveAndAllInactive) {
  Vector w = Vector::Constant(4, 0.5);
  Vector big(4), small(4);
  big << 1.0, -2.0, 0.6, -0.7;
  small << 0.1, -0.2, 0.4, 0.0;
  EXPECT_TRUE(jac_prox_weighted_l1(big, w).diagonal == Vector::Ones(4));
  EXPECT_TRUE(jac_prox_weighted_l1(small, w).diagonal == Vector::Zero(4));
}

TEST(JacProxL1, MixedVectorMatchesFiniteDifferences) {
  Vector z(5), w(5);
  z << 2.0, -0.3, 0.9, -1.7, 0.05;
  w << 1.0, 0.5, 0.4, 1.0, 0.2;
  const L1JacobianElement j = jac_prox_weighted_l1(z, w);
  auto prox = [&](const Vector& u) { return prox_weighted_l1(u, w).point; };
  for (int k = 0; k < 5; ++k) {
    const Vector d = Vector::Unit(5, k);
    EXPECT_LE((j.apply(d) - fd_jacobian_apply(prox, z, d)).norm(), 1e-8);
  }
}

TEST(Envelope, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const Vector z = random_vector(rng, 5, 1.0);
    EXPECT_LE(moreau_envelope_gradient_check(ProxFamily::ScaledL2, z, 0.8), 1e-5);
    Vector zl1 = z;
    for (Eigen::Index i = 0; i < zl1.size(); ++i)
      if (std::abs(std::abs(zl1(i)) - 0.3) < 1e-3) zl1(i) += 0.01;
    EXPECT_LE(moreau_envelope_gradient_check(ProxFamily::WeightedL1, zl1, 0.3), 1e-5);
  }
  EXPECT_EQ(prox_scaled_l2(Vector::Zero(4), 1.0).envelope_gradient.norm(), 0.0);
  EXPECT_LE(moreau_envelope_gradient_check(ProxFamily::ScaledL2, Vector::Zero(4), 1.0), 1e-12);
}

TEST(Prox, PropertyOptimalityInclusion) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + k % 8;
    const Vector z = random_vector(rng, n, 1.0);
    const double lam = u(rng);
    const Vector p = prox_scaled_l2(z, lam).point;
    if (p.norm() == 0.0) {
      EXPECT_LE(z.norm(), lam * (1.0 + 1e-12));
    } else {
      EXPECT_LE((z - p - lam * p / p.norm()).norm(), 1e-10);
    }
    Vector w(n);
    for (int i = 0; i < n; ++i) w(i) = u(rng);
    const Vector q = prox_weighted_l1(z, w).point;
    for (int i = 0; i < n; ++i) {
      if (q(i) == 0.0) EXPECT_LE(std::abs(z(i) - q(i)), w(i));
      else EXPECT_NEAR(z(i) - q(i), w(i) * (q(i) > 0 ? 1.0 : -1.0), 1e-10);
    }
  }
}

TEST(Prox, PropertyNonexpansive) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 500; ++k) {
    const int n = 1 + k % 6;
    const Vector a = random_vector(rng, n, 1.0), b = random_vector(rng, n, 1.0);
    const Vector w = Vector::Constant(n, 0.4);
    EXPECT_LE((prox_scaled_l2(a, 0.7).point - prox_scaled_l2(b, 0.7).point).norm(), (a - b).norm() + 1e-15);
    EXPECT_LE((prox_weighted_l1(a, w).point - prox_weighted_l1(b, w).point).norm(), (a - b).norm() + 1e-15);
  }
}

TEST(Prox, PropertyJacobianConsistencyOffBoundaries) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + k % 6;
    const Vector z = random_vector(rng, n, 1.0);
    const Vector d = random_vector(rng, n, 1.0).normalized();
    const double lam = 0.5;
    if (std::abs(z.norm() - lam) > 1e-3) {
      auto prox = [&](const Vector& u) { return prox_scaled_l2(u, lam).point; };
      EXPECT_LE((jac_prox_scaled_l2(z, lam).apply(d) - fd_jacobian_apply(prox, z, d)).norm(), 1e-6);
      ++checked;
    }
    const Vector w = Vector::Constant(n, 0.3);
    if (((z.cwiseAbs().array() - 0.3).abs() > 1e-3).all()) {
      auto prox = [&](const Vector& u) { return prox_weighted_l1(u, w).point; };
      EXPECT_LE((jac_prox_weighted_l1(z, w).apply(d) - fd_jacobian_apply(prox, z, d)).norm(), 1e-6);
    }
  }
  EXPECT_GT(checked, 900);
}
