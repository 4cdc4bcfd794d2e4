#include "rsmv/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace rsmv {

namespace {

void check_lam(double lam) {
  if (!(lam >= 0.0) || !std::isfinite(lam)) throw std::invalid_argument("lam must be nonnegative");
}

void check_weights(const Vector& z, const Vector& w) {
  if (z.size() != w.size()) throw std::invalid_argument("threshold length mismatch");
  if ((w.array() < 0.0).any()) throw std::invalid_argument("thresholds must be nonnegative");
}

}  // namespace

L2JacobianElement::L2JacobianElement(Kind kind, Vector z, double lam)
    : kind_(kind), z_(std::move(z)), lam_(lam), znorm_(z_.norm()) {}

Vector L2JacobianElement::apply(const Vector& v) const {
  switch (kind_) {
    case Kind::Zero:
      return Vector::Zero(v.size());
    case Kind::Boundary: {
      // Smooth-branch limit at ||z|| = lam: z z^T / lam^2.
      if (lam_ == 0.0) return v;
      return z_ * (z_.dot(v) / (lam_ * lam_));
    }
    case Kind::Smooth: {
      if (lam_ == 0.0) return v;
      const double r = lam_ / znorm_;
      return v - r * (v - z_ * (z_.dot(v) / (znorm_ * znorm_)));
    }
  }
  return v;
}

Vector L2JacobianElement::diagonal() const {
  const Eigen::Index n = z_.size();
  switch (kind_) {
    case Kind::Zero:
      return Vector::Zero(n);
    case Kind::Boundary:
      if (lam_ == 0.0) return Vector::Ones(n);
      return z_.array().square() / (lam_ * lam_);
    case Kind::Smooth: {
      if (lam_ == 0.0) return Vector::Ones(n);
      const double r = lam_ / znorm_;
      return (1.0 - r) + r * z_.array().square() / (znorm_ * znorm_);
    }
  }
  return Vector::Ones(n);
}

Matrix L2JacobianElement::dense() const {
  const Eigen::Index n = z_.size();
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) out.col(j) = apply(Vector::Unit(n, j));
  return out;
}

Vector block_soft_threshold(const Vector& z, double lam) {
  if (lam == 0.0) return z;
  const double nz = z.norm();
  if (nz > lam) return z * ((nz - lam) / nz);
  return Vector::Zero(z.size());
}

Vector soft_threshold(const Vector& z, const Vector& w) {
  Vector p(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double zi = z(i), wi = w(i);
    p(i) = zi > wi ? zi - wi : (zi < -wi ? zi + wi : 0.0);
  }
  return p;
}

ProxEval prox_scaled_l2(const Vector& z, double lam) {
  check_lam(lam);
  ProxEval out;
  out.point = block_soft_threshold(z, lam);
  out.envelope_gradient = z - out.point;
  out.envelope = lam * out.point.norm() + 0.5 * out.envelope_gradient.squaredNorm();
  return out;
}

L2JacobianElement jac_prox_scaled_l2(const Vector& z, double lam) {
  check_lam(lam);
  using Kind = L2JacobianElement::Kind;
  const double nz = z.norm();
  if (lam == 0.0) return L2JacobianElement(Kind::Smooth, z, lam);
  if (std::abs(nz - lam) <= kL2BoundaryTol * lam) return L2JacobianElement(Kind::Boundary, z, lam);
  if (nz > lam) return L2JacobianElement(Kind::Smooth, z, lam);
  return L2JacobianElement(Kind::Zero, z, lam);
}

ProxEval prox_weighted_l1(const Vector& z, const Vector& w) {
  check_weights(z, w);
  ProxEval out;
  out.point = soft_threshold(z, w);
  out.envelope_gradient = z - out.point;
  out.envelope = w.dot(out.point.cwiseAbs()) + 0.5 * out.envelope_gradient.squaredNorm();
  return out;
}

L1JacobianElement jac_prox_weighted_l1(const Vector& z, const Vector& w) {
  check_weights(z, w);
  L1JacobianElement out;
  out.diagonal = (z.array().abs() >= w.array()).cast<double>();
  return out;
}

double moreau_envelope_gradient_check(ProxFamily family, const Vector& z, double scale, double h) {
  const Vector w = Vector::Constant(z.size(), scale);
  auto eval = [&](const Vector& p) {
    return family == ProxFamily::ScaledL2 ? prox_scaled_l2(p, scale) : prox_weighted_l1(p, w);
  };
  const ProxEval at = eval(z);
  Vector fd(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    Vector zp = z, zm = z;
    zp(i) += h;
    zm(i) -= h;
    fd(i) = (eval(zp).envelope - eval(zm).envelope) / (2.0 * h);
  }
  return (at.envelope_gradient - fd).lpNorm<Eigen::Infinity>();
}

}  // namespace rsmv
