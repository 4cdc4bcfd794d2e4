#pragma once

#include <string_view>

#include "rsmv/market_model.hpp"

namespace rsmv {

/// Proximal point of z together with the Moreau envelope at z.
struct ProxEval {
  Vector point;
  double envelope = 0.0;
  Vector envelope_gradient;  // z - point
};

/// Element of the generalized Jacobian of prox_{lam ||.||} at z, applied
/// as an operator.
class L2JacobianElement {
 public:
  enum class Kind { Smooth, Boundary, Zero };

  L2JacobianElement() = default;
  L2JacobianElement(Kind kind, Vector z, double lam);

  Kind kind() const { return kind_; }
  Vector apply(const Vector& v) const;
  Vector diagonal() const;
  /// Dense form, for tests on small n.
  Matrix dense() const;

 private:
  Kind kind_ = Kind::Zero;
  Vector z_;
  double lam_ = 0.0;
  double znorm_ = 0.0;
};

/// Diagonal 0/1 Jacobian element of the weighted soft threshold.
struct L1JacobianElement {
  Vector diagonal;

  Vector apply(const Vector& v) const { return diagonal.cwiseProduct(v); }
};

/// Relative width of the band treated as ||z|| == lam.
inline constexpr double kL2BoundaryTol = 1e-12;

/// prox of lam ||.||_2 (block soft threshold). lam == 0 gives the identity.
ProxEval prox_scaled_l2(const Vector& z, double lam);
L2JacobianElement jac_prox_scaled_l2(const Vector& z, double lam);

/// Componentwise soft threshold with thresholds w >= 0.
ProxEval prox_weighted_l1(const Vector& z, const Vector& w);
L1JacobianElement jac_prox_weighted_l1(const Vector& z, const Vector& w);

/// Point-only versions for hot loops.
Vector soft_threshold(const Vector& z, const Vector& w);
Vector block_soft_threshold(const Vector& z, double lam);

enum class ProxFamily { ScaledL2, WeightedL1 };

/// ||(z - prox(z)) - central difference gradient of the envelope||_inf.
/// For ScaledL2 `scale` is lam; for WeightedL1 every threshold equals `scale`.
double moreau_envelope_gradient_check(ProxFamily family, const Vector& z, double scale,
                                      double h = 1e-6);

}  // namespace rsmv
