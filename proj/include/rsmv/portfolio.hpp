#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "rsmv/market_model.hpp"

namespace rsmv {

enum class PortfolioLabel { MV, MIN, WVaR, RMV, L2MV, EW, UNIFIED, SOLVER };

std::string_view to_string(PortfolioLabel label);

/// Weight vector on {e^T x = 1}.
struct Portfolio {
  Vector weights;
  PortfolioLabel label = PortfolioLabel::SOLVER;
  /// Optimal value of the defining problem when a closed form exists.
  std::optional<double> value;

  /// Indices with |x_i| > 1e-8 * max_j |x_j|.
  std::vector<int> support() const;
  int cardinality() const { return static_cast<int>(support().size()); }
  double budget_error() const { return std::abs(weights.sum() - 1.0); }
};

/// Relative support threshold shared by every module.
inline constexpr double kSupportRelTol = 1e-8;

std::vector<int> support_of(const Vector& x, double rel_tol = kSupportRelTol);

}  // namespace rsmv
