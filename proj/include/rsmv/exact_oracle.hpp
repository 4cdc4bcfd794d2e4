#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rsmv/market_model.hpp"

namespace rsmv {

/// Which robust term the exact oracle minimizes.
enum class OracleObjective {
  /// kappa x^T S x + sqrt(eps) sqrt(x^T S x) - r^T x + phi^T 1(x)
  Robust,
  /// kappa x^T S x - r^T x + sqrt(eps) |x|^2 + phi^T 1(x)
  RidgeL2,
};

struct SupportSolution {
  std::vector<int> support;
  Vector weights;
  /// Unscaled objective including the sum of phi over the support.
  double objective = 0.0;
  /// objective / (2 kappa), comparable with solver reports.
  double scaled_objective = 0.0;
};

/// Raised when an enumeration would exceed the support budget.
class EnumerationBudgetError : public std::invalid_argument {
 public:
  EnumerationBudgetError(const std::string& what, std::uint64_t count)
      : std::invalid_argument(what), count_(count) {}
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_;
};

inline constexpr std::uint64_t kEnumerationBudget = 2'000'000;

SupportSolution solve_support(const MarketModel& m, double kappa, double epsilon, const Vector& phi,
                              const std::vector<int>& support,
                              OracleObjective objective = OracleObjective::Robust);

/// Number of nonempty supports of size at most max_card.
std::uint64_t support_count(int n, int max_card);

/// Enumerates every support (up to max_card) and returns the minimizer.
/// Ties go to the smaller cardinality, then to the lexicographically smaller support.
SupportSolution solve_exact(const MarketModel& m, double kappa, double epsilon, const Vector& phi,
                            std::optional<int> max_card = std::nullopt,
                            OracleObjective objective = OracleObjective::Robust, int workers = 1);

/// (candidate - exact) / max(|exact|, 1e-12).
double relative_gap(double candidate, double exact);

}  // namespace rsmv
