#include "rsmv/portfolio.hpp"

#include <cmath>

namespace rsmv {

std::string_view to_string(PortfolioLabel label) {
  switch (label) {
    case PortfolioLabel::MV: return "MV";
    case PortfolioLabel::MIN: return "MIN";
    case PortfolioLabel::WVaR: return "WVaR";
    case PortfolioLabel::RMV: return "RMV";
    case PortfolioLabel::L2MV: return "L2MV";
    case PortfolioLabel::EW: return "EW";
    case PortfolioLabel::UNIFIED: return "UNIFIED";
    case PortfolioLabel::SOLVER: return "SOLVER";
  }
  return "SOLVER";
}

std::vector<int> support_of(const Vector& x, double rel_tol) {
  std::vector<int> s;
  if (x.size() == 0) return s;
  const double cut = rel_tol * x.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) > cut) s.push_back(static_cast<int>(i));
  return s;
}

std::vector<int> Portfolio::support() const { return support_of(weights); }

}  // namespace rsmv
