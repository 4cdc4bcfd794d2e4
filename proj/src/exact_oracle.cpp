#include "rsmv/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "rsmv/closed_form.hpp"

namespace rsmv {

namespace {

bool better(const SupportSolution& a, const SupportSolution& b) {
  if (a.objective != b.objective) return a.objective < b.objective;
  if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
  return a.support < b.support;
}

/// Advances `c` to the next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == n - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

}  // namespace

SupportSolution solve_support(const MarketModel& m, double kappa, double epsilon, const Vector& phi,
                              const std::vector<int>& support, OracleObjective objective) {
  if (support.empty()) throw std::invalid_argument("support must be nonempty");
  if (phi.size() != m.n()) throw std::invalid_argument("phi length must equal the asset count");
  const MarketModel sub = m.submarket(support);
  SupportSolution out;
  out.support = support;
  Vector xs;
  double value = 0.0;
  if (objective == OracleObjective::Robust) {
    xs = rmv(sub, kappa, epsilon).weights;
    value = rmv_objective(sub, kappa, epsilon, xs);
  } else {
    xs = l2_mv(sub, kappa, epsilon).weights;
    value = l2_objective(sub, kappa, epsilon, xs);
  }
  out.weights = Vector::Zero(m.n());
  for (std::size_t a = 0; a < support.size(); ++a) {
    out.weights(support[a]) = xs(static_cast<Eigen::Index>(a));
    value += phi(support[a]);
  }
  out.objective = value;
  out.scaled_objective = value / (2.0 * kappa);
  return out;
}

std::uint64_t support_count(int n, int max_card) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n, k)
  for (int k = 1; k <= std::min(n, max_card); ++k) {
    binom = binom * static_cast<std::uint64_t>(n - k + 1) / static_cast<std::uint64_t>(k);
    total += binom;
  }
  return total;
}

SupportSolution solve_exact(const MarketModel& m, double kappa, double epsilon, const Vector& phi,
                            std::optional<int> max_card, OracleObjective objective, int workers) {
  const int n = static_cast<int>(m.n());
  const int kmax = max_card ? std::clamp(*max_card, 1, n) : n;
  const std::uint64_t count = support_count(n, kmax);
  if (count > kEnumerationBudget || (n > 20 && !max_card)) {
    std::ostringstream os;
    os << "exact enumeration of " << count << " supports exceeds the budget of " << kEnumerationBudget;
    throw EnumerationBudgetError(os.str(), count);
  }
  if (phi.size() != m.n()) throw std::invalid_argument("phi length must equal the asset count");
  workers = std::max(1, workers);

  // Worker w evaluates every workers-th support in the global enumeration order.
  auto run = [&](int w, SupportSolution& best, bool& have) {
    std::uint64_t idx = 0;
    for (int k = 1; k <= kmax; ++k) {
      std::vector<int> c(k);
      for (int j = 0; j < k; ++j) c[j] = j;
      do {
        if (idx++ % static_cast<std::uint64_t>(workers) != static_cast<std::uint64_t>(w)) continue;
        SupportSolution s = solve_support(m, kappa, epsilon, phi, c, objective);
        if (!have || better(s, best)) {
          best = std::move(s);
          have = true;
        }
      } while (next_combination(c, n));
    }
  };

  std::vector<SupportSolution> best(workers);
  std::vector<char> have(workers, 0);
  if (workers == 1) {
    bool h = false;
    run(0, best[0], h);
    have[0] = h;
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        bool h = false;
        run(w, best[w], h);
        have[w] = h;
      });
    }
    for (auto& th : pool) th.join();
  }
  int pick = -1;
  for (int w = 0; w < workers; ++w) {
    if (!have[w]) continue;
    if (pick < 0 || better(best[w], best[pick])) pick = w;
  }
  return best[pick];
}

double relative_gap(double candidate, double exact) {
  return (candidate - exact) / std::max(std::abs(exact), 1e-12);
}

}  // namespace rsmv
