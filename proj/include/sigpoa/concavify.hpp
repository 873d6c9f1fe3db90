#pragma once

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "sigpoa/game.hpp"
#include "sigpoa/lp.hpp"

namespace sigpoa {

namespace detail {

// Index-sharded parallel map; output order is by index, so results are
// identical regardless of scheduling.
inline void parallel_for(int count, const std::function<void(int)>& body) {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers < 2 || count < 64) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  workers = std::min<unsigned>(workers, 8);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = static_cast<int>(w); i < count; i += static_cast<int>(workers)) body(i);
    });
  for (auto& t : pool) t.join();
}

inline void enumerate_compositions(int total, int parts, std::vector<int>& cur,
                                   std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    enumerate_compositions(total - k, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// Snap a distribution onto the uniform grid with the given resolution:
/// floor the scaled coordinates, then hand out the remaining mass by largest
/// fractional part (ties to the lowest index).
inline Eigen::VectorXd snap_to_grid(const Eigen::VectorXd& p, int resolution) {
  const int t = static_cast<int>(p.size());
  std::vector<int> m(t);
  std::vector<double> frac(t);
  int assigned = 0;
  for (int i = 0; i < t; ++i) {
    double scaled = p(i) * resolution;
    m[i] = static_cast<int>(std::floor(scaled + 1e-12));
    frac[i] = scaled - m[i];
    assigned += m[i];
  }
  int remaining = resolution - assigned;
  while (remaining > 0) {
    int best = 0;
    for (int i = 1; i < t; ++i)
      if (frac[i] > frac[best]) best = i;
    ++m[best];
    frac[best] = -1;
    --remaining;
  }
  while (remaining < 0) {  // defensive: rounding pushed us over
    int best = 0;
    for (int i = 1; i < t; ++i)
      if (m[i] > m[best]) best = i;
    --m[best];
    ++remaining;
  }
  Eigen::VectorXd out(t);
  for (int i = 0; i < t; ++i) out(i) = static_cast<double>(m[i]) / resolution;
  return out;
}

struct ConcavifyResult {
  double value = 0;
  Eigen::VectorXd snapped_prior;
  // Supporting mixture: (weight, grid posterior), weights sum to 1 and the
  // posteriors average to the snapped prior.
  std::vector<std::pair<double, Eigen::VectorXd>> mixture;
};

/// Optimum of the grid-restricted envelope of a posterior value function at
/// the prior: choose a distribution over grid posteriors averaging to the
/// prior that maximizes (payoff) or minimizes (cost) the expected value. The
/// support is recovered from the LP vertex; ties break toward fewer signals by
/// collapsing to the single-signal scheme whenever it already attains the
/// optimum.
inline ConcavifyResult concavify_on_grid(const Eigen::VectorXd& prior, ObjectiveSense sense,
                                         int resolution,
                                         const std::function<double(const Eigen::VectorXd&)>& value_fn) {
  const int t = static_cast<int>(prior.size());
  if (t > 3) throw std::invalid_argument("grid envelope supports at most 3 states");
  if (resolution < 1) throw std::invalid_argument("grid resolution must be positive");

  ConcavifyResult res;
  res.snapped_prior = snap_to_grid(prior, resolution);
  if (t == 1) {
    res.value = value_fn(prior);
    res.mixture = {{1.0, prior}};
    return res;
  }

  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  detail::enumerate_compositions(resolution, t, cur, comps);
  const int count = static_cast<int>(comps.size());
  std::vector<Eigen::VectorXd> points(count);
  std::vector<double> values(count);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd b(t);
    for (int i = 0; i < t; ++i) b(i) = static_cast<double>(comps[k][i]) / resolution;
    points[k] = std::move(b);
  }
  detail::parallel_for(count, [&](int k) { values[k] = value_fn(points[k]); });

  LinearProgram<double> lp;
  lp.sense = sense == ObjectiveSense::PayoffMax ? LpObjective::Maximize : LpObjective::Minimize;
  lp.objective = Eigen::VectorXd(count);
  for (int k = 0; k < count; ++k) lp.objective(k) = values[k];
  lp.constraints = Eigen::MatrixXd(t + 1, count);
  lp.rhs = Eigen::VectorXd(t + 1);
  for (int i = 0; i < t; ++i) {
    for (int k = 0; k < count; ++k) lp.constraints(i, k) = points[k](i);
    lp.rhs(i) = res.snapped_prior(i);
  }
  for (int k = 0; k < count; ++k) lp.constraints(t, k) = 1.0;
  lp.rhs(t) = 1.0;
  lp.row_sense.assign(t + 1, ConstraintSense::Equal);

  auto sol = solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("grid envelope LP failed: " + sol.diagnostic);
  res.value = sol.value;

  // Prefer the single-signal scheme when it ties the optimum.
  int prior_idx = -1;
  for (int k = 0; k < count; ++k)
    if ((points[k] - res.snapped_prior).cwiseAbs().maxCoeff() < 1e-15) {
      prior_idx = k;
      break;
    }
  if (prior_idx >= 0 && std::abs(values[prior_idx] - res.value) <= 1e-12 * std::max(1.0, std::abs(res.value))) {
    res.mixture = {{1.0, points[prior_idx]}};
    return res;
  }

  double total = 0;
  for (int k = 0; k < count; ++k) {
    if (sol.point(k) <= 1e-12) continue;
    res.mixture.emplace_back(sol.point(k), points[k]);
    total += sol.point(k);
  }
  for (auto& [w, b] : res.mixture) w /= total;
  return res;
}

}  // namespace sigpoa
