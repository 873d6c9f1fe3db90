#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sigpoa/game.hpp"
#include "sigpoa/linalg.hpp"
#include "sigpoa/scalar.hpp"

namespace sigpoa {

template <class Scalar>
struct EquilibriumSet {
  std::vector<MixedProfile<Scalar>> equilibria;
  bool degenerate = false;  // singular support system or non-isolated component
  bool perturbed = false;   // results come from the perturbed re-enumeration
};

template <class Scalar>
struct RatioValue {
  Scalar value = 0;
  bool infinite = false;
  bool by_convention = false;  // 0/0 resolved to 1
};

template <class Scalar>
RatioValue<Scalar> make_ratio(const Scalar& num, const Scalar& den) {
  const Scalar zero_tol = is_exact_v<Scalar> ? Scalar(0) : Scalar(1e-12);
  RatioValue<Scalar> r;
  if (abs_value<Scalar>(den) <= zero_tol) {
    if (abs_value<Scalar>(num) <= zero_tol) {
      r.value = 1;
      r.by_convention = true;
    } else {
      r.infinite = true;
      if constexpr (!is_exact_v<Scalar>) r.value = std::numeric_limits<double>::infinity();
    }
  } else {
    r.value = num / den;
  }
  return r;
}

template <class Scalar>
struct PoAReport {
  Scalar worst_welfare = 0;
  Scalar optimal_welfare_value = 0;
  RatioValue<Scalar> ratio;
  MixedProfile<Scalar> worst_equilibrium;
  PureProfile optimal_profile;
  bool degenerate = false;
};

namespace detail {

// Deterministic +/-1e-9 tie-breaking pattern. Strictly increasing in the
// acting player's own action index (inter-action gaps at least
// kappa/(actions+1)), with a hash term well below that gap so opponent-side
// ties break too without ever reordering own-action comparisons.
template <class Scalar>
Scalar perturbation_delta(int player, int own_action, int own_count, int flat_profile) {
  const std::uint64_t bits = hash_mix(static_cast<std::uint64_t>(player + 1),
                                      static_cast<std::uint64_t>(flat_profile + 1));
  Scalar rho;
  if constexpr (is_exact_v<Scalar>) {
    rho = Rational(bits >> 11, std::uint64_t(1) << 53);
  } else {
    rho = uniform01(bits);
  }
  const Scalar kappa = is_exact_v<Scalar> ? Scalar(Rational(1, 1000000000)) : Scalar(1e-9);
  Scalar t = (Scalar(own_action + 1) + rho / 2) / Scalar(own_count + 1);
  return kappa * (2 * t - 1);
}

template <class Scalar>
FiniteBayesianGame<Scalar> perturbed_copy(const FiniteBayesianGame<Scalar>& g) {
  FiniteBayesianGame<Scalar> p = g;
  const int profiles = g.profile_count();
  for (int flat = 0; flat < profiles; ++flat) {
    PureProfile s = g.unflatten(flat);
    for (int i = 0; i < g.player_count(); ++i)
      p.payoff[0](flat, i) += perturbation_delta<Scalar>(i, s[i], g.action_count(i), flat);
  }
  return p;
}

// Player i's gain (payoff gained / cost saved) from the best pure deviation.
template <class Scalar>
Scalar best_deviation_gain(const FiniteBayesianGame<Scalar>& g, const MixedProfile<Scalar>& x,
                           int player, int* best_action = nullptr) {
  const Scalar current = player_payoff(g, x, player);
  bool first = true;
  Scalar best = 0;
  for (int a = 0; a < g.action_count(player); ++a) {
    Scalar dev = deviation_payoff(g, x, player, a);
    Scalar gain = g.sense == ObjectiveSense::CostMin ? current - dev : dev - current;
    if (first || gain > best) {
      best = gain;
      if (best_action) *best_action = a;
      first = false;
    }
  }
  return best;
}

template <class Scalar>
bool is_epsilon_equilibrium(const FiniteBayesianGame<Scalar>& g, const MixedProfile<Scalar>& x,
                            const Scalar& eps) {
  for (int i = 0; i < g.player_count(); ++i)
    if (best_deviation_gain(g, x, i) > eps) return false;
  return true;
}

template <class Scalar>
bool profiles_close(const MixedProfile<Scalar>& a, const MixedProfile<Scalar>& b) {
  const Scalar tol = is_exact_v<Scalar> ? Scalar(0) : Scalar(1e-7);
  for (size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < a[i].size(); ++k)
      if (abs_value<Scalar>(a[i](k) - b[i](k)) > tol) return false;
  return true;
}

template <class Scalar>
bool profile_less(const MixedProfile<Scalar>& a, const MixedProfile<Scalar>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < a[i].size(); ++k) {
      if (a[i](k) < b[i](k)) return true;
      if (b[i](k) < a[i](k)) return false;
    }
  return false;
}

// Solve for a mixture over `support` that levels the opponent's payoff across
// `target_actions`; unknowns are the support weights plus the common value.
// Returns the full-length mix and value, or nullopt if inconsistent/invalid;
// flags underdetermined systems.
template <class Scalar>
struct IndifferenceSolution {
  VecX<Scalar> mix;
  Scalar value;
  bool underdetermined = false;
};

template <class Scalar>
std::optional<IndifferenceSolution<Scalar>> solve_indifference(
    const MatX<Scalar>& opponent_payoff,  // rows: mixing player's actions, cols: opponent's
    const std::vector<int>& support, const std::vector<int>& target_actions, int full_size) {
  const int k = static_cast<int>(support.size());
  const int rows = static_cast<int>(target_actions.size()) + 1;
  MatX<Scalar> a = MatX<Scalar>::Zero(rows, k + 1);
  VecX<Scalar> b = VecX<Scalar>::Zero(rows);
  for (int e = 0; e < rows - 1; ++e) {
    for (int j = 0; j < k; ++j) a(e, j) = opponent_payoff(support[j], target_actions[e]);
    a(e, k) = -1;
  }
  for (int j = 0; j < k; ++j) a(rows - 1, j) = 1;
  b(rows - 1) = 1;
  const Scalar pivot_tol = is_exact_v<Scalar> ? Scalar(0) : Scalar(1e-12);
  auto res = solve_linear_system<Scalar>(a, b, pivot_tol);
  if (!res.consistent) return std::nullopt;
  IndifferenceSolution<Scalar> out;
  out.underdetermined = res.underdetermined;
  out.value = res.solution(k);
  out.mix = VecX<Scalar>::Zero(full_size);
  const Scalar neg_slack = is_exact_v<Scalar> ? Scalar(0) : Scalar(1e-9);
  const Scalar support_floor = is_exact_v<Scalar> ? Scalar(0) : Scalar(1e-9);
  Scalar sum = 0;
  for (int j = 0; j < k; ++j) {
    Scalar v = res.solution(j);
    if (v < -neg_slack) return std::nullopt;
    if (v <= support_floor) return std::nullopt;  // boundary: owned by a smaller support
    out.mix(support[j]) = v;
    sum += v;
  }
  if (sum <= 0) return std::nullopt;
  for (int j = 0; j < k; ++j) out.mix(support[j]) /= sum;
  return out;
}

template <class Scalar>
EquilibriumSet<Scalar> enumerate_two_player(const FiniteBayesianGame<Scalar>& g,
                                            const Scalar& br_tol, const Scalar& tie_tol) {
  const int m = g.action_count(0);
  const int k = g.action_count(1);
  MatX<Scalar> a1(m, k), a2(m, k);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < k; ++c) {
      const int flat = r * k + c;
      a1(r, c) = g.payoff[0](flat, 0);
      a2(r, c) = g.payoff[0](flat, 1);
    }
  EquilibriumSet<Scalar> out;
  for (int mask1 = 1; mask1 < (1 << m); ++mask1) {
    std::vector<int> sup1;
    for (int r = 0; r < m; ++r)
      if (mask1 & (1 << r)) sup1.push_back(r);
    for (int mask2 = 1; mask2 < (1 << k); ++mask2) {
      std::vector<int> sup2;
      for (int c = 0; c < k; ++c)
        if (mask2 & (1 << c)) sup2.push_back(c);
      // P1's mix must level P2's payoffs across sup2, and vice versa.
      auto x = solve_indifference<Scalar>(a2, sup1, sup2, m);
      if (!x) continue;
      auto y = solve_indifference<Scalar>(a1.transpose(), sup2, sup1, k);
      if (!y) continue;
      MixedProfile<Scalar> prof = {x->mix, y->mix};
      bool ok = true;
      bool tied_outside = false;
      for (int i = 0; i < 2 && ok; ++i) {
        const Scalar current = player_payoff(g, prof, i);
        for (int a = 0; a < g.action_count(i); ++a) {
          Scalar dev = deviation_payoff(g, prof, i, a);
          Scalar gain = g.sense == ObjectiveSense::CostMin ? current - dev : dev - current;
          if (gain > br_tol) {
            ok = false;
            break;
          }
          const bool in_support = i == 0 ? (mask1 & (1 << a)) != 0 : (mask2 & (1 << a)) != 0;
          if (!in_support && abs_value<Scalar>(gain) <= tie_tol) tied_outside = true;
        }
      }
      if (!ok) continue;
      bool dup = false;
      for (const auto& q : out.equilibria)
        if (profiles_close(q, prof)) {
          dup = true;
          break;
        }
      if (dup) continue;
      if (x->underdetermined || y->underdetermined || tied_outside) out.degenerate = true;
      out.equilibria.push_back(std::move(prof));
    }
  }
  std::sort(out.equilibria.begin(), out.equilibria.end(), profile_less<Scalar>);
  return out;
}

template <class Scalar>
EquilibriumSet<Scalar> enumerate_single_player(const FiniteBayesianGame<Scalar>& g,
                                               const Scalar& br_tol) {
  const int m = g.action_count(0);
  Scalar best = g.payoff[0](0, 0);
  for (int a = 1; a < m; ++a) {
    Scalar v = g.payoff[0](a, 0);
    if (g.sense == ObjectiveSense::CostMin ? v < best : v > best) best = v;
  }
  EquilibriumSet<Scalar> out;
  for (int a = 0; a < m; ++a) {
    Scalar v = g.payoff[0](a, 0);
    Scalar gap = g.sense == ObjectiveSense::CostMin ? v - best : best - v;
    if (gap <= br_tol) out.equilibria.push_back(pure_as_mixed(g, PureProfile{a}));
  }
  // Ties form a face of equally good actions; flag but never perturb, the
  // objective value is the same everywhere on the face.
  out.degenerate = out.equilibria.size() > 1;
  return out;
}

}  // namespace detail

/// Exhaustive pure-equilibrium scan, the only mode offered for 3+ players.
template <class Scalar>
std::vector<PureProfile> enumerate_pure_equilibria(const FiniteBayesianGame<Scalar>& g) {
  if (!g.single_state()) throw std::invalid_argument("equilibria require a single-state game");
  std::vector<PureProfile> out;
  const int profiles = g.profile_count();
  for (int flat = 0; flat < profiles; ++flat) {
    PureProfile s = g.unflatten(flat);
    auto x = pure_as_mixed(g, s);
    if (detail::is_epsilon_equilibrium(g, x, Tol<Scalar>::best_response())) out.push_back(s);
  }
  return out;
}

/// Mixed-equilibrium enumeration for 1- and 2-player single-state games.
/// Degenerate inputs (singular support systems, non-isolated components) are
/// re-enumerated on a deterministically perturbed copy; the returned set then
/// carries both the perturbed equilibria and degenerate = true.
template <class Scalar>
EquilibriumSet<Scalar> enumerate_equilibria(const FiniteBayesianGame<Scalar>& g) {
  if (!g.single_state()) throw std::invalid_argument("equilibria require a single-state game");
  const int n = g.player_count();
  if (n == 1) return detail::enumerate_single_player(g, Tol<Scalar>::best_response());
  if (n != 2)
    throw std::invalid_argument("mixed enumeration supports at most 2 players; use enumerate_pure_equilibria");
  for (int i = 0; i < 2; ++i)
    if (g.action_count(i) > 6)
      throw std::invalid_argument("support enumeration limited to 6 actions per player");
  auto first = detail::enumerate_two_player(g, Tol<Scalar>::best_response(), Tol<Scalar>::tie());
  if (!first.degenerate) return first;
  auto p = detail::perturbed_copy(g);
  auto second = detail::enumerate_two_player(p, Tol<Scalar>::perturbed_best_response(),
                                             Tol<Scalar>::perturbed_tie());
  second.degenerate = true;
  second.perturbed = true;
  return second;
}

/// Worst-case equilibrium selection: the most costly equilibrium for
/// cost-minimization, the least profitable for payoff-maximization. Welfare is
/// always evaluated on the unperturbed game. Ties keep the first candidate in
/// the set's deterministic order.
template <class Scalar>
std::pair<Scalar, MixedProfile<Scalar>> worst_equilibrium_welfare(
    const FiniteBayesianGame<Scalar>& g) {
  if (!g.single_state()) throw std::invalid_argument("worst_equilibrium_welfare requires a single-state game");
  std::vector<MixedProfile<Scalar>> candidates;
  if (g.player_count() <= 2) {
    candidates = enumerate_equilibria(g).equilibria;
  } else {
    for (const auto& s : enumerate_pure_equilibria(g)) candidates.push_back(pure_as_mixed(g, s));
  }
  if (candidates.empty())
    throw std::runtime_error("no equilibrium found (3+ player games offer pure equilibria only)");
  size_t best = 0;
  Scalar best_w = welfare(g, candidates[0]);
  for (size_t i = 1; i < candidates.size(); ++i) {
    Scalar w = welfare(g, candidates[i]);
    const bool worse = g.sense == ObjectiveSense::CostMin ? (w > best_w) : (w < best_w);
    if (worse) {
      best = i;
      best_w = w;
    }
  }
  return {best_w, candidates[best]};
}

/// Eq-style price of anarchy of a complete-information game: worst equilibrium
/// welfare over optimal welfare (>= 1 for costs, in [0,1] for payoffs).
template <class Scalar>
PoAReport<Scalar> price_of_anarchy(const FiniteBayesianGame<Scalar>& g) {
  PoAReport<Scalar> rep;
  auto [w, eq] = worst_equilibrium_welfare(g);
  auto [opt, s] = optimal_welfare(g);
  rep.worst_welfare = w;
  rep.optimal_welfare_value = opt;
  rep.worst_equilibrium = std::move(eq);
  rep.optimal_profile = std::move(s);
  if (g.player_count() <= 2) rep.degenerate = enumerate_equilibria(g).degenerate;
  rep.ratio = make_ratio<Scalar>(w, opt);
  return rep;
}

/// Worst per-state PoA of a Bayesian game: the maximum for cost minimization,
/// the minimum for payoff maximization (the direction the signaling bound
/// compares against in each sense).
template <class Scalar>
RatioValue<Scalar> poa_max(const FiniteBayesianGame<Scalar>& g) {
  RatioValue<Scalar> best;
  bool first = true;
  for (int t = 0; t < g.state_count(); ++t) {
    auto rep = price_of_anarchy(state_game(g, t));
    if (first) {
      best = rep.ratio;
      first = false;
      continue;
    }
    if (g.sense == ObjectiveSense::CostMin) {
      if (rep.ratio.infinite)
        best = rep.ratio;
      else if (!best.infinite && rep.ratio.value > best.value)
        best = rep.ratio;
    } else {
      if (best.infinite)
        best = rep.ratio;
      else if (!rep.ratio.infinite && rep.ratio.value < best.value)
        best = rep.ratio;
    }
  }
  return best;
}

}  // namespace sigpoa
