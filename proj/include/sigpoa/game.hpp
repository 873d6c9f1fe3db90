#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigpoa/scalar.hpp"

namespace sigpoa {

enum class ObjectiveSense { CostMin, PayoffMax };

inline const char* to_string(ObjectiveSense s) {
  return s == ObjectiveSense::CostMin ? "cost" : "payoff";
}

// One action index per player.
using PureProfile = std::vector<int>;

// Per-player distribution over that player's actions.
template <class Scalar>
using MixedProfile = std::vector<VecX<Scalar>>;

template <class Scalar>
using PosteriorBelief = VecX<Scalar>;

/// Finite Bayesian game: a state set with a common prior and one non-negative
/// payoff (or cost) tensor per state. The tensor for a state is stored dense,
/// one row per pure action profile and one column per player; profiles are
/// flattened row-major with player 1 slowest, matching the JSON nesting
/// payoff[state][s1][s2]...[player].
template <class Scalar>
struct FiniteBayesianGame {
  ObjectiveSense sense = ObjectiveSense::PayoffMax;
  std::vector<std::string> states;
  VecX<Scalar> prior;
  std::vector<std::vector<std::string>> actions;
  std::vector<MatX<Scalar>> payoff;

  int state_count() const { return static_cast<int>(states.size()); }
  int player_count() const { return static_cast<int>(actions.size()); }
  int action_count(int player) const { return static_cast<int>(actions[player].size()); }

  int profile_count() const {
    int n = 1;
    for (const auto& a : actions) n *= static_cast<int>(a.size());
    return n;
  }

  int flat_index(const PureProfile& s) const {
    int idx = 0;
    for (int i = 0; i < player_count(); ++i) idx = idx * action_count(i) + s[i];
    return idx;
  }

  PureProfile unflatten(int idx) const {
    PureProfile s(player_count());
    for (int i = player_count() - 1; i >= 0; --i) {
      s[i] = idx % action_count(i);
      idx /= action_count(i);
    }
    return s;
  }

  int state_index(const std::string& label) const {
    auto it = std::find(states.begin(), states.end(), label);
    if (it == states.end())
      throw std::invalid_argument("unknown state label '" + label + "'");
    return static_cast<int>(it - states.begin());
  }

  bool single_state() const { return state_count() == 1; }
};

namespace detail {
inline std::string idx_str(int i) { return std::to_string(i); }
}  // namespace detail

/// Structural and probabilistic invariants; throws with a field-precise
/// message on the first violation.
template <class Scalar>
void validate(const FiniteBayesianGame<Scalar>& g) {
  if (g.states.empty()) throw std::invalid_argument("states: must be non-empty");
  if (g.actions.empty()) throw std::invalid_argument("actions: need at least one player");
  for (int i = 0; i < g.player_count(); ++i)
    if (g.actions[i].empty())
      throw std::invalid_argument("actions[" + detail::idx_str(i) + "]: player has no actions");
  if (g.prior.size() != g.state_count())
    throw std::invalid_argument("prior: length " + detail::idx_str(static_cast<int>(g.prior.size())) +
                                " does not match " + detail::idx_str(g.state_count()) + " states");
  Scalar sum = 0;
  for (int t = 0; t < g.state_count(); ++t) {
    if (g.prior(t) < 0)
      throw std::invalid_argument("prior[" + detail::idx_str(t) + "]: negative entry");
    sum += g.prior(t);
  }
  if (abs_value<Scalar>(sum - Scalar(1)) > Tol<Scalar>::internal() &&
      abs_value<Scalar>(sum - Scalar(1)) > Tol<Scalar>::input())
    throw std::invalid_argument("prior: entries sum to " + std::to_string(to_double(sum)) +
                                ", expected 1");
  if (static_cast<int>(g.payoff.size()) != g.state_count())
    throw std::invalid_argument("payoff: expected one tensor slice per state");
  const int profiles = g.profile_count();
  for (int t = 0; t < g.state_count(); ++t) {
    if (g.payoff[t].rows() != profiles || g.payoff[t].cols() != g.player_count())
      throw std::invalid_argument("payoff[" + detail::idx_str(t) + "]: dimensions inconsistent with actions/players");
    for (int s = 0; s < profiles; ++s)
      for (int i = 0; i < g.player_count(); ++i)
        if (g.payoff[t](s, i) < 0)
          throw std::invalid_argument("payoff[" + detail::idx_str(t) + "][profile " + detail::idx_str(s) +
                                      "][player " + detail::idx_str(i) + "]: negative entry");
  }
}

template <class Scalar>
void validate_belief(const FiniteBayesianGame<Scalar>& g, const PosteriorBelief<Scalar>& b) {
  if (b.size() != g.state_count())
    throw std::invalid_argument("belief: length does not match state count");
  Scalar sum = 0;
  for (int t = 0; t < b.size(); ++t) {
    if (b(t) < -Tol<Scalar>::input())
      throw std::invalid_argument("belief[" + detail::idx_str(t) + "]: negative entry");
    sum += b(t);
  }
  if (abs_value<Scalar>(sum - Scalar(1)) > Tol<Scalar>::input())
    throw std::invalid_argument("belief: entries must sum to 1");
}

template <class Scalar>
void validate_profile(const FiniteBayesianGame<Scalar>& g, const MixedProfile<Scalar>& x) {
  if (static_cast<int>(x.size()) != g.player_count())
    throw std::invalid_argument("profile: player count mismatch");
  for (int i = 0; i < g.player_count(); ++i) {
    if (x[i].size() != g.action_count(i))
      throw std::invalid_argument("profile[" + detail::idx_str(i) + "]: action count mismatch");
    Scalar sum = 0;
    for (int a = 0; a < x[i].size(); ++a) {
      if (x[i](a) < -Tol<Scalar>::input())
        throw std::invalid_argument("profile[" + detail::idx_str(i) + "]: negative probability");
      sum += x[i](a);
    }
    if (abs_value<Scalar>(sum - Scalar(1)) > Tol<Scalar>::input())
      throw std::invalid_argument("profile[" + detail::idx_str(i) + "]: probabilities must sum to 1");
  }
}

/// Extracts the complete-information game played at one state.
template <class Scalar>
FiniteBayesianGame<Scalar> state_game(const FiniteBayesianGame<Scalar>& g, int state) {
  if (state < 0 || state >= g.state_count())
    throw std::invalid_argument("unknown state index " + detail::idx_str(state));
  FiniteBayesianGame<Scalar> out;
  out.sense = g.sense;
  out.states = {g.states[state]};
  out.prior = VecX<Scalar>::Constant(1, Scalar(1));
  out.actions = g.actions;
  out.payoff = {g.payoff[state]};
  return out;
}

template <class Scalar>
FiniteBayesianGame<Scalar> state_game(const FiniteBayesianGame<Scalar>& g, const std::string& label) {
  return state_game(g, g.state_index(label));
}

/// The average game induced by a common posterior: the belief-weighted mix of
/// the per-state tensors, played as a complete-information game.
template <class Scalar>
FiniteBayesianGame<Scalar> posterior_game(const FiniteBayesianGame<Scalar>& g,
                                          const PosteriorBelief<Scalar>& b) {
  validate_belief(g, b);
  FiniteBayesianGame<Scalar> out;
  out.sense = g.sense;
  out.states = {"posterior"};
  out.prior = VecX<Scalar>::Constant(1, Scalar(1));
  out.actions = g.actions;
  MatX<Scalar> avg = MatX<Scalar>::Zero(g.profile_count(), g.player_count());
  for (int t = 0; t < g.state_count(); ++t)
    for (int s = 0; s < avg.rows(); ++s)
      for (int i = 0; i < avg.cols(); ++i) avg(s, i) += b(t) * g.payoff[t](s, i);
  out.payoff = {std::move(avg)};
  return out;
}

/// Player-sum payoff of a pure profile in a single-state game.
template <class Scalar>
Scalar welfare_pure(const FiniteBayesianGame<Scalar>& g, int flat_profile) {
  Scalar w = 0;
  for (int i = 0; i < g.player_count(); ++i) w += g.payoff[0](flat_profile, i);
  return w;
}

template <class Scalar>
Scalar welfare_pure(const FiniteBayesianGame<Scalar>& g, const PureProfile& s) {
  return welfare_pure(g, g.flat_index(s));
}

/// Expected player-sum payoff under a mixed profile (multilinear expectation).
template <class Scalar>
Scalar welfare(const FiniteBayesianGame<Scalar>& g, const MixedProfile<Scalar>& x) {
  validate_profile(g, x);
  const int profiles = g.profile_count();
  Scalar total = 0;
  for (int flat = 0; flat < profiles; ++flat) {
    PureProfile s = g.unflatten(flat);
    Scalar p = 1;
    for (int i = 0; i < g.player_count(); ++i) p *= x[i](s[i]);
    if (p == 0) continue;
    total += p * welfare_pure(g, flat);
  }
  return total;
}

/// Expected payoff of one player under a mixed profile.
template <class Scalar>
Scalar player_payoff(const FiniteBayesianGame<Scalar>& g, const MixedProfile<Scalar>& x, int player) {
  const int profiles = g.profile_count();
  Scalar total = 0;
  for (int flat = 0; flat < profiles; ++flat) {
    PureProfile s = g.unflatten(flat);
    Scalar p = 1;
    for (int i = 0; i < g.player_count(); ++i) p *= x[i](s[i]);
    if (p == 0) continue;
    total += p * g.payoff[0](flat, player);
  }
  return total;
}

/// Player i's expected payoff when they play pure action `a` against the
/// opponents' mixture in x (x[i] itself is ignored).
template <class Scalar>
Scalar deviation_payoff(const FiniteBayesianGame<Scalar>& g, const MixedProfile<Scalar>& x,
                        int player, int a) {
  const int profiles = g.profile_count();
  Scalar total = 0;
  for (int flat = 0; flat < profiles; ++flat) {
    PureProfile s = g.unflatten(flat);
    if (s[player] != a) continue;
    Scalar p = 1;
    for (int j = 0; j < g.player_count(); ++j)
      if (j != player) p *= x[j](s[j]);
    if (p == 0) continue;
    total += p * g.payoff[0](flat, player);
  }
  return total;
}

template <class Scalar>
MixedProfile<Scalar> pure_as_mixed(const FiniteBayesianGame<Scalar>& g, const PureProfile& s) {
  MixedProfile<Scalar> x(g.player_count());
  for (int i = 0; i < g.player_count(); ++i) {
    x[i] = VecX<Scalar>::Zero(g.action_count(i));
    x[i](s[i]) = 1;
  }
  return x;
}

/// Exact welfare optimum over pure profiles by exhaustive enumeration; an
/// optimal profile is always pure because welfare is multilinear. Ties break
/// toward the lexicographically smallest profile (= lowest flat index).
template <class Scalar>
std::pair<Scalar, PureProfile> optimal_welfare(const FiniteBayesianGame<Scalar>& g) {
  const int profiles = g.profile_count();
  int best = 0;
  Scalar best_w = welfare_pure(g, 0);
  for (int flat = 1; flat < profiles; ++flat) {
    Scalar w = welfare_pure(g, flat);
    const bool better = g.sense == ObjectiveSense::CostMin ? (w < best_w) : (w > best_w);
    if (better) {
      best = flat;
      best_w = w;
    }
  }
  return {best_w, g.unflatten(best)};
}

/// Prior-weighted sum of per-state optimal welfare: the information-free bound
/// no scheme can beat (floor for cost minimization, ceiling for payoffs).
template <class Scalar>
Scalar welfare_bound(const FiniteBayesianGame<Scalar>& g) {
  Scalar total = 0;
  for (int t = 0; t < g.state_count(); ++t)
    total += g.prior(t) * optimal_welfare(state_game(g, t)).first;
  return total;
}

}  // namespace sigpoa
