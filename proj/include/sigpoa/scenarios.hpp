#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigpoa/game.hpp"
#include "sigpoa/routing.hpp"
#include "sigpoa/signaling.hpp"

namespace sigpoa {

enum class ScenarioId { Fig1, Fig2, Fig3, Sec51, Fig4, Fig5, AppA };

inline const char* to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::Fig1: return "fig1";
    case ScenarioId::Fig2: return "fig2";
    case ScenarioId::Fig3: return "fig3";
    case ScenarioId::Sec51: return "sec51";
    case ScenarioId::Fig4: return "fig4";
    case ScenarioId::Fig5: return "fig5";
    case ScenarioId::AppA: return "appA";
  }
  return "?";
}

inline ScenarioId parse_scenario_id(std::string name) {
  for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (name == "fig1") return ScenarioId::Fig1;
  if (name == "fig2") return ScenarioId::Fig2;
  if (name == "fig3") return ScenarioId::Fig3;
  if (name == "sec51") return ScenarioId::Sec51;
  if (name == "fig4") return ScenarioId::Fig4;
  if (name == "fig5") return ScenarioId::Fig5;
  if (name == "appa") return ScenarioId::AppA;
  throw std::invalid_argument("unknown scenario '" + name +
                              "' (expected fig1|fig2|fig3|sec51|fig4|fig5|appA)");
}

inline bool scenario_is_routing(ScenarioId id) {
  return id == ScenarioId::Fig1 || id == ScenarioId::Fig2 || id == ScenarioId::Fig3;
}

inline bool scenario_uses_eps(ScenarioId id) {
  return id == ScenarioId::Sec51 || id == ScenarioId::Fig4 || id == ScenarioId::Fig5;
}

inline bool scenario_uses_n(ScenarioId id) { return id == ScenarioId::AppA; }

/// A fully built worked example: the instance plus the closed-form value map
/// the acceptance checks compare against. Expected keys (as applicable):
/// fi, ni, pub, pri, exp, opt, poa, pos_pub_fi, pos_pri_pub, pos_exp_pri,
/// pos_pub_ni.
template <class Scalar>
struct ScenarioCase {
  ScenarioId id;
  Scalar alpha = 0;
  Scalar eps = 0;
  int n = 0;
  bool boundary = false;  // parameter point where every ratio collapses to 1
  std::optional<FiniteBayesianGame<Scalar>> game;
  std::optional<RoutingInstance> routing;
  std::map<std::string, Scalar> expected;
};

/// The scheme objects the source constructions exhibit, in whichever form the
/// evaluators take them.
template <class Scalar>
struct ScenarioScheme {
  SchemeClass cls;
  std::optional<PublicScheme<Scalar>> public_scheme;
  std::optional<PrivateScheme<Scalar>> private_scheme;
  std::optional<ExAnteScheme<Scalar>> ex_ante_scheme;
  std::optional<SegmentedScheme> segmented;               // routing private schemes
  std::optional<std::vector<FlowProfile>> recommended_flows;  // routing ex-ante schemes
};

namespace detail {

template <class Scalar>
MatX<Scalar> profile_matrix(int profiles, int players) {
  return MatX<Scalar>::Zero(profiles, players);
}

template <class Scalar>
FiniteBayesianGame<Scalar> make_two_player(ObjectiveSense sense,
                                           std::vector<std::string> actions1,
                                           std::vector<std::string> actions2,
                                           std::vector<MatX<Scalar>> payoff) {
  FiniteBayesianGame<Scalar> g;
  g.sense = sense;
  g.states = {"theta1", "theta2"};
  g.prior = VecX<Scalar>::Constant(2, Scalar(1) / Scalar(2));
  g.actions = {std::move(actions1), std::move(actions2)};
  g.payoff = std::move(payoff);
  validate(g);
  return g;
}

template <class Scalar>
void set_entry(MatX<Scalar>& m, int cols, int r, int c, const std::type_identity_t<Scalar>& u1,
               const std::type_identity_t<Scalar>& u2) {
  m(r * cols + c, 0) = u1;
  m(r * cols + c, 1) = u2;
}

inline double pigou_demand(double alpha) {
  if (alpha == 0) return std::exp(-1.0);  // continuous limit of (1/(a+1))^(1/a)
  return std::pow(1.0 / (alpha + 1.0), 1.0 / alpha);
}

inline double pigou_optimal_cost(double alpha) {
  const double d = pigou_demand(alpha);
  if (alpha == 0) return 1.0;
  return std::pow(d, alpha + 1.0) + 1.0 - d;
}

inline RoutingInstance routing_skeleton(std::vector<std::string> nodes) {
  RoutingInstance inst;
  inst.nodes = std::move(nodes);
  inst.states = {"theta1", "theta2"};
  inst.prior = Eigen::VectorXd::Constant(2, 0.5);
  return inst;
}

inline LatencyTerm poly(double a, double d) { return LatencyTerm{a, d, 0.0}; }
inline LatencyTerm flat(double b) { return LatencyTerm{0.0, 0.0, b}; }

}  // namespace detail

template <class Scalar>
ScenarioCase<Scalar> build_scenario(ScenarioId id, Scalar alpha = 0, Scalar eps = 0, int n = 0) {
  ScenarioCase<Scalar> out;
  out.id = id;
  out.alpha = alpha;
  out.eps = eps;
  out.n = n;

  const Scalar one(1), two(2);

  switch (id) {
    case ScenarioId::Fig1:
    case ScenarioId::Fig2:
    case ScenarioId::Fig3: {
      if constexpr (is_exact_v<Scalar>) {
        throw std::invalid_argument("routing scenarios need floating-point arithmetic "
                                    "(latency exponents are irrational powers)");
      } else {
        if (alpha < 0)
          throw std::invalid_argument(std::string(to_string(id)) + " requires alpha >= 0");
        out.boundary = alpha == 0;
        const double a = alpha;
        const double d = detail::pigou_demand(a);
        const double opt = detail::pigou_optimal_cost(a);
        const double ratio = pigou_poa(a);
        RoutingInstance inst;
        if (id == ScenarioId::Fig1) {
          inst = detail::routing_skeleton({"s1", "s2", "t"});
          inst.edges = {
              {0, 2, {detail::poly(1, a), detail::poly(1, a)}},   // s1 -> t : x^a
              {1, 2, {detail::flat(1), detail::flat(1)}},         // s2 -> t : 1
              {1, 0, {detail::flat(2), detail::flat(0)}},         // s2 -> s1, decoy at theta1
              {1, 0, {detail::flat(0), detail::flat(2)}},         // s2 -> s1, decoy at theta2
          };
          inst.commodities = {{0, 2, d}, {1, 2, 1.0 - d}};
          out.expected = {{"fi", 1.0},        {"pub", opt},        {"opt", opt},
                          {"poa", ratio},     {"pos_pub_fi", ratio}};
        } else if (id == ScenarioId::Fig2) {
          inst = detail::routing_skeleton({"s", "t"});
          inst.edges = {
              {0, 1, {detail::flat(2), detail::poly(1, a)}},  // top
              {0, 1, {detail::poly(1, a), detail::flat(2)}},  // middle
              {0, 1, {detail::flat(1), detail::flat(1)}},     // bottom
          };
          inst.commodities = {{0, 1, 1.0}};
          out.expected = {{"fi", 1.0},     {"ni", 1.0},          {"pub", 1.0},
                          {"pri", opt},    {"opt", opt},         {"poa", ratio},
                          {"pos_pri_pub", ratio}};
        } else {
          inst = detail::routing_skeleton({"s", "t"});
          inst.edges = {
              {0, 1, {detail::flat(a + 1), detail::poly(1, a)}},  // edge 1
              {0, 1, {detail::flat(a + 1), detail::flat(1)}},     // edge 2
              {0, 1, {detail::flat(1), detail::flat(a + 1)}},     // edge 3
              {0, 1, {detail::poly(1, a), detail::flat(a + 1)}},  // edge 4
          };
          inst.commodities = {{0, 1, 1.0}};
          out.expected = {{"fi", 1.0},     {"pri", 1.0},         {"exp", opt},
                          {"opt", opt},    {"poa", ratio},       {"pos_exp_pri", ratio}};
        }
        finalize_instance(inst);
        out.routing = std::move(inst);
      }
      break;
    }

    case ScenarioId::Sec51: {
      if (!(eps > 0) || !(alpha - one > two * eps))
        throw std::invalid_argument("sec51 requires alpha - 1 > 2*eps > 0");
      const int cols = 2;
      MatX<Scalar> t1 = detail::profile_matrix<Scalar>(4, 2);
      detail::set_entry(t1, cols, 0, 0, one + eps, one);
      detail::set_entry(t1, cols, 0, 1, one - eps, one - eps);
      detail::set_entry(t1, cols, 1, 0, one, alpha);
      detail::set_entry(t1, cols, 1, 1, one, one + eps);
      MatX<Scalar> t2 = t1;
      detail::set_entry(t2, cols, 1, 0, alpha, one);
      out.game = detail::make_two_player<Scalar>(ObjectiveSense::PayoffMax, {"A", "B"}, {"A", "B"},
                                                 {t1, t2});
      out.expected = {{"fi", two + eps},
                      {"ni", alpha + one},
                      {"pub", alpha + one},
                      {"pri", alpha + one},
                      {"exp", alpha + one},
                      {"opt", alpha + one},
                      {"poa", (two + eps) / (alpha + one)},
                      {"pos_pub_fi", (two + eps) / (alpha + one)}};
      break;
    }

    case ScenarioId::Fig4: {
      const bool regular = one >= alpha && alpha > eps && eps > 0;
      const bool trivial = alpha == one && eps == 0;
      if (!regular && !trivial)
        throw std::invalid_argument("fig4 requires 1 >= alpha > eps > 0");
      out.boundary = trivial;
      const int cols = 3;
      const Scalar ae = alpha + eps;
      MatX<Scalar> t1 = detail::profile_matrix<Scalar>(9, 2);
      detail::set_entry(t1, cols, 0, 0, Scalar(0), Scalar(0));
      detail::set_entry(t1, cols, 0, 1, Scalar(0), alpha);
      detail::set_entry(t1, cols, 0, 2, Scalar(0), ae);
      detail::set_entry(t1, cols, 1, 0, alpha, Scalar(0));
      detail::set_entry(t1, cols, 1, 1, alpha, alpha);
      detail::set_entry(t1, cols, 1, 2, alpha, ae);
      detail::set_entry(t1, cols, 2, 0, ae, one);
      detail::set_entry(t1, cols, 2, 1, ae, one);
      detail::set_entry(t1, cols, 2, 2, Scalar(0), Scalar(0));
      MatX<Scalar> t2 = detail::profile_matrix<Scalar>(9, 2);
      detail::set_entry(t2, cols, 0, 0, Scalar(0), Scalar(0));
      detail::set_entry(t2, cols, 0, 1, ae, one);
      detail::set_entry(t2, cols, 0, 2, ae, one);
      detail::set_entry(t2, cols, 1, 0, alpha, ae);
      detail::set_entry(t2, cols, 1, 1, alpha, alpha);
      detail::set_entry(t2, cols, 1, 2, alpha, Scalar(0));
      detail::set_entry(t2, cols, 2, 0, Scalar(0), ae);
      detail::set_entry(t2, cols, 2, 1, Scalar(0), alpha);
      detail::set_entry(t2, cols, 2, 2, Scalar(0), Scalar(0));
      out.game = detail::make_two_player<Scalar>(ObjectiveSense::PayoffMax, {"S1", "C", "S2"},
                                                 {"S1", "C", "S2"}, {t1, t2});
      const Scalar u0 = alpha + ae / (one + eps);
      out.expected = {{"fi", u0},
                      {"ni", two * alpha},
                      {"pub", u0},
                      {"pri", one + ae},
                      {"exp", one + ae},
                      {"opt", one + ae},
                      {"poa", u0 / (one + ae)},
                      {"pos_pri_pub", u0 / (one + ae)},
                      {"pos_pub_fi", one}};
      break;
    }

    case ScenarioId::Fig5: {
      const bool domain = one >= alpha && alpha > eps && eps >= 0 && alpha + eps <= one;
      if (!domain)
        throw std::invalid_argument("fig5 requires 1 >= alpha > eps >= 0 and alpha + eps < 1");
      out.boundary = alpha + eps == one;
      const int cols = 4;
      const Scalar ae = alpha + eps;
      MatX<Scalar> t1 = detail::profile_matrix<Scalar>(16, 2);
      // rows: C1, S1, C2, S2; columns: C1, S1, C2, S2
      detail::set_entry(t1, cols, 0, 0, Scalar(0), Scalar(0));
      detail::set_entry(t1, cols, 0, 1, Scalar(0), Scalar(0));
      detail::set_entry(t1, cols, 0, 2, Scalar(0), eps);
      detail::set_entry(t1, cols, 0, 3, Scalar(0), eps);
      detail::set_entry(t1, cols, 1, 0, Scalar(0), Scalar(0));
      detail::set_entry(t1, cols, 1, 1, Scalar(0), Scalar(0));
      detail::set_entry(t1, cols, 1, 2, Scalar(0), alpha);
      detail::set_entry(t1, cols, 1, 3, Scalar(0), alpha);
      detail::set_entry(t1, cols, 2, 0, ae, Scalar(0));
      detail::set_entry(t1, cols, 2, 1, ae, Scalar(0));
      detail::set_entry(t1, cols, 2, 2, ae, alpha);
      detail::set_entry(t1, cols, 2, 3, ae, alpha);
      detail::set_entry(t1, cols, 3, 0, alpha, Scalar(0));
      detail::set_entry(t1, cols, 3, 1, alpha, Scalar(0));
      detail::set_entry(t1, cols, 3, 2, alpha, one);
      detail::set_entry(t1, cols, 3, 3, Scalar(0), Scalar(0));
      MatX<Scalar> t2 = detail::profile_matrix<Scalar>(16, 2);
      detail::set_entry(t2, cols, 0, 0, ae, alpha);
      detail::set_entry(t2, cols, 0, 1, ae, alpha);
      detail::set_entry(t2, cols, 0, 2, ae, Scalar(0));
      detail::set_entry(t2, cols, 0, 3, ae, Scalar(0));
      detail::set_entry(t2, cols, 1, 0, alpha, one);
      detail::set_entry(t2, cols, 1, 1, Scalar(0), Scalar(0));
      detail::set_entry(t2, cols, 1, 2, alpha, Scalar(0));
      detail::set_entry(t2, cols, 1, 3, alpha, Scalar(0));
      detail::set_entry(t2, cols, 2, 0, Scalar(0), alpha);
      detail::set_entry(t2, cols, 2, 1, Scalar(0), alpha);
      detail::set_entry(t2, cols, 2, 2, Scalar(0), Scalar(0));
      detail::set_entry(t2, cols, 2, 3, Scalar(0), Scalar(0));
      detail::set_entry(t2, cols, 3, 0, Scalar(0), alpha);
      detail::set_entry(t2, cols, 3, 1, Scalar(0), alpha);
      detail::set_entry(t2, cols, 3, 2, Scalar(0), Scalar(0));
      detail::set_entry(t2, cols, 3, 3, Scalar(0), Scalar(0));
      out.game = detail::make_two_player<Scalar>(ObjectiveSense::PayoffMax,
                                                 {"C1", "S1", "C2", "S2"},
                                                 {"C1", "S1", "C2", "S2"}, {t1, t2});
      out.expected = {{"fi", two * alpha + eps},
                      {"pub", two * alpha + eps},
                      {"pri", two * alpha + eps},
                      {"exp", one + alpha},
                      {"opt", one + alpha},
                      {"poa", (two * alpha + eps) / (one + alpha)},
                      {"pos_exp_pri", (two * alpha + eps) / (one + alpha)}};
      break;
    }

    case ScenarioId::AppA: {
      if (n < 1) throw std::invalid_argument("appA requires n >= 1");
      FiniteBayesianGame<Scalar> g;
      g.sense = ObjectiveSense::PayoffMax;
      g.prior = VecX<Scalar>::Constant(n, Scalar(1) / Scalar(n));
      std::vector<std::string> acts;
      for (int i = 0; i < n; ++i) {
        g.states.push_back("theta" + std::to_string(i + 1));
        acts.push_back("A" + std::to_string(i + 1));
      }
      g.actions = {acts};
      for (int t = 0; t < n; ++t) {
        MatX<Scalar> slice = MatX<Scalar>::Zero(n, 1);
        slice(t, 0) = one;
        g.payoff.push_back(std::move(slice));
      }
      validate(g);
      out.game = std::move(g);
      const Scalar inv_n = one / Scalar(n);
      out.expected = {{"fi", one},   {"ni", inv_n}, {"pub", one},
                      {"pri", one},  {"exp", one},  {"opt", one},
                      {"poa", one},  {"pos_pub_ni", inv_n}};
      break;
    }
  }
  return out;
}

namespace detail {

template <class Scalar>
PrivateScheme<Scalar> point_recommendation(const FiniteBayesianGame<Scalar>& g,
                                           const std::vector<PureProfile>& per_state) {
  PrivateScheme<Scalar> ps;
  ps.kernel = MatX<Scalar>::Zero(g.state_count(), g.profile_count());
  for (int t = 0; t < g.state_count(); ++t) ps.kernel(t, g.flat_index(per_state[t])) = 1;
  ps.obedient = check_obedience(g, ps.kernel, ObedienceMode::Exact).passes;
  return ps;
}

}  // namespace detail

/// The explicit scheme the source constructions exhibit for a given
/// (scenario, class) pair; anything not exhibited is an error, never a guess.
template <class Scalar>
ScenarioScheme<Scalar> scheme_for(const ScenarioCase<Scalar>& sc, SchemeClass cls) {
  ScenarioScheme<Scalar> out;
  out.cls = cls;
  const auto unsupported = [&]() {
    throw std::invalid_argument(std::string("no ") + to_string(cls) +
                                " scheme is constructed for scenario " + to_string(sc.id));
  };

  // Canonical public benchmarks exist for every finite-game scenario.
  if (sc.game) {
    if (cls == SchemeClass::FI) {
      out.public_scheme = full_revelation_scheme(*sc.game);
      return out;
    }
    if (cls == SchemeClass::NI) {
      out.public_scheme = no_information_scheme(*sc.game);
      return out;
    }
  }

  switch (sc.id) {
    case ScenarioId::Sec51:
      if (cls == SchemeClass::Pub) {
        out.public_scheme = no_information_scheme(*sc.game);  // revealing nothing is optimal
        return out;
      }
      break;
    case ScenarioId::Fig4:
      if (cls == SchemeClass::Pub) {
        out.public_scheme = full_revelation_scheme(*sc.game);
        return out;
      }
      if (cls == SchemeClass::Pri) {
        // Full information to P1, nothing to P2, who then always takes cash.
        out.private_scheme = detail::point_recommendation(
            *sc.game, {PureProfile{2, 1}, PureProfile{0, 1}});
        return out;
      }
      break;
    case ScenarioId::Fig5:
      if (cls == SchemeClass::Pri) {
        out.private_scheme = detail::point_recommendation(
            *sc.game, {PureProfile{2, 3}, PureProfile{0, 1}});
        return out;
      }
      if (cls == SchemeClass::ExP) {
        ExAnteScheme<Scalar> ea;
        ea.kernel = MatX<Scalar>::Zero(2, sc.game->profile_count());
        ea.kernel(0, sc.game->flat_index({3, 2})) = 1;  // (S2,C2) at theta1
        ea.kernel(1, sc.game->flat_index({1, 0})) = 1;  // (S1,C1) at theta2
        ea.obedient = check_obedience(*sc.game, ea.kernel, ObedienceMode::ExAnte).passes;
        out.ex_ante_scheme = std::move(ea);
        return out;
      }
      break;
    case ScenarioId::AppA:
      if (cls == SchemeClass::Pub) {
        out.public_scheme = full_revelation_scheme(*sc.game);
        return out;
      }
      break;

    case ScenarioId::Fig1:
    case ScenarioId::Fig2:
    case ScenarioId::Fig3: {
      if constexpr (is_exact_v<Scalar>) {
        unsupported();
      } else {
        const auto& inst = *sc.routing;
        const double a = sc.alpha;
        const double d = detail::pigou_demand(a);
        auto public_kernel = [&](bool reveal) {
          PublicScheme<double> ps;
          if (reveal) {
            ps.signals = inst.states;
            ps.kernel = Eigen::MatrixXd::Identity(2, 2);
          } else {
            ps.signals = {"*"};
            ps.kernel = Eigen::MatrixXd::Constant(1, 2, 1.0);
          }
          return ps;
        };
        if (cls == SchemeClass::FI) {
          out.public_scheme = public_kernel(true);
          return out;
        }
        if (cls == SchemeClass::NI) {
          out.public_scheme = public_kernel(false);
          return out;
        }
        if (cls == SchemeClass::Pub &&
            (sc.id == ScenarioId::Fig1 || sc.id == ScenarioId::Fig2)) {
          out.public_scheme = public_kernel(false);  // no information is optimal / all equal
          return out;
        }
        if (cls == SchemeClass::Pri && sc.id == ScenarioId::Fig2) {
          // Full information to a d-sized fraction, nothing to the rest, who
          // then take the constant-cost edge.
          SegmentedScheme scheme;
          for (int t = 0; t < 2; ++t) {
            Eigen::VectorXd point = Eigen::VectorXd::Zero(2);
            point(t) = 1.0;
            SegmentFlow informed;
            informed.commodity = 0;
            informed.share = d;
            informed.belief = point;
            informed.path_flow = Eigen::VectorXd::Zero(3);
            informed.path_flow(t == 0 ? 1 : 0) = d;  // the x^alpha edge at that state
            SegmentFlow uninformed;
            uninformed.commodity = 0;
            uninformed.share = 1.0 - d;
            uninformed.belief = inst.prior;
            uninformed.path_flow = Eigen::VectorXd::Zero(3);
            uninformed.path_flow(2) = 1.0 - d;  // constant-cost edge
            scheme.per_state.push_back({informed, uninformed});
          }
          out.segmented = std::move(scheme);
          return out;
        }
        if (cls == SchemeClass::Pri && sc.id == ScenarioId::Fig3) {
          // Full revelation: a single informed segment riding the x^alpha edge.
          SegmentedScheme scheme;
          for (int t = 0; t < 2; ++t) {
            Eigen::VectorXd point = Eigen::VectorXd::Zero(2);
            point(t) = 1.0;
            SegmentFlow seg;
            seg.commodity = 0;
            seg.share = 1.0;
            seg.belief = point;
            seg.path_flow = Eigen::VectorXd::Zero(4);
            seg.path_flow(t == 0 ? 3 : 0) = 1.0;
            scheme.per_state.push_back({seg});
          }
          out.segmented = std::move(scheme);
          return out;
        }
        if (cls == SchemeClass::ExP && sc.id == ScenarioId::Fig3) {
          // The optimal flow, recommended: d on the x^alpha edge, the rest on
          // the constant-1 edge, per state.
          std::vector<FlowProfile> recs;
          for (int t = 0; t < 2; ++t) {
            SegmentFlow seg;
            seg.commodity = 0;
            seg.share = 1.0;
            seg.belief = inst.prior;
            seg.path_flow = Eigen::VectorXd::Zero(4);
            seg.path_flow(t == 0 ? 3 : 0) = d;
            seg.path_flow(t == 0 ? 2 : 1) = 1.0 - d;
            recs.push_back(FlowProfile{{seg}});
          }
          out.recommended_flows = std::move(recs);
          return out;
        }
      }
      break;
    }
  }
  unsupported();
  return out;  // unreachable
}

}  // namespace sigpoa
