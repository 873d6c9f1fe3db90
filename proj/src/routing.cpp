#include "sigpoa/routing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace sigpoa {

namespace {

constexpr double kRelativeGap = 1e-10;
constexpr int kMaxIterations = 100000;
constexpr double kLineSearchWidth = 1e-12;
constexpr double kWardropTol = 1e-6;
constexpr double kUsedFlow = 1e-9;

double xpow(double x, double d) {
  if (d == 0.0) return 1.0;
  if (x == 0.0) return 0.0;
  return std::pow(x, d);
}

}  // namespace

double RoutingInstance::total_demand() const {
  double d = 0;
  for (const auto& c : commodities) d += c.demand;
  return d;
}

int RoutingInstance::node_index(const std::string& label) const {
  for (int i = 0; i < node_count(); ++i)
    if (nodes[i] == label) return i;
  throw std::invalid_argument("unknown node label '" + label + "'");
}

void finalize_instance(RoutingInstance& inst) {
  const int n = inst.node_count();
  if (n == 0) throw std::invalid_argument("routing: no nodes");
  if (inst.state_count() == 0) throw std::invalid_argument("routing: no states");
  if (inst.prior.size() != inst.state_count())
    throw std::invalid_argument("routing: prior length does not match states");
  double psum = 0;
  for (int t = 0; t < inst.prior.size(); ++t) {
    if (inst.prior(t) < 0) throw std::invalid_argument("routing: negative prior entry");
    psum += inst.prior(t);
  }
  if (std::abs(psum - 1.0) > 1e-9) throw std::invalid_argument("routing: prior must sum to 1");
  for (size_t e = 0; e < inst.edges.size(); ++e) {
    const auto& edge = inst.edges[e];
    if (edge.from < 0 || edge.from >= n || edge.to < 0 || edge.to >= n)
      throw std::invalid_argument("routing: edge " + std::to_string(e) + " has bad endpoints");
    if (static_cast<int>(edge.latency.size()) != inst.state_count())
      throw std::invalid_argument("routing: edge " + std::to_string(e) +
                                  " needs one latency per state");
    for (const auto& l : edge.latency)
      if (l.coeff < 0 || l.constant < 0 || l.exponent < 0)
        throw std::invalid_argument("routing: edge " + std::to_string(e) +
                                    " latency coefficients must be non-negative");
  }
  for (const auto& c : inst.commodities) {
    if (c.source < 0 || c.source >= n || c.sink < 0 || c.sink >= n)
      throw std::invalid_argument("routing: commodity endpoints out of range");
    if (c.demand < 0) throw std::invalid_argument("routing: negative demand");
  }

  // DAG check (Kahn).
  std::vector<int> indeg(n, 0);
  for (const auto& e : inst.edges) ++indeg[e.to];
  std::queue<int> q;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) q.push(v);
  int seen = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    ++seen;
    for (const auto& e : inst.edges)
      if (e.from == v && --indeg[e.to] == 0) q.push(e.to);
  }
  if (seen != n) throw std::invalid_argument("routing: graph must be a DAG");

  // Exhaustive path enumeration, deterministic in edge order.
  std::vector<std::vector<int>> out_edges(n);
  for (int e = 0; e < inst.edge_count(); ++e) out_edges[inst.edges[e].from].push_back(e);
  inst.paths.assign(inst.commodities.size(), {});
  int total_paths = 0;
  for (size_t k = 0; k < inst.commodities.size(); ++k) {
    const auto& c = inst.commodities[k];
    std::vector<int> cur;
    std::function<void(int)> dfs = [&](int v) {
      if (v == c.sink) {
        inst.paths[k].push_back(cur);
        ++total_paths;
        if (total_paths > 10000) throw std::invalid_argument("routing: more than 10^4 paths");
        return;
      }
      for (int e : out_edges[v]) {
        cur.push_back(e);
        dfs(inst.edges[e].to);
        cur.pop_back();
      }
    };
    dfs(c.source);
    if (inst.paths[k].empty())
      throw std::invalid_argument("routing: commodity " + std::to_string(k) +
                                  " has no source-to-sink path");
  }
}

double edge_latency(const RoutingInstance& inst, int edge, int state, double x) {
  const auto& l = inst.edges[edge].latency[state];
  return l.coeff * xpow(x, l.exponent) + l.constant;
}

double expected_edge_latency(const RoutingInstance& inst, int edge, const Eigen::VectorXd& belief,
                             double x) {
  double v = 0;
  for (int t = 0; t < inst.state_count(); ++t) {
    if (belief(t) == 0) continue;
    v += belief(t) * edge_latency(inst, edge, t, x);
  }
  return v;
}

Eigen::VectorXd edge_flows(const RoutingInstance& inst, const FlowProfile& flow) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(inst.edge_count());
  for (const auto& seg : flow.segments) {
    const auto& paths = inst.paths[seg.commodity];
    for (int p = 0; p < static_cast<int>(paths.size()); ++p) {
      if (seg.path_flow(p) == 0) continue;
      for (int e : paths[p]) x(e) += seg.path_flow(p);
    }
  }
  return x;
}

double total_cost(const RoutingInstance& inst, const Eigen::VectorXd& edge_flow, int state) {
  double c = 0;
  for (int e = 0; e < inst.edge_count(); ++e) {
    if (edge_flow(e) == 0) continue;
    c += edge_flow(e) * edge_latency(inst, e, state, edge_flow(e));
  }
  return c;
}

double expected_total_cost(const RoutingInstance& inst, const Eigen::VectorXd& edge_flow,
                           const Eigen::VectorXd& belief) {
  double c = 0;
  for (int t = 0; t < inst.state_count(); ++t) {
    if (belief(t) == 0) continue;
    c += belief(t) * total_cost(inst, edge_flow, t);
  }
  return c;
}

double path_cost(const RoutingInstance& inst, int commodity, int path,
                 const Eigen::VectorXd& edge_flow, const Eigen::VectorXd& belief) {
  double c = 0;
  for (int e : inst.paths[commodity][path]) c += expected_edge_latency(inst, e, belief, edge_flow(e));
  return c;
}

namespace {

// Belief-expected Beckmann potential: sum over edges of the integral of the
// expected latency from 0 to the edge flow.
double beckmann_potential(const RoutingInstance& inst, const Eigen::VectorXd& belief,
                          const Eigen::VectorXd& edge_flow) {
  double pot = 0;
  for (int e = 0; e < inst.edge_count(); ++e) {
    const double x = edge_flow(e);
    if (x == 0) continue;
    for (int t = 0; t < inst.state_count(); ++t) {
      if (belief(t) == 0) continue;
      const auto& l = inst.edges[e].latency[t];
      pot += belief(t) * (l.coeff * xpow(x, l.exponent + 1) / (l.exponent + 1) + l.constant * x);
    }
  }
  return pot;
}

// Marginal social cost of an edge: d/dx [x c(x)] = a(1+d)x^d + b.
double marginal_edge_cost(const RoutingInstance& inst, int edge, int state, double x) {
  const auto& l = inst.edges[edge].latency[state];
  return l.coeff * (1.0 + l.exponent) * xpow(x, l.exponent) + l.constant;
}

struct FwProblem {
  const RoutingInstance& inst;
  Eigen::VectorXd belief;  // point mass for the system optimum
  bool system_optimum;

  double objective(const Eigen::VectorXd& edge_flow) const {
    return system_optimum ? expected_total_cost(inst, edge_flow, belief)
                          : beckmann_potential(inst, belief, edge_flow);
  }
  double direction_cost(int e, double x) const {
    if (system_optimum) {
      double v = 0;
      for (int t = 0; t < inst.state_count(); ++t)
        if (belief(t) != 0) v += belief(t) * marginal_edge_cost(inst, e, t, x);
      return v;
    }
    return expected_edge_latency(inst, e, belief, x);
  }
};

Eigen::VectorXd flows_to_edges(const RoutingInstance& inst,
                               const std::vector<Eigen::VectorXd>& path_flow) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(inst.edge_count());
  for (size_t k = 0; k < inst.commodities.size(); ++k)
    for (int p = 0; p < static_cast<int>(inst.paths[k].size()); ++p) {
      if (path_flow[k](p) == 0) continue;
      for (int e : inst.paths[k][p]) x(e) += path_flow[k](p);
    }
  return x;
}

WardropResult frank_wolfe(const FwProblem& prob) {
  const auto& inst = prob.inst;
  const int commodity_count = static_cast<int>(inst.commodities.size());
  std::vector<Eigen::VectorXd> x(commodity_count);

  auto all_or_nothing = [&](const Eigen::VectorXd& edge_flow) {
    std::vector<Eigen::VectorXd> y(commodity_count);
    for (int k = 0; k < commodity_count; ++k) {
      const int path_count = static_cast<int>(inst.paths[k].size());
      y[k] = Eigen::VectorXd::Zero(path_count);
      int best = 0;
      double best_cost = std::numeric_limits<double>::infinity();
      for (int p = 0; p < path_count; ++p) {
        double c = 0;
        for (int e : inst.paths[k][p]) c += prob.direction_cost(e, edge_flow(e));
        if (c < best_cost) {
          best_cost = c;
          best = p;
        }
      }
      y[k](best) = inst.commodities[k].demand;
    }
    return y;
  };

  x = all_or_nothing(Eigen::VectorXd::Zero(inst.edge_count()));

  WardropResult res;
  double gap = 0;
  for (res.iterations = 0; res.iterations < kMaxIterations; ++res.iterations) {
    Eigen::VectorXd edge_flow = flows_to_edges(inst, x);
    auto y = all_or_nothing(edge_flow);
    Eigen::VectorXd target_flow = flows_to_edges(inst, y);
    gap = 0;
    for (int e = 0; e < inst.edge_count(); ++e)
      gap += prob.direction_cost(e, edge_flow(e)) * (edge_flow(e) - target_flow(e));
    gap = std::max(gap, 0.0);
    res.objective = prob.objective(edge_flow);
    res.relative_gap = gap / std::max(std::abs(res.objective), 1e-12);
    if (res.relative_gap <= kRelativeGap) {
      res.converged = true;
      break;
    }
    // Exact 1-D minimization along the all-or-nothing direction.
    auto eval = [&](double t) {
      Eigen::VectorXd mix = (1.0 - t) * edge_flow + t * target_flow;
      return prob.objective(mix);
    };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    double f1 = eval(m1), f2 = eval(m2);
    while (hi - lo > kLineSearchWidth) {
      if (f1 <= f2) {
        hi = m2;
        m2 = m1;
        f2 = f1;
        m1 = hi - phi * (hi - lo);
        f1 = eval(m1);
      } else {
        lo = m1;
        m1 = m2;
        f1 = f2;
        m2 = lo + phi * (hi - lo);
        f2 = eval(m2);
      }
    }
    double step = (lo + hi) / 2;
    if (eval(1.0) <= eval(step)) step = 1.0;  // favour the vertex on boundary ties
    if (step <= 0) break;
    for (int k = 0; k < commodity_count; ++k) x[k] = (1.0 - step) * x[k] + step * y[k];
  }

  res.flow.segments.clear();
  for (int k = 0; k < commodity_count; ++k) {
    SegmentFlow seg;
    seg.commodity = k;
    seg.share = inst.commodities[k].demand;
    seg.belief = prob.belief;
    seg.path_flow = x[k];
    res.flow.segments.push_back(std::move(seg));
  }
  Eigen::VectorXd edge_flow = flows_to_edges(inst, x);
  res.cost = expected_total_cost(inst, edge_flow, prob.belief);

  // Certificate: every used path within tolerance of its commodity's best.
  res.worst_violation = 0;
  for (int k = 0; k < commodity_count; ++k) {
    double best = std::numeric_limits<double>::infinity();
    const int path_count = static_cast<int>(inst.paths[k].size());
    std::vector<double> costs(path_count);
    for (int p = 0; p < path_count; ++p) {
      double c = 0;
      for (int e : inst.paths[k][p]) c += prob.direction_cost(e, edge_flow(e));
      costs[p] = c;
      best = std::min(best, c);
    }
    for (int p = 0; p < path_count; ++p)
      if (x[k](p) > kUsedFlow)
        res.worst_violation = std::max(res.worst_violation, costs[p] - best);
  }
  return res;
}

}  // namespace

WardropResult wardrop_equilibrium(const RoutingInstance& inst, const Eigen::VectorXd& belief) {
  if (belief.size() != inst.state_count())
    throw std::invalid_argument("wardrop: belief length does not match states");
  FwProblem prob{inst, belief, /*system_optimum=*/false};
  auto res = frank_wolfe(prob);
  if (!res.converged)
    throw std::runtime_error("wardrop equilibrium did not converge; final relative gap " +
                             std::to_string(res.relative_gap));
  if (res.worst_violation > kWardropTol)
    throw std::runtime_error("wardrop condition violated by " + std::to_string(res.worst_violation));
  return res;
}

WardropResult optimal_flow(const RoutingInstance& inst, int state) {
  if (state < 0 || state >= inst.state_count())
    throw std::invalid_argument("optimal_flow: state out of range");
  Eigen::VectorXd point = Eigen::VectorXd::Zero(inst.state_count());
  point(state) = 1.0;
  FwProblem prob{inst, point, /*system_optimum=*/true};
  auto res = frank_wolfe(prob);
  if (!res.converged)
    throw std::runtime_error("optimal flow did not converge; final relative gap " +
                             std::to_string(res.relative_gap));
  if (res.worst_violation > kWardropTol)
    throw std::runtime_error("marginal-cost optimality violated by " +
                             std::to_string(res.worst_violation));
  return res;
}

SegmentCertificate segment_equilibrium_certificate(const RoutingInstance& inst,
                                                   const std::vector<SegmentFlow>& segments) {
  FlowProfile all{segments};
  Eigen::VectorXd edge_flow = edge_flows(inst, all);
  SegmentCertificate cert;
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    const auto& seg = segments[s];
    const int path_count = static_cast<int>(inst.paths[seg.commodity].size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> costs(path_count);
    for (int p = 0; p < path_count; ++p) {
      costs[p] = path_cost(inst, seg.commodity, p, edge_flow, seg.belief);
      best = std::min(best, costs[p]);
    }
    for (int p = 0; p < path_count; ++p) {
      if (seg.path_flow(p) <= kUsedFlow) continue;
      const double excess = costs[p] - best;
      if (excess > cert.worst_violation) {
        cert.worst_violation = excess;
        cert.worst_segment = s;
        cert.worst_path = p;
      }
    }
  }
  cert.holds = cert.worst_violation <= kWardropTol;
  return cert;
}

SegmentedEvaluation evaluate_segmented_flow(const RoutingInstance& inst,
                                            const SegmentedScheme& scheme) {
  if (static_cast<int>(scheme.per_state.size()) != inst.state_count())
    throw std::invalid_argument("segmented scheme: one segment list per state required");
  SegmentedEvaluation out;
  for (int t = 0; t < inst.state_count(); ++t) {
    const auto& segments = scheme.per_state[t];
    // Shares must partition demand and every segment's flows must add to its share.
    std::vector<double> per_commodity(inst.commodities.size(), 0.0);
    for (const auto& seg : segments) {
      if (seg.share < 0) throw std::invalid_argument("segmented scheme: negative share");
      per_commodity[seg.commodity] += seg.share;
      double sum = 0;
      for (int p = 0; p < seg.path_flow.size(); ++p) {
        if (seg.path_flow(p) < -1e-12)
          throw std::invalid_argument("segmented scheme: negative path flow");
        sum += seg.path_flow(p);
      }
      if (std::abs(sum - seg.share) > 1e-9)
        throw std::invalid_argument("segmented scheme: segment flow does not match its share");
    }
    for (size_t k = 0; k < inst.commodities.size(); ++k)
      if (std::abs(per_commodity[k] - inst.commodities[k].demand) > 1e-9)
        throw std::invalid_argument("segmented scheme: segments do not partition demand");

    FlowProfile profile{segments};
    Eigen::VectorXd flows = edge_flows(inst, profile);
    out.expected_cost += inst.prior(t) * total_cost(inst, flows, t);
    auto cert = segment_equilibrium_certificate(inst, segments);
    if (!cert.holds && (out.certified || cert.worst_violation > out.worst.worst_violation)) {
      out.worst = cert;
      out.worst_state = t;
    }
    out.certified = out.certified && cert.holds;
  }
  return out;
}

ExAnteRoutingReport ex_ante_obedience_check(const RoutingInstance& inst,
                                            const std::vector<FlowProfile>& recommendation) {
  if (static_cast<int>(recommendation.size()) != inst.state_count())
    throw std::invalid_argument("ex-ante check: one flow profile per state required");
  const double demand = inst.total_demand();
  if (demand <= 0) throw std::invalid_argument("ex-ante check: no demand");

  std::vector<Eigen::VectorXd> flows;
  for (int t = 0; t < inst.state_count(); ++t) {
    // Feasibility of the recommended flows.
    std::vector<double> per_commodity(inst.commodities.size(), 0.0);
    for (const auto& seg : recommendation[t].segments) {
      for (int p = 0; p < seg.path_flow.size(); ++p)
        if (seg.path_flow(p) < -1e-12)
          throw std::invalid_argument("ex-ante check: negative recommended flow");
      per_commodity[seg.commodity] += seg.path_flow.sum();
    }
    for (size_t k = 0; k < inst.commodities.size(); ++k)
      if (std::abs(per_commodity[k] - inst.commodities[k].demand) > 1e-9)
        throw std::invalid_argument("ex-ante check: recommended flows do not meet demand");
    flows.push_back(edge_flows(inst, recommendation[t]));
  }

  ExAnteRoutingReport rep;
  for (int t = 0; t < inst.state_count(); ++t)
    rep.in_scheme_cost += inst.prior(t) * total_cost(inst, flows[t], t);
  rep.in_scheme_cost /= demand;

  rep.opt_out_cost = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < inst.commodities.size(); ++k)
    for (int p = 0; p < static_cast<int>(inst.paths[k].size()); ++p) {
      double c = 0;
      for (int t = 0; t < inst.state_count(); ++t) {
        if (inst.prior(t) == 0) continue;
        double pc = 0;
        for (int e : inst.paths[k][p]) pc += edge_latency(inst, e, t, flows[t](e));
        c += inst.prior(t) * pc;
      }
      if (c < rep.opt_out_cost) {
        rep.opt_out_cost = c;
        rep.opt_out_commodity = static_cast<int>(k);
        rep.opt_out_path = p;
      }
    }
  rep.margin = rep.opt_out_cost - rep.in_scheme_cost;
  rep.passes = rep.in_scheme_cost <= rep.opt_out_cost + 1e-9;
  return rep;
}

double pigou_poa(double alpha) {
  if (alpha < 0) throw std::invalid_argument("pigou_poa: alpha must be non-negative");
  if (alpha == 0) return 1.0;
  const double inv = 1.0 / (alpha + 1.0);
  const double denom = std::pow(inv, (alpha + 1.0) / alpha) + 1.0 - std::pow(inv, 1.0 / alpha);
  return 1.0 / denom;
}

double solve_pigou_alpha(double r) {
  if (r < 1.0) throw std::invalid_argument("solve_pigou_alpha: ratio must be at least 1");
  if (r == 1.0) return 0.0;
  double lo = 0.0, hi = 1000.0;
  if (pigou_poa(hi) < r)
    throw std::invalid_argument("solve_pigou_alpha: ratio exceeds the value at alpha = 1000");
  for (int iter = 0; iter < 500; ++iter) {
    double mid = (lo + hi) / 2;
    double v = pigou_poa(mid);
    if (std::abs(v - r) <= 1e-9) return mid;
    if (v < r)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

double private_family_cost_fig3(double alpha, double x, double y) {
  if (x < 0 || x > 1 || y < 0 || y > 1)
    throw std::invalid_argument("private_family_cost_fig3: x and y must lie in [0,1]");
  return (std::pow(x, alpha + 1) + (alpha + 1) * (1 - x) + std::pow(y, alpha + 1) +
          (alpha + 1) * (1 - y)) /
         2.0;
}

double wardrop_posterior_cost(const RoutingInstance& inst, const Eigen::VectorXd& belief) {
  return wardrop_equilibrium(inst, belief).cost;
}

double routing_full_information_value(const RoutingInstance& inst) {
  double v = 0;
  for (int t = 0; t < inst.state_count(); ++t) {
    if (inst.prior(t) == 0) continue;
    Eigen::VectorXd point = Eigen::VectorXd::Zero(inst.state_count());
    point(t) = 1.0;
    v += inst.prior(t) * wardrop_posterior_cost(inst, point);
  }
  return v;
}

double routing_no_information_value(const RoutingInstance& inst) {
  return wardrop_posterior_cost(inst, inst.prior);
}

double evaluate_public_scheme(const RoutingInstance& inst, const PublicScheme<double>& scheme) {
  if (scheme.kernel.cols() != inst.state_count())
    throw std::invalid_argument("public scheme: kernel column count must equal state count");
  double total = 0;
  for (int s = 0; s < scheme.kernel.rows(); ++s) {
    double pr = 0;
    for (int t = 0; t < inst.state_count(); ++t) pr += inst.prior(t) * scheme.kernel(s, t);
    if (pr <= 1e-12) continue;
    Eigen::VectorXd b(inst.state_count());
    for (int t = 0; t < inst.state_count(); ++t) b(t) = inst.prior(t) * scheme.kernel(s, t) / pr;
    total += pr * wardrop_posterior_cost(inst, b);
  }
  return total;
}

PublicValueResult<double> optimal_public_value(const RoutingInstance& inst, int resolution) {
  if (inst.state_count() > 3)
    throw std::invalid_argument("grid public optimization handles at most 3 states");
  auto env = concavify_on_grid(
      inst.prior, ObjectiveSense::CostMin, resolution,
      [&](const Eigen::VectorXd& b) { return wardrop_posterior_cost(inst, b); });
  PublicValueResult<double> out;
  out.value = env.value;
  out.grid = true;
  out.scheme.kernel = Eigen::MatrixXd::Zero(static_cast<int>(env.mixture.size()), inst.state_count());
  for (size_t s = 0; s < env.mixture.size(); ++s) {
    const auto& [w, b] = env.mixture[s];
    std::string label = "p=(";
    for (int t = 0; t < inst.state_count(); ++t) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", b(t));
      label += buf;
      label += t + 1 < inst.state_count() ? "," : ")";
    }
    out.scheme.signals.push_back(label);
    for (int t = 0; t < inst.state_count(); ++t) {
      if (env.snapped_prior(t) <= 1e-15) continue;
      out.scheme.kernel(static_cast<int>(s), t) = w * b(t) / env.snapped_prior(t);
    }
  }
  for (int t = 0; t < inst.state_count(); ++t)
    if (env.snapped_prior(t) <= 1e-15) out.scheme.kernel(0, t) = 1.0;
  return out;
}

RatioValue<double> routing_poa_max(const RoutingInstance& inst) {
  RatioValue<double> best;
  bool first = true;
  for (int t = 0; t < inst.state_count(); ++t) {
    Eigen::VectorXd point = Eigen::VectorXd::Zero(inst.state_count());
    point(t) = 1.0;
    const double eq = wardrop_posterior_cost(inst, point);
    const double opt = optimal_flow(inst, t).cost;
    auto r = make_ratio(eq, opt);
    if (first || (r.infinite && !best.infinite) ||
        (!r.infinite && !best.infinite && r.value > best.value)) {
      best = r;
      first = false;
    }
  }
  return best;
}

}  // namespace sigpoa
