#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sigpoa/equilibria.hpp"
#include "sigpoa/signaling.hpp"

namespace sigpoa {

/// One latency term a*x^d + b; exponents are real (the Pigou family needs
/// non-integer d), with 0^d = 0 for d > 0 and 1 for d = 0.
struct LatencyTerm {
  double coeff = 0;     // a >= 0
  double exponent = 0;  // d >= 0
  double constant = 0;  // b >= 0
};

struct RoutingEdge {
  int from = 0;
  int to = 0;
  std::vector<LatencyTerm> latency;  // one term per state
};

struct RoutingCommodity {
  int source = 0;
  int sink = 0;
  double demand = 0;
};

/// Non-atomic routing instance on a DAG with state-dependent latencies.
/// Paths are enumerated exhaustively at build time (the constructions here
/// have a handful) and all flow objects index into that list.
struct RoutingInstance {
  std::vector<std::string> nodes;
  std::vector<RoutingEdge> edges;
  std::vector<RoutingCommodity> commodities;
  std::vector<std::string> states;
  Eigen::VectorXd prior;
  std::vector<std::vector<std::vector<int>>> paths;  // [commodity][path] -> edge sequence

  int node_count() const { return static_cast<int>(nodes.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int state_count() const { return static_cast<int>(states.size()); }
  double total_demand() const;
  int node_index(const std::string& label) const;
};

/// Validates the instance and fills in the exhaustive path lists.
void finalize_instance(RoutingInstance& inst);

double edge_latency(const RoutingInstance& inst, int edge, int state, double x);
double expected_edge_latency(const RoutingInstance& inst, int edge, const Eigen::VectorXd& belief,
                             double x);

/// A population fraction sharing one belief, with its per-path flow split.
struct SegmentFlow {
  int commodity = 0;
  double share = 0;
  Eigen::VectorXd belief;
  Eigen::VectorXd path_flow;
};

struct FlowProfile {
  std::vector<SegmentFlow> segments;
};

Eigen::VectorXd edge_flows(const RoutingInstance& inst, const FlowProfile& flow);
double total_cost(const RoutingInstance& inst, const Eigen::VectorXd& edge_flow, int state);
double expected_total_cost(const RoutingInstance& inst, const Eigen::VectorXd& edge_flow,
                           const Eigen::VectorXd& belief);
double path_cost(const RoutingInstance& inst, int commodity, int path,
                 const Eigen::VectorXd& edge_flow, const Eigen::VectorXd& belief);

struct WardropResult {
  FlowProfile flow;
  double objective = 0;       // Beckmann potential (equilibrium) or total cost (optimum)
  double cost = 0;            // belief-expected total cost of the returned flow
  double relative_gap = 0;
  int iterations = 0;
  bool converged = false;
  double worst_violation = 0;  // used-path optimality certificate
};

/// Common-belief Wardrop equilibrium by Frank-Wolfe on the Beckmann potential
/// (shortest-path loading + golden-section line search, relative gap 1e-10).
WardropResult wardrop_equilibrium(const RoutingInstance& inst, const Eigen::VectorXd& belief);

/// System-optimal flow for one state by Frank-Wolfe on the total cost, with a
/// marginal-cost optimality certificate.
WardropResult optimal_flow(const RoutingInstance& inst, int state);

struct SegmentCertificate {
  bool holds = true;
  double worst_violation = 0;
  int worst_segment = -1;
  int worst_path = -1;
};

/// Equilibrium check for a heterogeneous-belief configuration: every segment
/// may only use paths within 1e-6 of its own belief-expected minimum given the
/// aggregate flows. (No common potential exists here, so proposals are
/// certified rather than solved for.)
SegmentCertificate segment_equilibrium_certificate(const RoutingInstance& inst,
                                                   const std::vector<SegmentFlow>& segments);

/// One segment configuration per state.
struct SegmentedScheme {
  std::vector<std::vector<SegmentFlow>> per_state;
};

struct SegmentedEvaluation {
  double expected_cost = 0;  // prior-average of realized state-wise cost
  bool certified = true;
  SegmentCertificate worst;
  int worst_state = -1;
};

SegmentedEvaluation evaluate_segmented_flow(const RoutingInstance& inst,
                                            const SegmentedScheme& scheme);

struct ExAnteRoutingReport {
  double in_scheme_cost = 0;  // prior-averaged total cost per unit of demand
  double opt_out_cost = 0;    // cheapest fixed path, prior-expected
  int opt_out_commodity = -1;
  int opt_out_path = -1;
  double margin = 0;  // opt_out - in_scheme
  bool passes = false;
};

/// Ex-ante obedience of a per-state recommended flow: a uniformly random unit
/// compares its expected in-scheme cost with the best fixed path under the
/// prior, holding the scheme's aggregate flows fixed.
ExAnteRoutingReport ex_ante_obedience_check(const RoutingInstance& inst,
                                            const std::vector<FlowProfile>& recommendation);

/// Closed-form worst-case Pigou ratio as a function of the polynomial degree.
double pigou_poa(double alpha);

/// Inverse of pigou_poa by bisection over (0, 1000]; r = 1 maps to 0.
double solve_pigou_alpha(double r);

/// Cost of the two-parameter obedient private scheme family on the four-edge
/// tightness network, in closed form.
double private_family_cost_fig3(double alpha, double x, double y);

// Signaling-class values for routing instances (worst-case selection is moot:
// the common-belief equilibrium is essentially unique).
double wardrop_posterior_cost(const RoutingInstance& inst, const Eigen::VectorXd& belief);
double routing_full_information_value(const RoutingInstance& inst);
double routing_no_information_value(const RoutingInstance& inst);
double evaluate_public_scheme(const RoutingInstance& inst, const PublicScheme<double>& scheme);
PublicValueResult<double> optimal_public_value(const RoutingInstance& inst, int resolution = 512);
RatioValue<double> routing_poa_max(const RoutingInstance& inst);

}  // namespace sigpoa
