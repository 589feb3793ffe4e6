// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridshift/dcopf.hpp"

#include "gridshift/error.hpp"

namespace gridshift {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

DcopfLayout::DcopfLayout(const Network& net)
    : buses(static_cast<Index>(net.buses.size())),
      generators(static_cast<Index>(net.generators.size())),
      lines(static_cast<Index>(net.lines.size())) {}

VectorXd objective_coefficients(const Network& net, ObjectiveMode mode) {
  switch (mode.kind) {
    case ObjectiveKind::cost:
      return net.generator_costs();
    case ObjectiveKind::carbon_priced:
      if (mode.rho < 0.0) throw InputError("carbon price must be non-negative");
      return net.generator_costs() + mode.rho * net.emission_rates();
    case ObjectiveKind::carbon_only:
      return (mode.rho > 0.0 ? mode.rho : 1.0) * net.emission_rates();
  }
  return net.generator_costs();
}

LinearProgram build_dcopf(const Network& net, ObjectiveMode mode) {
  const DcopfLayout L(net);
  LinearProgram lp;
  lp.c = VectorXd::Zero(L.variables());
  lp.c.tail(L.generators) = objective_coefficients(net, mode);

  lp.G = MatrixXd::Zero(L.eq_rows(), L.variables());
  lp.h = VectorXd::Zero(L.eq_rows());
  lp.h.head(L.buses) = net.bus_demand();
  for (Index k = 0; k < L.generators; ++k) {
    const auto& g = net.generators[static_cast<std::size_t>(k)];
    lp.G(L.balance_row(static_cast<Index>(net.bus_index(g.bus))), L.pg(k)) += 1.0;
  }
  for (const auto& l : net.lines) {
    const auto i = static_cast<Index>(net.bus_index(l.from_bus));
    const auto j = static_cast<Index>(net.bus_index(l.to_bus));
    lp.G(i, L.theta(i)) += l.susceptance;
    lp.G(i, L.theta(j)) -= l.susceptance;
    lp.G(j, L.theta(j)) += l.susceptance;
    lp.G(j, L.theta(i)) -= l.susceptance;
  }
  lp.G(L.reference_row(), L.theta(static_cast<Index>(net.bus_index(net.reference_bus)))) = 1.0;

  lp.K = MatrixXd::Zero(L.ineq_rows(), L.variables());
  lp.f = VectorXd::Zero(L.ineq_rows());
  for (Index e = 0; e < L.lines; ++e) {
    const auto& l = net.lines[static_cast<std::size_t>(e)];
    const auto i = static_cast<Index>(net.bus_index(l.from_bus));
    const auto j = static_cast<Index>(net.bus_index(l.to_bus));
    // flow = -beta (theta_i - theta_j)
    lp.K(L.line_row(e, false), L.theta(i)) = -l.susceptance;
    lp.K(L.line_row(e, false), L.theta(j)) = l.susceptance;
    lp.K(L.line_row(e, true), L.theta(i)) = l.susceptance;
    lp.K(L.line_row(e, true), L.theta(j)) = -l.susceptance;
    lp.f(L.line_row(e, false)) = l.flow_limit;
    lp.f(L.line_row(e, true)) = l.flow_limit;
  }
  for (Index k = 0; k < L.generators; ++k) {
    const auto& g = net.generators[static_cast<std::size_t>(k)];
    lp.K(L.gen_row(k, false), L.pg(k)) = 1.0;
    lp.f(L.gen_row(k, false)) = g.p_max;
    lp.K(L.gen_row(k, true), L.pg(k)) = -1.0;
    lp.f(L.gen_row(k, true)) = -g.p_min;
  }
  return lp;
}

VectorXd line_flows(const Network& net, const VectorXd& theta) {
  VectorXd flow(static_cast<Index>(net.lines.size()));
  for (std::size_t e = 0; e < net.lines.size(); ++e) {
    const auto& l = net.lines[e];
    flow(static_cast<Index>(e)) = -l.susceptance * (theta(static_cast<Index>(net.bus_index(l.from_bus))) -
                                                    theta(static_cast<Index>(net.bus_index(l.to_bus))));
  }
  return flow;
}

double emissions_of(const Network& net, const VectorXd& p_g) {
  if (p_g.size() != static_cast<Index>(net.generators.size())) throw InputError("dispatch length mismatch");
  return net.emission_rates().dot(p_g);
}

double curtailment_of(const Network& net, const VectorXd& p_g) {
  if (p_g.size() != static_cast<Index>(net.generators.size())) throw InputError("dispatch length mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < net.generators.size(); ++k) {
    const auto& g = net.generators[k];
    if (is_non_fossil(g.fuel)) total += g.p_max - p_g(static_cast<Index>(k));
  }
  return total;
}

DispatchResult make_dispatch(const Network& net, LinearProgram lp, LpSolution sol) {
  const DcopfLayout L(net);
  DispatchResult r;
  r.theta = sol.x.head(L.buses);
  r.p_g = sol.x.segment(L.buses, L.generators);
  r.flow = line_flows(net, r.theta);
  r.lmp = sol.duals_eq.head(L.buses);
  r.cost = net.generator_costs().dot(r.p_g);
  r.objective = sol.objective;
  r.emissions = emissions_of(net, r.p_g);
  r.curtailment = curtailment_of(net, r.p_g);
  r.binding = sol.binding_ineq;
  r.program = std::move(lp);
  r.solution = std::move(sol);
  return r;
}

DispatchResult solve_dcopf(const Network& net, ObjectiveMode mode) {
  LinearProgram lp = build_dcopf(net, mode);
  LpSolution sol = solve_lp(lp);
  return make_dispatch(net, std::move(lp), std::move(sol));
}

}  // namespace gridshift
