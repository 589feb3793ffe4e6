// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gridshift/lp.hpp"
#include "gridshift/network.hpp"

namespace gridshift {

enum class ObjectiveKind { cost, carbon_priced, carbon_only };

struct ObjectiveMode {
  ObjectiveKind kind = ObjectiveKind::cost;
  double rho = 0.0;  // $/tCO2

  static ObjectiveMode cost() { return {}; }
  static ObjectiveMode carbon_priced(double rho) { return {ObjectiveKind::carbon_priced, rho}; }
  /// Generation cost dropped; emissions scaled by rho (or 1 when rho <= 0).
  static ObjectiveMode carbon_only(double rho = 1.0) { return {ObjectiveKind::carbon_only, rho}; }
};

/// Per-generator objective coefficients for a mode.
Eigen::VectorXd objective_coefficients(const Network& net, ObjectiveMode mode);

/// Variable and row positions of the DC-OPF program.
///
/// Variables: theta (N) then P_g (N_g). Equality rows: N nodal balances then
/// the reference angle. Inequality rows: for line l, rows 2l (forward flow)
/// and 2l+1 (reverse flow); for generator k, rows 2L+2k (P <= p_max) and
/// 2L+2k+1 (-P <= -p_min).
struct DcopfLayout {
  Eigen::Index buses = 0;
  Eigen::Index generators = 0;
  Eigen::Index lines = 0;

  explicit DcopfLayout(const Network& net);
  Eigen::Index theta(Eigen::Index bus_index) const { return bus_index; }
  Eigen::Index pg(Eigen::Index gen) const { return buses + gen; }
  Eigen::Index variables() const { return buses + generators; }
  Eigen::Index balance_row(Eigen::Index bus_index) const { return bus_index; }
  Eigen::Index reference_row() const { return buses; }
  Eigen::Index eq_rows() const { return buses + 1; }
  Eigen::Index line_row(Eigen::Index line, bool reverse) const { return 2 * line + (reverse ? 1 : 0); }
  Eigen::Index gen_row(Eigen::Index gen, bool lower) const { return 2 * lines + 2 * gen + (lower ? 1 : 0); }
  Eigen::Index ineq_rows() const { return 2 * lines + 2 * generators; }
};

/// Balance row i reads  sum_{g at i} P_g + sum_{lines at i} beta (theta_i - theta_j) = P_d,i.
LinearProgram build_dcopf(const Network& net, ObjectiveMode mode = ObjectiveMode::cost());

struct DispatchResult {
  Eigen::VectorXd p_g;
  Eigen::VectorXd theta;
  Eigen::VectorXd flow;  // MW per line, from -> to
  Eigen::VectorXd lmp;   // objective units per MWh; $/MWh in cost mode
  double cost = 0.0;     // generation cost cᵀP_g with the network's own costs
  double objective = 0.0;
  double emissions = 0.0;
  double curtailment = 0.0;
  std::vector<Eigen::Index> binding;  // inequality rows of the program
  LinearProgram program;
  LpSolution solution;
};

DispatchResult solve_dcopf(const Network& net, ObjectiveMode mode = ObjectiveMode::cost());

/// Fills a DispatchResult from a solved program whose first variables and rows
/// follow DcopfLayout (extra variables or rows may follow).
DispatchResult make_dispatch(const Network& net, LinearProgram lp, LpSolution sol);

Eigen::VectorXd line_flows(const Network& net, const Eigen::VectorXd& theta);
double emissions_of(const Network& net, const Eigen::VectorXd& p_g);
/// Unused capacity of every non-fossil unit.
double curtailment_of(const Network& net, const Eigen::VectorXd& p_g);

}  // namespace gridshift
