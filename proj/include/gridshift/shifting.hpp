// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gridshift/dcopf.hpp"
#include "gridshift/emissions.hpp"
#include "gridshift/network.hpp"

namespace gridshift {

enum class Variant { f_cost, f_balance, f_co2 };
enum class SignalKind { marginal, average };

std::string_view to_string(Variant v);
std::string_view to_string(SignalKind s);
std::optional<Variant> parse_variant(std::string_view text);  // cost | balance | co2
std::optional<SignalKind> parse_signal(std::string_view text);

struct ObjectiveVariant {
  Variant kind = Variant::f_balance;
  double rho = 30.0;  // $/tCO2; ignored by f_cost
};

/// Market-clearing objective used by Models 2 and 3 for a variant.
ObjectiveMode market_mode(ObjectiveVariant v);

struct ShiftPlan {
  std::vector<int> buses;                // data-center bus per fleet entry
  Eigen::VectorXd delta_pd;              // MW per data center
  Eigen::MatrixXd transfers;             // s_ij, MW
  Eigen::VectorXd predicted_delta_pg;    // MW per generator (marginal signal only)
  double predicted_emission_change = 0.0;
  double predicted_cost_change = 0.0;
  double shift_cost = 0.0;               // sum d_ij s_ij
  double objective = 0.0;

  /// Total load moved: the sum of the positive entries of delta_pd.
  double shifted() const;
};

ShiftPlan zero_plan(const Network& net);

/// Data-center decision: min (rho*lambda + lmp)ᵀ dP + sum d_ij s_ij subject to
/// the fleet constraints. f_cost drops the carbon term, f_co2 the price term.
ShiftPlan solve_model1(const Network& net, const EmissionSignals& signals, const Eigen::VectorXd& lmp,
                       ObjectiveVariant variant, SignalKind signal);

struct ShiftEffects {
  Eigen::VectorXd delta_pg;
  double delta_co2 = 0.0;
  double delta_cost = 0.0;
};

ShiftEffects predict_shift_effects(const Network& net, const ShiftPlan& plan, const Basis& basis,
                                   const Eigen::VectorXd& g, const Eigen::VectorXd& lmp);

/// Carbon-aware clearing without any load change.
DispatchResult solve_model2(const Network& net, ObjectiveVariant variant);

/// Joint clearing of generation and data-center flexibility.
std::pair<DispatchResult, ShiftPlan> solve_model3(const Network& net, ObjectiveVariant variant);

/// Throws InputError if `plan` breaks a fleet constraint by more than `tol` MW.
void check_plan(const Network& net, const ShiftPlan& plan, double tol = 1e-6);

}  // namespace gridshift
