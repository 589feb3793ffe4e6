// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include <Eigen/Dense>

#include "gridshift/dcopf.hpp"
#include "gridshift/lp.hpp"
#include "gridshift/network.hpp"

namespace gridshift {

/// Average emission rate per region; empty when the region generates nothing.
using RegionAverages = std::map<int, std::optional<double>>;

struct EmissionSignals {
  Eigen::VectorXd lmce;         // tCO2/MWh per bus
  RegionAverages avg_by_region;  // tCO2/MWh per region
  Eigen::MatrixXd sensitivity;  // dP_g / dP_d, generators x buses
  std::uint64_t basis_id = 0;
};

/// Generator rows and nodal columns of the inverse basis. A +1 MW load at bus
/// i enters the right-hand side of balance row i with a positive sign.
Eigen::MatrixXd sensitivity_matrix(const Network& net, const Basis& basis);

Eigen::VectorXd compute_lmce(const Network& net, const Basis& basis);

struct FiniteDifference {
  double value = 0.0;          // tCO2/MWh
  bool binding_unchanged = false;
};

/// Re-solves the cost-mode OPF with `delta` MW more load at `bus`.
FiniteDifference finite_difference(const Network& net, const DispatchResult& base, int bus, double delta = 0.1);
double finite_difference_lmce(const Network& net, int bus, double delta = 0.1);

RegionAverages compute_average_emissions(const Network& net, const Eigen::VectorXd& p_g);

/// Basis, LMCE and regional averages at a solved operating point.
EmissionSignals compute_signals(const Network& net, const DispatchResult& dispatch);

}  // namespace gridshift
