// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridshift/network.hpp"
#include "gridshift/shifting.hpp"

namespace gridshift {

/// Experiment configuration, read from `key = value` lines (`#` starts a comment).
///
///   network            directory with bus/gen/branch/load CSVs (relative to the file)
///   rho                carbon price, $/t
///   epsilon            flexible fraction of each data-center load
///   transfer_cap       default M_ij, MW
///   shift_cost         default d_ij, $/MWh
///   data_center_buses  comma-separated bus ids; when absent the flags in load.csv are kept
///   data_center_demand MW per designated data center
///   designation        replace | attach
///   noise_seed         integer
///   noise_magnitude    $/MWh
///   objective          cost | balance | co2
///   signal             marginal | average
struct Scenario {
  std::filesystem::path network;
  double rho = 30.0;
  double epsilon = 0.05;
  double transfer_cap = 400.0;
  double shift_cost = 0.0;
  std::optional<std::vector<int>> data_center_buses;
  double data_center_demand = 400.0;
  DesignationMode designation = DesignationMode::replace;
  std::uint64_t noise_seed = 0;
  double noise_magnitude = 1e-3;
  Variant objective = Variant::f_balance;
  SignalKind signal = SignalKind::marginal;

  FleetDefaults fleet_defaults() const { return {epsilon, transfer_cap, shift_cost}; }
  ObjectiveVariant variant() const { return {objective, rho}; }
};

/// Relative `network` paths are resolved against `base_dir`.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Stable textual form of every setting; the basis of config_hash.
std::string canonical_text(const Scenario& s);
std::uint64_t config_hash(const Scenario& s);

/// Loads the network, designates data centers, applies cost noise.
Network build_network(const Scenario& s);

}  // namespace gridshift
