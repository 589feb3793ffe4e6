// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridshift/network.hpp"

namespace gridshift {

/// Numeric matrices and string cell arrays of a MATPOWER case file.
struct MatpowerCase {
  double base_mva = 100.0;
  std::map<std::string, std::vector<std::vector<double>>> matrices;  // "bus", "gen", ...
  std::map<std::string, std::vector<std::string>> cells;             // "bus_name", "genfuel", ...
};

MatpowerCase parse_matpower(const std::filesystem::path& path);

/// Converts a case into the native model.
///
/// Every generator row is kept regardless of its status flag; out-of-service
/// branches and DC lines are dropped. Susceptance is -baseMVA / (x * tap).
/// Generator cost is the first-segment slope of a piecewise-linear cost or the
/// linear coefficient of a polynomial one. Fuels come from `mpc.genfuel` when
/// present, otherwise from `fuels` (one entry per generator row).
Network import_matpower(const MatpowerCase& mpc, const std::optional<std::vector<Fuel>>& fuels = std::nullopt);

/// Reads a sidecar table with columns `gen,fuel` (gen is the 1-based row).
std::vector<Fuel> read_fuel_table(const std::filesystem::path& path, std::size_t generators);

}  // namespace gridshift
