// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gridshift {

enum class Fuel { oil, coal, gas, hydro, nuclear, wind, solar, storage };

std::string_view to_string(Fuel fuel);
/// Accepts the canonical names plus a few common aliases ("ng", "natural_gas").
std::optional<Fuel> parse_fuel(std::string_view text);

/// Default tCO2/MWh per fuel; zero for every non-fossil type.
double default_emission_rate(Fuel fuel);

/// Units whose undispatched capacity counts as curtailment.
bool is_non_fossil(Fuel fuel);

struct Bus {
  int id = 0;  // 1..N, contiguous after ingestion
  std::string name;
  int region = 1;
  bool is_reference = false;
};

struct Generator {
  int id = 0;
  int bus = 0;
  Fuel fuel = Fuel::gas;
  double cost = 0.0;           // $/MWh
  double p_min = 0.0;          // MW
  double p_max = 0.0;          // MW
  double emission_rate = 0.0;  // tCO2/MWh
};

/// Flow from `from_bus` to `to_bus` is -susceptance * (theta_from - theta_to),
/// so a conventional line carries a negative susceptance in MW/rad.
struct Line {
  int id = 0;
  int from_bus = 0;
  int to_bus = 0;
  double susceptance = 0.0;
  double flow_limit = 0.0;  // MW, symmetric
};

struct Load {
  int id = 0;
  int bus = 0;
  double demand = 0.0;  // MW
  bool is_data_center = false;
};

/// Flexibility of the data-center fleet. Index i refers to the i-th
/// data-center load in network order.
struct FleetSpec {
  std::vector<double> epsilon;
  Eigen::MatrixXd transfer_cap;  // M_ij, MW
  Eigen::MatrixXd shift_cost;    // d_ij, $/MWh

  std::size_t size() const { return epsilon.size(); }
};

struct FleetDefaults {
  double epsilon = 0.05;
  double transfer_cap = 400.0;
  double shift_cost = 0.0;
};

FleetSpec make_fleet(std::size_t count, const FleetDefaults& defaults);

struct Network {
  std::vector<Bus> buses;
  std::vector<Generator> generators;
  std::vector<Line> lines;
  std::vector<Load> loads;
  FleetSpec fleet;
  int reference_bus = 1;

  std::size_t bus_count() const { return buses.size(); }
  std::size_t generator_count() const { return generators.size(); }
  /// Zero-based position of a bus id. Ids are contiguous so this is id - 1.
  std::size_t bus_index(int bus_id) const { return static_cast<std::size_t>(bus_id - 1); }

  /// Positions in `loads` of the data-center loads, in fleet order.
  std::vector<std::size_t> data_center_loads() const;
  /// Bus id of every data center, in fleet order.
  std::vector<int> data_center_buses() const;
  /// Total demand per bus (index = bus id - 1).
  Eigen::VectorXd bus_demand() const;
  double total_demand() const;
  double data_center_demand() const;
  Eigen::VectorXd generator_costs() const;
  Eigen::VectorXd emission_rates() const;
};

/// Throws InputError naming the first violated invariant.
void validate(const Network& net);

struct NetworkFiles {
  std::filesystem::path bus;
  std::filesystem::path gen;
  std::filesystem::path branch;
  std::filesystem::path load;

  /// bus.csv, gen.csv, branch.csv and load.csv inside `dir`.
  static NetworkFiles in_directory(const std::filesystem::path& dir);
};

/// Bus ids in the files may be arbitrary unique integers; they are renumbered
/// 1..N in file order and every reference is remapped.
Network load_network(const NetworkFiles& files, const FleetDefaults& fleet = {});
Network load_network(const std::filesystem::path& dir, const FleetDefaults& fleet = {});

void save_network(const Network& net, const std::filesystem::path& dir);

enum class DesignationMode {
  replace,  // listed buses keep only the new data-center load
  attach,   // the new load is added next to the existing ones
};

/// Marks one data-center load of `demand` MW on each listed bus. Earlier
/// data-center flags are cleared and the fleet is rebuilt from `fleet`.
Network designate_data_centers(const Network& net, std::span<const int> buses, double demand,
                               DesignationMode mode = DesignationMode::replace,
                               const FleetDefaults& fleet = {});

/// Adds a seed-reproducible draw from [0, magnitude] to every generator cost.
Network apply_cost_noise(const Network& net, std::uint64_t seed, double magnitude);

/// Copy of `net` with data-center demand changed by `delta` (fleet order).
Network with_data_center_shift(const Network& net, std::span<const double> delta);

/// Copy of `net` with an extra non-flexible load of `mw` at `bus`.
Network with_extra_load(const Network& net, int bus, double mw);

}  // namespace gridshift
