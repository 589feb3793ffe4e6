// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridshift/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <fmt/core.h>

#include "gridshift/error.hpp"

namespace gridshift {

std::string_view to_string(Fuel fuel) {
  switch (fuel) {
    case Fuel::oil: return "oil";
    case Fuel::coal: return "coal";
    case Fuel::gas: return "gas";
    case Fuel::hydro: return "hydro";
    case Fuel::nuclear: return "nuclear";
    case Fuel::wind: return "wind";
    case Fuel::solar: return "solar";
    case Fuel::storage: return "storage";
  }
  return "unknown";
}

std::optional<Fuel> parse_fuel(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "oil" || s == "dfo" || s == "rfo") return Fuel::oil;
  if (s == "coal") return Fuel::coal;
  if (s == "gas" || s == "ng" || s == "natural_gas" || s == "lng") return Fuel::gas;
  if (s == "hydro") return Fuel::hydro;
  if (s == "nuclear") return Fuel::nuclear;
  if (s == "wind") return Fuel::wind;
  if (s == "solar" || s == "pv" || s == "csp") return Fuel::solar;
  if (s == "storage") return Fuel::storage;
  return std::nullopt;
}

// Coal and gas are assigned so that the reference dispatch reproduces the
// published emission totals.
double default_emission_rate(Fuel fuel) {
  switch (fuel) {
    case Fuel::oil: return 0.7434;
    case Fuel::coal: return 0.9606;
    case Fuel::gas: return 0.6042;
    default: return 0.0;
  }
}

bool is_non_fossil(Fuel fuel) {
  return fuel != Fuel::oil && fuel != Fuel::coal && fuel != Fuel::gas;
}

FleetSpec make_fleet(std::size_t count, const FleetDefaults& defaults) {
  FleetSpec fleet;
  fleet.epsilon.assign(count, defaults.epsilon);
  const auto c = static_cast<Eigen::Index>(count);
  fleet.transfer_cap = Eigen::MatrixXd::Constant(c, c, defaults.transfer_cap);
  fleet.shift_cost = Eigen::MatrixXd::Constant(c, c, defaults.shift_cost);
  fleet.transfer_cap.diagonal().setZero();
  fleet.shift_cost.diagonal().setZero();
  return fleet;
}

std::vector<std::size_t> Network::data_center_loads() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < loads.size(); ++i) {
    if (loads[i].is_data_center) out.push_back(i);
  }
  return out;
}

std::vector<int> Network::data_center_buses() const {
  std::vector<int> out;
  for (const auto& l : loads) {
    if (l.is_data_center) out.push_back(l.bus);
  }
  return out;
}

Eigen::VectorXd Network::bus_demand() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(buses.size()));
  for (const auto& l : loads) d(static_cast<Eigen::Index>(bus_index(l.bus))) += l.demand;
  return d;
}

double Network::total_demand() const {
  double s = 0.0;
  for (const auto& l : loads) s += l.demand;
  return s;
}

double Network::data_center_demand() const {
  double s = 0.0;
  for (const auto& l : loads) {
    if (l.is_data_center) s += l.demand;
  }
  return s;
}

Eigen::VectorXd Network::generator_costs() const {
  Eigen::VectorXd c(static_cast<Eigen::Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) c(static_cast<Eigen::Index>(k)) = generators[k].cost;
  return c;
}

Eigen::VectorXd Network::emission_rates() const {
  Eigen::VectorXd g(static_cast<Eigen::Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) {
    g(static_cast<Eigen::Index>(k)) = generators[k].emission_rate;
  }
  return g;
}

namespace {

template <typename T>
void require_unique_ids(const std::vector<T>& items, const char* what) {
  std::set<int> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.id).second) throw InputError(fmt::format("duplicate {} id {}", what, item.id));
  }
}

bool connected(const Network& net) {
  const std::size_t n = net.buses.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& l : net.lines) {
    adj[net.bus_index(l.from_bus)].push_back(net.bus_index(l.to_bus));
    adj[net.bus_index(l.to_bus)].push_back(net.bus_index(l.from_bus));
  }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (auto v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

}  // namespace

void validate(const Network& net) {
  const int n = static_cast<int>(net.buses.size());
  if (n == 0) throw InputError("network has no buses");
  int refs = 0;
  for (int i = 0; i < n; ++i) {
    const auto& b = net.buses[static_cast<std::size_t>(i)];
    if (b.id != i + 1) throw InputError(fmt::format("bus ids must be contiguous from 1, found {} at position {}", b.id, i + 1));
    if (b.region < 1) throw InputError(fmt::format("bus {} has region {} (must be >= 1)", b.id, b.region));
    if (b.is_reference) {
      ++refs;
      if (b.id != net.reference_bus) throw InputError("reference bus flag disagrees with reference_bus");
    }
  }
  if (refs != 1) throw InputError(fmt::format("expected exactly one reference bus, found {}", refs));

  auto bus_ok = [n](int id) { return id >= 1 && id <= n; };

  require_unique_ids(net.generators, "generator");
  for (const auto& g : net.generators) {
    if (!bus_ok(g.bus)) throw InputError(fmt::format("generator {} references unknown bus {}", g.id, g.bus));
    if (!(g.p_min <= g.p_max)) throw InputError(fmt::format("generator {} has p_min > p_max", g.id));
    if (!std::isfinite(g.cost) || !std::isfinite(g.p_min) || !std::isfinite(g.p_max)) {
      throw InputError(fmt::format("generator {} has non-finite data", g.id));
    }
    if (!(g.emission_rate >= 0.0)) throw InputError(fmt::format("generator {} has negative emission rate", g.id));
    if ((g.fuel == Fuel::hydro || g.fuel == Fuel::nuclear || g.fuel == Fuel::wind || g.fuel == Fuel::solar) &&
        g.emission_rate != 0.0) {
      throw InputError(fmt::format("generator {} ({}) must have zero emission rate", g.id, to_string(g.fuel)));
    }
  }

  require_unique_ids(net.lines, "line");
  for (const auto& l : net.lines) {
    if (!bus_ok(l.from_bus) || !bus_ok(l.to_bus)) {
      throw InputError(fmt::format("line {} references unknown bus", l.id));
    }
    if (l.from_bus == l.to_bus) throw InputError(fmt::format("line {} is a self loop", l.id));
    if (!(l.flow_limit > 0.0)) throw InputError(fmt::format("line {} has non-positive flow limit", l.id));
    if (l.susceptance == 0.0 || !std::isfinite(l.susceptance)) {
      throw InputError(fmt::format("line {} has invalid susceptance", l.id));
    }
  }

  require_unique_ids(net.loads, "load");
  for (const auto& l : net.loads) {
    if (!bus_ok(l.bus)) throw InputError(fmt::format("load {} references unknown bus {}", l.id, l.bus));
    if (!(l.demand >= 0.0)) throw InputError(fmt::format("load {} has negative demand", l.id));
  }

  const auto dc = net.data_center_loads().size();
  const auto c = static_cast<Eigen::Index>(dc);
  if (net.fleet.epsilon.size() != dc || net.fleet.transfer_cap.rows() != c || net.fleet.transfer_cap.cols() != c ||
      net.fleet.shift_cost.rows() != c || net.fleet.shift_cost.cols() != c) {
    throw InputError("fleet specification does not match the number of data-center loads");
  }
  for (double e : net.fleet.epsilon) {
    if (!(e >= 0.0 && e <= 1.0)) throw InputError("fleet epsilon must lie in [0, 1]");
  }
  if (dc > 0 && (net.fleet.transfer_cap.minCoeff() < 0.0 || net.fleet.shift_cost.minCoeff() < 0.0)) {
    throw InputError("fleet transfer caps and shift costs must be non-negative");
  }

  if (!connected(net)) throw InputError("network is not connected");
}

Network designate_data_centers(const Network& net, std::span<const int> buses, double demand, DesignationMode mode,
                               const FleetDefaults& fleet) {
  const int n = static_cast<int>(net.buses.size());
  std::set<int> listed;
  for (int b : buses) {
    if (b < 1 || b > n) throw InputError(fmt::format("cannot designate data center at unknown bus {}", b));
    if (!listed.insert(b).second) throw InputError(fmt::format("bus {} listed twice as data center", b));
  }
  if (!(demand >= 0.0)) throw InputError("data-center demand must be non-negative");

  Network out = net;
  out.loads.clear();
  int next_id = 0;
  for (const auto& l : net.loads) next_id = std::max(next_id, l.id);
  for (auto l : net.loads) {
    if (mode == DesignationMode::replace && listed.count(l.bus) != 0) continue;
    l.is_data_center = false;
    out.loads.push_back(l);
  }
  for (int b : buses) out.loads.push_back(Load{++next_id, b, demand, true});
  out.fleet = make_fleet(buses.size(), fleet);
  return out;
}

Network apply_cost_noise(const Network& net, std::uint64_t seed, double magnitude) {
  if (!(magnitude >= 0.0)) throw InputError("noise magnitude must be non-negative");
  Network out = net;
  if (magnitude == 0.0) return out;
  std::mt19937_64 rng(seed);
  for (auto& g : out.generators) {
    // 53 random mantissa bits; identical on every standard library.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    g.cost += magnitude * u;
  }
  return out;
}

Network with_data_center_shift(const Network& net, std::span<const double> delta) {
  const auto dc = net.data_center_loads();
  if (delta.size() != dc.size()) throw InputError("shift vector length differs from fleet size");
  Network out = net;
  for (std::size_t i = 0; i < dc.size(); ++i) out.loads[dc[i]].demand += delta[i];
  return out;
}

Network with_extra_load(const Network& net, int bus, double mw) {
  if (bus < 1 || bus > static_cast<int>(net.buses.size())) {
    throw InputError(fmt::format("unknown bus {}", bus));
  }
  Network out = net;
  int next_id = 0;
  for (const auto& l : net.loads) next_id = std::max(next_id, l.id);
  out.loads.push_back(Load{next_id + 1, bus, mw, false});
  return out;
}

}  // namespace gridshift
