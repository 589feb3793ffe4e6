// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <fmt/os.h>

#include "csv.hpp"
#include "gridshift/error.hpp"
#include "gridshift/network.hpp"

namespace gridshift {

namespace fs = std::filesystem;

NetworkFiles NetworkFiles::in_directory(const fs::path& dir) {
  return {dir / "bus.csv", dir / "gen.csv", dir / "branch.csv", dir / "load.csv"};
}

namespace {

int bus_ref(const std::unordered_map<int, int>& remap, int raw, const std::string& where) {
  auto it = remap.find(raw);
  if (it == remap.end()) throw InputError(fmt::format("{}: dangling bus reference {}", where, raw));
  return it->second;
}

}  // namespace

Network load_network(const NetworkFiles& files, const FleetDefaults& fleet) {
  Network net;
  std::unordered_map<int, int> remap;

  {
    csv::Table t = csv::read(files.bus, {"id", "name", "region", "is_ref"});
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const int raw = t.get_int(r, "id");
      Bus b;
      b.id = static_cast<int>(net.buses.size()) + 1;
      b.name = t.get(r, "name");
      b.region = t.get_int(r, "region");
      b.is_reference = t.get_bool(r, "is_ref");
      if (!remap.emplace(raw, b.id).second) throw InputError(t.where(r) + fmt::format(": duplicate bus id {}", raw));
      if (b.is_reference) net.reference_bus = b.id;
      net.buses.push_back(std::move(b));
    }
  }
  {
    csv::Table t = csv::read(files.gen, {"id", "bus", "fuel", "cost", "p_min", "p_max"});
    const bool has_rate = t.has_column("emission_rate");
    for (std::size_t r = 0; r < t.rows(); ++r) {
      Generator g;
      g.id = t.get_int(r, "id");
      g.bus = bus_ref(remap, t.get_int(r, "bus"), t.where(r));
      const auto fuel = parse_fuel(t.get(r, "fuel"));
      if (!fuel) throw InputError(t.where(r) + ": unknown fuel '" + t.get(r, "fuel") + "'");
      g.fuel = *fuel;
      g.cost = t.get_double(r, "cost");
      g.p_min = t.get_double(r, "p_min");
      g.p_max = t.get_double(r, "p_max");
      g.emission_rate = (has_rate && !t.get(r, "emission_rate").empty()) ? t.get_double(r, "emission_rate")
                                                                         : default_emission_rate(g.fuel);
      net.generators.push_back(g);
    }
  }
  {
    csv::Table t = csv::read(files.branch, {"id", "from", "to", "susceptance", "limit"});
    for (std::size_t r = 0; r < t.rows(); ++r) {
      Line l;
      l.id = t.get_int(r, "id");
      l.from_bus = bus_ref(remap, t.get_int(r, "from"), t.where(r));
      l.to_bus = bus_ref(remap, t.get_int(r, "to"), t.where(r));
      l.susceptance = t.get_double(r, "susceptance");
      l.flow_limit = t.get_double(r, "limit");
      net.lines.push_back(l);
    }
  }
  {
    csv::Table t = csv::read(files.load, {"id", "bus", "demand"});
    const bool has_flag = t.has_column("is_data_center");
    for (std::size_t r = 0; r < t.rows(); ++r) {
      Load l;
      l.id = t.get_int(r, "id");
      l.bus = bus_ref(remap, t.get_int(r, "bus"), t.where(r));
      l.demand = t.get_double(r, "demand");
      l.is_data_center = has_flag && t.get_bool(r, "is_data_center");
      net.loads.push_back(l);
    }
  }

  net.fleet = make_fleet(net.data_center_loads().size(), fleet);
  validate(net);
  return net;
}

Network load_network(const fs::path& dir, const FleetDefaults& fleet) {
  return load_network(NetworkFiles::in_directory(dir), fleet);
}

void save_network(const Network& net, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));

  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write {}", (dir / name).string()));
    return out;
  };

  {
    auto out = open("bus.csv");
    out << "id,name,region,is_ref\n";
    for (const auto& b : net.buses) {
      out << fmt::format("{},{},{},{}\n", b.id, csv::quote(b.name), b.region, b.is_reference ? 1 : 0);
    }
  }
  {
    auto out = open("gen.csv");
    out << "id,bus,fuel,cost,p_min,p_max,emission_rate\n";
    for (const auto& g : net.generators) {
      out << fmt::format("{},{},{},{},{},{},{}\n", g.id, g.bus, to_string(g.fuel), g.cost, g.p_min, g.p_max,
                         g.emission_rate);
    }
  }
  {
    auto out = open("branch.csv");
    out << "id,from,to,susceptance,limit\n";
    for (const auto& l : net.lines) {
      out << fmt::format("{},{},{},{},{}\n", l.id, l.from_bus, l.to_bus, l.susceptance, l.flow_limit);
    }
  }
  {
    auto out = open("load.csv");
    out << "id,bus,demand,is_data_center\n";
    for (const auto& l : net.loads) {
      out << fmt::format("{},{},{},{}\n", l.id, l.bus, l.demand, l.is_data_center ? 1 : 0);
    }
  }
}

}  // namespace gridshift
