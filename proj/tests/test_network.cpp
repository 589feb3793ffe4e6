// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <set>

#include "gridshift/dcopf.hpp"
#include "gridshift/error.hpp"
#include "gridshift/matpower.hpp"
#include "gridshift/network.hpp"
#include "support.hpp"

using namespace gridshift;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gridshift_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// Copies toy3 into a scratch directory so single files can be broken.
fs::path toy3_copy(const std::string& name) {
  const fs::path dir = scratch(name);
  for (const char* f : {"bus.csv", "gen.csv", "branch.csv", "load.csv"}) {
    fs::copy_file(testing::data_dir() / "toy3" / f, dir / f);
  }
  return dir;
}

}  // namespace

TEST_CASE("toy3 fixture loads") {
  const Network net = testing::toy3();
  CHECK(net.buses.size() == 3);
  CHECK(net.generators.size() == 3);
  CHECK(net.lines.size() == 3);
  CHECK(net.reference_bus == 1);
  CHECK(net.data_center_loads().empty());
}

TEST_CASE("RTS-GMLC fixture has the published dimensions") {
  const Network net = load_network(testing::data_dir() / "rts_gmlc");
  CHECK(net.buses.size() == 73);
  CHECK(net.generators.size() == 158);
  CHECK(net.lines.size() == 120);
  CHECK(net.reference_bus == 13);
  std::map<int, int> per_region;
  for (const auto& b : net.buses) ++per_region[b.region];
  CHECK(per_region == std::map<int, int>{{1, 24}, {2, 24}, {3, 25}});
  for (int id = 1; id <= 24; ++id) CHECK(net.buses[static_cast<std::size_t>(id - 1)].region == 1);
}

TEST_CASE("bus ids are renumbered in file order") {
  const fs::path dir = toy3_copy("renumber");
  write(dir / "bus.csv", "id,name,region,is_ref\n101,a,1,1\n205,b,1,0\n310,c,2,0\n");
  write(dir / "gen.csv", "id,bus,fuel,cost,p_min,p_max,emission_rate\n1,101,coal,20,0,200,\n2,310,wind,0,0,60,\n");
  write(dir / "branch.csv", "id,from,to,susceptance,limit\n1,101,205,-10,100\n2,205,310,-10,100\n");
  write(dir / "load.csv", "id,bus,demand\n1,205,120\n");
  const Network net = load_network(dir);
  CHECK(net.generators[1].bus == 3);
  CHECK(net.lines[1].from_bus == 2);
  CHECK(net.loads[0].bus == 2);
  // Empty emission_rate falls back to the fuel default.
  CHECK(net.generators[0].emission_rate == doctest::Approx(default_emission_rate(Fuel::coal)));
}

TEST_CASE("ingestion errors") {
  SUBCASE("generator at unknown bus") {
    const fs::path dir = toy3_copy("dangling");
    write(dir / "gen.csv", "id,bus,fuel,cost,p_min,p_max,emission_rate\n1,9,coal,20,0,200,0.9606\n");
    CHECK_THROWS_AS(load_network(dir), InputError);
  }
  SUBCASE("missing file") {
    const fs::path dir = toy3_copy("missing");
    fs::remove(dir / "branch.csv");
    CHECK_THROWS_AS(load_network(dir), InputError);
  }
  SUBCASE("missing column") {
    const fs::path dir = toy3_copy("schema");
    write(dir / "branch.csv", "id,from,to,limit\n1,1,2,100\n");
    CHECK_THROWS_AS(load_network(dir), InputError);
  }
  SUBCASE("non-numeric field") {
    const fs::path dir = toy3_copy("nan");
    write(dir / "load.csv", "id,bus,demand\n1,2,lots\n");
    CHECK_THROWS_AS(load_network(dir), InputError);
  }
  SUBCASE("disconnected graph") {
    const fs::path dir = toy3_copy("island");
    write(dir / "branch.csv", "id,from,to,susceptance,limit\n1,1,2,-10,100\n");
    CHECK_THROWS_AS(load_network(dir), InputError);
  }
  SUBCASE("two reference buses") {
    const fs::path dir = toy3_copy("tworef");
    write(dir / "bus.csv", "id,name,region,is_ref\n1,a,1,1\n2,b,1,1\n3,c,2,0\n");
    CHECK_THROWS_AS(load_network(dir), InputError);
  }
  SUBCASE("p_min above p_max") {
    const fs::path dir = toy3_copy("pmin");
    write(dir / "gen.csv", "id,bus,fuel,cost,p_min,p_max,emission_rate\n1,1,coal,20,300,200,0.9606\n");
    CHECK_THROWS_AS(load_network(dir), InputError);
  }
  SUBCASE("renewable with an emission rate") {
    const fs::path dir = toy3_copy("dirtywind");
    write(dir / "gen.csv", "id,bus,fuel,cost,p_min,p_max,emission_rate\n1,1,wind,0,0,200,0.1\n");
    CHECK_THROWS_AS(load_network(dir), InputError);
  }
  SUBCASE("self loop and zero limit") {
    const fs::path dir = toy3_copy("loop");
    write(dir / "branch.csv", "id,from,to,susceptance,limit\n1,1,2,-10,100\n2,2,3,-10,0\n");
    CHECK_THROWS_AS(load_network(dir), InputError);
    write(dir / "branch.csv", "id,from,to,susceptance,limit\n1,1,2,-10,100\n2,2,3,-10,100\n3,3,3,-10,100\n");
    CHECK_THROWS_AS(load_network(dir), InputError);
  }
}

TEST_CASE("save and load round-trip") {
  Network net = designate_data_centers(testing::toy5(), std::vector<int>{2, 4}, 55.5, DesignationMode::attach);
  net = apply_cost_noise(net, 7, 1e-3);
  const fs::path dir = scratch("roundtrip");
  save_network(net, dir);
  const Network back = load_network(dir);
  REQUIRE(back.buses.size() == net.buses.size());
  for (std::size_t i = 0; i < net.buses.size(); ++i) {
    CHECK(back.buses[i].id == net.buses[i].id);
    CHECK(back.buses[i].name == net.buses[i].name);
    CHECK(back.buses[i].region == net.buses[i].region);
    CHECK(back.buses[i].is_reference == net.buses[i].is_reference);
  }
  REQUIRE(back.generators.size() == net.generators.size());
  for (std::size_t k = 0; k < net.generators.size(); ++k) {
    const auto& a = back.generators[k];
    const auto& b = net.generators[k];
    CHECK(a.id == b.id);
    CHECK(a.bus == b.bus);
    CHECK(a.fuel == b.fuel);
    CHECK(a.cost == b.cost);  // shortest round-trip formatting is exact
    CHECK(a.p_min == b.p_min);
    CHECK(a.p_max == b.p_max);
    CHECK(a.emission_rate == b.emission_rate);
  }
  REQUIRE(back.lines.size() == net.lines.size());
  for (std::size_t e = 0; e < net.lines.size(); ++e) {
    CHECK(back.lines[e].susceptance == net.lines[e].susceptance);
    CHECK(back.lines[e].flow_limit == net.lines[e].flow_limit);
    CHECK(back.lines[e].from_bus == net.lines[e].from_bus);
    CHECK(back.lines[e].to_bus == net.lines[e].to_bus);
  }
  REQUIRE(back.loads.size() == net.loads.size());
  for (std::size_t l = 0; l < net.loads.size(); ++l) {
    CHECK(back.loads[l].bus == net.loads[l].bus);
    CHECK(back.loads[l].demand == net.loads[l].demand);
    CHECK(back.loads[l].is_data_center == net.loads[l].is_data_center);
  }
}

TEST_CASE("RTS-GMLC data-center designation") {
  const Network raw = load_network(testing::data_dir() / "rts_gmlc");
  const Network net = designate_data_centers(raw, testing::case_study_data_centers(), 400.0);
  CHECK(net.data_center_demand() == doctest::Approx(4400.0));
  CHECK(net.total_demand() == doctest::Approx(11681.0));
  CHECK(net.data_center_demand() / net.total_demand() == doctest::Approx(0.377).epsilon(0.001));
  CHECK(net.fleet.size() == 11);
  CHECK(net.data_center_buses() == testing::case_study_data_centers());
}

TEST_CASE("designation edge cases") {
  const Network t3 = testing::toy3();
  SUBCASE("empty list") {
    const Network net = designate_data_centers(t3, std::vector<int>{}, 100.0);
    CHECK(net.data_center_demand() == 0.0);
    CHECK(net.fleet.size() == 0);
  }
  SUBCASE("single bus") {
    const Network net = designate_data_centers(t3, std::vector<int>{2}, 50.0);
    const auto dc = net.data_center_loads();
    REQUIRE(dc.size() == 1);
    CHECK(net.loads[dc[0]].bus == 2);
    CHECK(net.loads[dc[0]].demand == 50.0);
  }
  SUBCASE("unknown bus") {
    CHECK_THROWS_AS(designate_data_centers(t3, std::vector<int>{4}, 50.0), InputError);
    CHECK_THROWS_AS(designate_data_centers(t3, std::vector<int>{2, 2}, 50.0), InputError);
  }
  SUBCASE("prior flags are cleared") {
    const Network once = designate_data_centers(t3, std::vector<int>{2, 3}, 50.0, DesignationMode::attach);
    const Network twice = designate_data_centers(once, std::vector<int>{1}, 20.0, DesignationMode::attach);
    CHECK(twice.data_center_buses() == std::vector<int>{1});
  }
}

TEST_CASE("attach mode preserves existing load exactly") {
  for (const auto& base : {testing::toy3(), testing::toy5(), load_network(testing::data_dir() / "rts_gmlc")}) {
    const Network net = designate_data_centers(base, std::vector<int>{1, 2}, 123.0, DesignationMode::attach);
    CHECK(net.total_demand() == doctest::Approx(base.total_demand() + 246.0).epsilon(1e-12));
    CHECK(net.data_center_demand() == doctest::Approx(246.0));
    for (std::size_t i = 0; i < base.loads.size(); ++i) CHECK(net.loads[i].demand == base.loads[i].demand);
  }
}

TEST_CASE("cost noise") {
  const Network net = testing::toy5();
  SUBCASE("zero magnitude is the identity") {
    const Network same = apply_cost_noise(net, 3, 0.0);
    for (std::size_t k = 0; k < net.generators.size(); ++k) CHECK(same.generators[k].cost == net.generators[k].cost);
  }
  SUBCASE("same seed, same costs; draws lie in [0, magnitude]") {
    const Network a = apply_cost_noise(net, 11, 0.5);
    const Network b = apply_cost_noise(net, 11, 0.5);
    const Network c = apply_cost_noise(net, 12, 0.5);
    bool differs = false;
    for (std::size_t k = 0; k < net.generators.size(); ++k) {
      CHECK(a.generators[k].cost == b.generators[k].cost);
      const double d = a.generators[k].cost - net.generators[k].cost;
      CHECK(d >= 0.0);
      CHECK(d <= 0.5);
      differs = differs || c.generators[k].cost != a.generators[k].cost;
    }
    CHECK(differs);
  }
  SUBCASE("negative magnitude") { CHECK_THROWS_AS(apply_cost_noise(net, 1, -1.0), InputError); }
}

TEST_CASE("noise separates co-located identical units on RTS-GMLC") {
  const Network raw = load_network(testing::data_dir() / "rts_gmlc");
  const Network net = apply_cost_noise(raw, 0, 1e-3);
  int tied_before = 0;
  for (std::size_t a = 0; a < net.generators.size(); ++a) {
    for (std::size_t b = a + 1; b < net.generators.size(); ++b) {
      const auto& ga = net.generators[a];
      const auto& gb = net.generators[b];
      if (ga.bus != gb.bus || ga.fuel != gb.fuel) continue;
      tied_before += raw.generators[a].cost == raw.generators[b].cost;
      CHECK(ga.cost != gb.cost);
    }
  }
  CHECK(tied_before > 0);
}

TEST_CASE("noise moves the optimal objective by at most magnitude x generation") {
  const Network clean =
      designate_data_centers(load_network(testing::data_dir() / "rts_gmlc"), testing::case_study_data_centers(), 400.0);
  const double a = solve_dcopf(clean).objective;
  for (double mag : {1e-3, 0.05, 0.5}) {
    const double b = solve_dcopf(apply_cost_noise(clean, 5, mag)).objective;
    CHECK(b - a >= -1e-6);
    CHECK(b - a <= mag * clean.total_demand() + 1e-6);
  }
}

TEST_CASE("fuel names and emission defaults") {
  CHECK(parse_fuel("NG") == Fuel::gas);
  CHECK(parse_fuel("Coal") == Fuel::coal);
  CHECK(parse_fuel("pv") == Fuel::solar);
  CHECK_FALSE(parse_fuel("plasma").has_value());
  CHECK(default_emission_rate(Fuel::oil) == 0.7434);
  for (Fuel f : {Fuel::hydro, Fuel::nuclear, Fuel::wind, Fuel::solar, Fuel::storage}) {
    CHECK(default_emission_rate(f) == 0.0);
    CHECK(is_non_fossil(f));
  }
  CHECK(to_string(Fuel::storage) == "storage");
}

TEST_CASE("MATPOWER import matches the bundled CSVs") {
  const auto src = testing::data_dir() / "rts_gmlc";
  const MatpowerCase mpc = parse_matpower(src / "source" / "case_RTS_GMLC.m");
  CHECK(mpc.base_mva == 100.0);
  CHECK(mpc.matrices.at("gen").size() == 158);
  const Network imported = import_matpower(mpc, read_fuel_table(src / "genfuel.csv", 158));
  const Network stored = load_network(src);
  REQUIRE(imported.generators.size() == stored.generators.size());
  for (std::size_t k = 0; k < stored.generators.size(); ++k) {
    CHECK(imported.generators[k].cost == stored.generators[k].cost);
    CHECK(imported.generators[k].fuel == stored.generators[k].fuel);
  }
  CHECK(imported.total_demand() == doctest::Approx(8550.0));
  CHECK_THROWS_AS(import_matpower(mpc), InputError);  // no genfuel, no table
}
