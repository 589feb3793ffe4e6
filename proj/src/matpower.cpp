// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridshift/matpower.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/core.h>

#include "csv.hpp"
#include "gridshift/error.hpp"

namespace gridshift {

namespace {

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\'') quoted = !quoted;
    if (line[i] == '%' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& tok, const std::string& where) {
  if (tok == "Inf" || tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "-Inf" || tok == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw InputError(fmt::format("{}: cannot parse number '{}'", where, tok));
  }
  return v;
}

}  // namespace

MatpowerCase parse_matpower(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();

  MatpowerCase mpc;
  std::string line;
  std::istringstream lines(buf.str());
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const std::string code = csv::trim(strip_comment(line));
    if (code.rfind("mpc.", 0) != 0) continue;
    const auto eq = code.find('=');
    if (eq == std::string::npos) continue;
    const std::string name = csv::trim(code.substr(4, eq - 4));
    const std::string rhs = csv::trim(code.substr(eq + 1));
    const std::string where = fmt::format("{}:{}", path.string(), lineno);

    if (name == "baseMVA") {
      std::string v = rhs;
      if (!v.empty() && v.back() == ';') v.pop_back();
      mpc.base_mva = parse_number(csv::trim(v), where);
    } else if (!rhs.empty() && (rhs[0] == '[' || rhs[0] == '{')) {
      const bool cell = rhs[0] == '{';
      const char close = cell ? '}' : ']';
      std::string body = rhs.substr(1);
      // Collect until the closing bracket.
      while (body.find(close) == std::string::npos && std::getline(lines, line)) {
        ++lineno;
        body += "\n" + strip_comment(line);
      }
      body = body.substr(0, body.find(close));
      std::vector<std::vector<double>> rows;
      std::vector<std::string> strings;
      std::string row_text;
      std::istringstream rs(body);
      while (std::getline(rs, row_text)) {
        std::stringstream parts(row_text);
        std::string piece;
        while (std::getline(parts, piece, ';')) {
          piece = csv::trim(piece);
          if (piece.empty()) continue;
          if (cell) {
            const auto a = piece.find('\'');
            const auto b = piece.rfind('\'');
            if (a == std::string::npos || b == a) throw InputError(where + ": malformed cell entry");
            strings.push_back(piece.substr(a + 1, b - a - 1));
          } else {
            std::vector<double> row;
            std::istringstream toks(piece);
            std::string tok;
            while (toks >> tok) {
              if (tok.back() == ',') tok.pop_back();
              if (!tok.empty()) row.push_back(parse_number(tok, where));
            }
            if (!row.empty()) rows.push_back(std::move(row));
          }
        }
      }
      if (cell) {
        mpc.cells[name] = std::move(strings);
      } else {
        mpc.matrices[name] = std::move(rows);
      }
    }
  }
  for (const char* required : {"bus", "gen", "branch", "gencost"}) {
    if (mpc.matrices.count(required) == 0) {
      throw InputError(fmt::format("{}: missing mpc.{}", path.string(), required));
    }
  }
  return mpc;
}

namespace {

double linear_cost(const std::vector<double>& row, std::size_t k) {
  if (row.size() < 4) throw InputError(fmt::format("gencost row {} is too short", k + 1));
  const int model = static_cast<int>(row[0]);
  const auto npts = static_cast<std::size_t>(row[3]);
  if (model == 1) {
    if (npts < 2 || row.size() < 4 + 2 * npts) throw InputError(fmt::format("gencost row {} is malformed", k + 1));
    const double x1 = row[4], y1 = row[5], x2 = row[6], y2 = row[7];
    return x2 == x1 ? 0.0 : (y2 - y1) / (x2 - x1);
  }
  if (model == 2) {
    if (row.size() < 4 + npts) throw InputError(fmt::format("gencost row {} is malformed", k + 1));
    return npts >= 2 ? row[4 + npts - 2] : 0.0;
  }
  throw InputError(fmt::format("gencost row {} has unknown model {}", k + 1, model));
}

}  // namespace

Network import_matpower(const MatpowerCase& mpc, const std::optional<std::vector<Fuel>>& fuels) {
  const auto& bus = mpc.matrices.at("bus");
  const auto& gen = mpc.matrices.at("gen");
  const auto& branch = mpc.matrices.at("branch");
  const auto& gencost = mpc.matrices.at("gencost");

  std::vector<Fuel> fuel_of;
  if (auto it = mpc.cells.find("genfuel"); it != mpc.cells.end()) {
    for (const auto& s : it->second) {
      auto f = parse_fuel(s);
      if (!f) throw InputError(fmt::format("unknown genfuel entry '{}'", s));
      fuel_of.push_back(*f);
    }
  } else if (fuels) {
    fuel_of = *fuels;
  } else {
    throw InputError("case has no mpc.genfuel and no fuel table was given");
  }
  if (fuel_of.size() != gen.size()) {
    throw InputError(fmt::format("fuel table has {} entries for {} generators", fuel_of.size(), gen.size()));
  }
  if (gencost.size() < gen.size()) throw InputError("fewer gencost rows than generators");

  Network net;
  std::map<int, int> remap;
  const auto names = mpc.cells.find("bus_name");
  int load_id = 0;
  for (std::size_t i = 0; i < bus.size(); ++i) {
    const auto& row = bus[i];
    if (row.size() < 7) throw InputError(fmt::format("bus row {} is too short", i + 1));
    Bus b;
    b.id = static_cast<int>(i) + 1;
    const int raw = static_cast<int>(row[0]);
    b.name = (names != mpc.cells.end() && i < names->second.size()) ? names->second[i] : std::to_string(raw);
    b.region = static_cast<int>(row[6]);
    b.is_reference = static_cast<int>(row[1]) == 3;
    if (b.is_reference) net.reference_bus = b.id;
    if (!remap.emplace(raw, b.id).second) throw InputError(fmt::format("duplicate bus number {}", raw));
    if (row[2] > 0.0) net.loads.push_back(Load{++load_id, b.id, row[2], false});
    net.buses.push_back(std::move(b));
  }
  auto lookup = [&](double raw, const char* what, std::size_t k) {
    auto it = remap.find(static_cast<int>(raw));
    if (it == remap.end()) throw InputError(fmt::format("{} row {} references unknown bus {}", what, k + 1, raw));
    return it->second;
  };

  for (std::size_t k = 0; k < gen.size(); ++k) {
    const auto& row = gen[k];
    if (row.size() < 10) throw InputError(fmt::format("gen row {} is too short", k + 1));
    Generator g;
    g.id = static_cast<int>(k) + 1;
    g.bus = lookup(row[0], "gen", k);
    g.fuel = fuel_of[k];
    g.cost = linear_cost(gencost[k], k);
    g.p_max = row[8];
    g.p_min = row[9];
    g.emission_rate = default_emission_rate(g.fuel);
    net.generators.push_back(g);
  }

  int line_id = 0;
  for (std::size_t k = 0; k < branch.size(); ++k) {
    const auto& row = branch[k];
    if (row.size() < 11) throw InputError(fmt::format("branch row {} is too short", k + 1));
    if (row[10] == 0.0) continue;
    const double tap = row[8] == 0.0 ? 1.0 : row[8];
    Line l;
    l.id = ++line_id;
    l.from_bus = lookup(row[0], "branch", k);
    l.to_bus = lookup(row[1], "branch", k);
    l.susceptance = -mpc.base_mva / (row[3] * tap);
    l.flow_limit = row[5];
    net.lines.push_back(l);
  }

  validate(net);
  return net;
}

std::vector<Fuel> read_fuel_table(const std::filesystem::path& path, std::size_t generators) {
  csv::Table t = csv::read(path, {"gen", "fuel"});
  std::vector<std::optional<Fuel>> slots(generators);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const int k = t.get_int(r, "gen");
    if (k < 1 || static_cast<std::size_t>(k) > generators) {
      throw InputError(fmt::format("{}: generator {} out of range", t.where(r), k));
    }
    auto f = parse_fuel(t.get(r, "fuel"));
    if (!f) throw InputError(fmt::format("{}: unknown fuel '{}'", t.where(r), t.get(r, "fuel")));
    slots[static_cast<std::size_t>(k - 1)] = *f;
  }
  std::vector<Fuel> out;
  for (std::size_t k = 0; k < generators; ++k) {
    if (!slots[k]) throw InputError(fmt::format("{}: no fuel for generator {}", path.string(), k + 1));
    out.push_back(*slots[k]);
  }
  return out;
}

}  // namespace gridshift
