// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridshift/scenario.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "csv.hpp"
#include "gridshift/error.hpp"

namespace gridshift {

namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw InputError(fmt::format("{}: not a number: '{}'", key, v));
  return out;
}

template <typename T>
T to_integer(const std::string& key, const std::string& v) {
  T out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw InputError(fmt::format("{}: not an integer: '{}'", key, v));
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  Scenario s;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = csv::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(fmt::format("config line {}: expected key = value", lineno));
    const std::string key = csv::trim(line.substr(0, eq));
    const std::string value = csv::trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw InputError(fmt::format("config line {}: duplicate key '{}'", lineno, key));

    if (key == "network") {
      s.network = value;
      if (s.network.is_relative() && !base_dir.empty()) s.network = base_dir / s.network;
    } else if (key == "rho") {
      s.rho = to_double(key, value);
    } else if (key == "epsilon") {
      s.epsilon = to_double(key, value);
    } else if (key == "transfer_cap") {
      s.transfer_cap = to_double(key, value);
    } else if (key == "shift_cost") {
      s.shift_cost = to_double(key, value);
    } else if (key == "data_center_buses") {
      s.data_center_buses.emplace();
      std::stringstream parts(value);
      std::string tok;
      while (std::getline(parts, tok, ',')) {
        tok = csv::trim(tok);
        if (!tok.empty()) s.data_center_buses->push_back(to_integer<int>(key, tok));
      }
    } else if (key == "data_center_demand") {
      s.data_center_demand = to_double(key, value);
    } else if (key == "designation") {
      if (value == "replace") {
        s.designation = DesignationMode::replace;
      } else if (value == "attach") {
        s.designation = DesignationMode::attach;
      } else {
        throw InputError(fmt::format("designation must be replace or attach, got '{}'", value));
      }
    } else if (key == "noise_seed") {
      s.noise_seed = to_integer<std::uint64_t>(key, value);
    } else if (key == "noise_magnitude") {
      s.noise_magnitude = to_double(key, value);
    } else if (key == "objective") {
      auto v = parse_variant(value);
      if (!v) throw InputError(fmt::format("objective must be cost, balance or co2, got '{}'", value));
      s.objective = *v;
    } else if (key == "signal") {
      auto v = parse_signal(value);
      if (!v) throw InputError(fmt::format("signal must be marginal or average, got '{}'", value));
      s.signal = *v;
    } else {
      throw InputError(fmt::format("config line {}: unknown key '{}'", lineno, key));
    }
  }
  if (s.network.empty()) throw InputError("config is missing 'network'");
  if (s.rho < 0.0) throw InputError("rho must be non-negative");
  if (s.epsilon < 0.0 || s.epsilon > 1.0) throw InputError("epsilon must lie in [0, 1]");
  if (s.transfer_cap < 0.0 || s.shift_cost < 0.0) throw InputError("transfer_cap and shift_cost must be non-negative");
  if (s.noise_magnitude < 0.0) throw InputError("noise_magnitude must be non-negative");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

std::string canonical_text(const Scenario& s) {
  return fmt::format(
      "network={}\nrho={}\nepsilon={}\ntransfer_cap={}\nshift_cost={}\ndata_center_buses={}\n"
      "data_center_demand={}\ndesignation={}\nnoise_seed={}\nnoise_magnitude={}\nobjective={}\nsignal={}\n",
      s.network.filename().string(), s.rho, s.epsilon, s.transfer_cap, s.shift_cost,
      s.data_center_buses ? fmt::format("{}", fmt::join(*s.data_center_buses, ",")) : std::string("file"), s.data_center_demand,
      s.designation == DesignationMode::replace ? "replace" : "attach", s.noise_seed, s.noise_magnitude,
      to_string(s.objective), to_string(s.signal));
}

std::uint64_t config_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(s)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Network build_network(const Scenario& s) {
  Network net = load_network(s.network, s.fleet_defaults());
  if (s.data_center_buses) {
    net = designate_data_centers(net, *s.data_center_buses, s.data_center_demand, s.designation, s.fleet_defaults());
  }
  net = apply_cost_noise(net, s.noise_seed, s.noise_magnitude);
  validate(net);
  return net;
}

}  // namespace gridshift
