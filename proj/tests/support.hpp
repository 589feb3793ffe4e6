// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

// Fixtures and independent oracles shared by the test binaries.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridshift/lp.hpp"
#include "gridshift/network.hpp"
#include "gridshift/scenario.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return GRIDSHIFT_DATA_DIR; }

inline const std::vector<int>& case_study_data_centers() {
  static const std::vector<int> buses{14, 16, 17, 18, 19, 20, 23, 65, 66, 69, 70};
  return buses;
}

/// RTS-GMLC with the case-study designation and seed-0 noise.
inline gridshift::Network case_study_network() {
  return gridshift::build_network(gridshift::load_scenario(data_dir() / "scenarios" / "case_study.cfg"));
}

inline gridshift::Network toy5() { return gridshift::load_network(data_dir() / "toy5"); }
inline gridshift::Network toy3() { return gridshift::load_network(data_dir() / "toy3"); }

inline gridshift::Generator unit(int id, int bus, gridshift::Fuel fuel, double cost, double p_max, double rate,
                                 double p_min = 0.0) {
  return {id, bus, fuel, cost, p_min, p_max, rate};
}

/// One bus with the given generators and a single load.
inline gridshift::Network single_bus(std::vector<gridshift::Generator> gens, double load) {
  gridshift::Network net;
  net.buses.push_back({1, "only", 1, true});
  net.reference_bus = 1;
  net.generators = std::move(gens);
  net.loads.push_back({1, 1, load, false});
  net.fleet = gridshift::make_fleet(0, {});
  return net;
}

/// Two buses joined by one line; cheap unit at bus 1, dear unit at bus 2, load at bus 2.
inline gridshift::Network two_bus(double load, double limit, double cheap_rate = 0.9606, double dear_rate = 0.6042) {
  gridshift::Network net;
  net.buses.push_back({1, "west", 1, true});
  net.buses.push_back({2, "east", 1, false});
  net.reference_bus = 1;
  net.generators.push_back(unit(1, 1, gridshift::Fuel::coal, 10.0, 200.0, cheap_rate));
  net.generators.push_back(unit(2, 2, gridshift::Fuel::gas, 30.0, 200.0, dear_rate));
  net.lines.push_back({1, 1, 2, -10.0, limit});
  net.loads.push_back({1, 2, load, false});
  net.fleet = gridshift::make_fleet(0, {});
  return net;
}

/// Random LP that is feasible (built around an interior point) and bounded
/// (box rows on every variable).
inline gridshift::LinearProgram random_lp(std::mt19937_64& rng, int n, int eq, int extra_rows) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> slack(0.1, 2.0);
  gridshift::LinearProgram lp;
  Eigen::VectorXd x0(n);
  for (int j = 0; j < n; ++j) x0(j) = 3.0 * u(rng);
  lp.c.resize(n);
  for (int j = 0; j < n; ++j) lp.c(j) = u(rng);
  lp.G.resize(eq, n);
  for (int i = 0; i < eq; ++i) {
    for (int j = 0; j < n; ++j) lp.G(i, j) = u(rng);
  }
  lp.h = lp.G * x0;
  const int m = 2 * n + extra_rows;
  lp.K = Eigen::MatrixXd::Zero(m, n);
  lp.f.resize(m);
  for (int j = 0; j < n; ++j) {
    lp.K(2 * j, j) = 1.0;
    lp.f(2 * j) = 10.0;
    lp.K(2 * j + 1, j) = -1.0;
    lp.f(2 * j + 1) = 10.0;
  }
  for (int r = 0; r < extra_rows; ++r) {
    for (int j = 0; j < n; ++j) lp.K(2 * n + r, j) = u(rng);
    lp.f(2 * n + r) = lp.K.row(2 * n + r).dot(x0) + slack(rng);
  }
  return lp;
}

/// Brute-force optimum: every choice of n - eq inequality rows that, with the
/// equality rows, pins a unique feasible point. Only for tiny programs.
inline std::optional<double> vertex_enumeration(const gridshift::LinearProgram& lp) {
  const auto n = lp.variables();
  const auto E = lp.eq_rows();
  const auto m = lp.ineq_rows();
  const auto k = n - E;
  std::optional<double> best;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = static_cast<int>(i);
  if (k > m) return best;
  for (;;) {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    if (E > 0) {
      A.topRows(E) = lp.G;
      b.head(E) = lp.h;
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      A.row(E + i) = lp.K.row(pick[static_cast<std::size_t>(i)]);
      b(E + i) = lp.f(pick[static_cast<std::size_t>(i)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.isInvertible()) {
      const Eigen::VectorXd x = lu.solve(b);
      const bool feasible = (lp.K.rows() == 0 || ((lp.K * x - lp.f).array() <= 1e-9).all());
      if (feasible) {
        const double obj = lp.c.dot(x);
        if (!best || obj < *best) best = obj;
      }
    }
    // next combination
    Eigen::Index i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace testing
