// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridshift/emissions.hpp"

#include <fmt/core.h>

#include "gridshift/error.hpp"

namespace gridshift {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd sensitivity_matrix(const Network& net, const Basis& basis) {
  const DcopfLayout L(net);
  if (basis.size() < L.variables()) throw InputError("basis does not cover the dispatch variables");
  // One factorization, N right-hand sides.
  const MatrixXd rhs = MatrixXd::Identity(basis.size(), L.buses);
  const MatrixXd dx = basis.solve(rhs);
  return dx.block(L.pg(0), 0, L.generators, L.buses);
}

VectorXd compute_lmce(const Network& net, const Basis& basis) {
  return (net.emission_rates().transpose() * sensitivity_matrix(net, basis)).transpose();
}

FiniteDifference finite_difference(const Network& net, const DispatchResult& base, int bus, double delta) {
  if (!(delta > 0.0)) throw InputError("finite-difference step must be positive");
  const DispatchResult moved = solve_dcopf(with_extra_load(net, bus, delta));
  return {(moved.emissions - base.emissions) / delta, moved.binding == base.binding};
}

double finite_difference_lmce(const Network& net, int bus, double delta) {
  return finite_difference(net, solve_dcopf(net), bus, delta).value;
}

RegionAverages compute_average_emissions(const Network& net, const VectorXd& p_g) {
  if (p_g.size() != static_cast<Index>(net.generators.size())) throw InputError("dispatch length mismatch");
  std::map<int, double> co2, mwh;
  for (const auto& b : net.buses) {
    co2[b.region] = 0.0;
    mwh[b.region] = 0.0;
  }
  for (std::size_t k = 0; k < net.generators.size(); ++k) {
    const auto& g = net.generators[k];
    const int region = net.buses[net.bus_index(g.bus)].region;
    co2[region] += g.emission_rate * p_g(static_cast<Index>(k));
    mwh[region] += p_g(static_cast<Index>(k));
  }
  RegionAverages out;
  for (const auto& [region, total] : mwh) {
    out[region] = total > 0.0 ? std::optional<double>(co2[region] / total) : std::nullopt;
  }
  return out;
}

EmissionSignals compute_signals(const Network& net, const DispatchResult& dispatch) {
  const Basis basis = extract_optimal_basis(dispatch.program, dispatch.solution);
  EmissionSignals s;
  s.sensitivity = sensitivity_matrix(net, basis);
  s.lmce = (net.emission_rates().transpose() * s.sensitivity).transpose();
  s.avg_by_region = compute_average_emissions(net, dispatch.p_g);
  s.basis_id = basis.id();
  return s;
}

}  // namespace gridshift
