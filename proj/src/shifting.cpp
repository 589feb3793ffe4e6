// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridshift/shifting.hpp"

#include <cmath>

#include <fmt/core.h>

#include "gridshift/error.hpp"

namespace gridshift {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::f_cost: return "f_cost";
    case Variant::f_balance: return "f_balance";
    case Variant::f_co2: return "f_co2";
  }
  return "unknown";
}

std::string_view to_string(SignalKind s) { return s == SignalKind::marginal ? "marginal" : "average"; }

std::optional<Variant> parse_variant(std::string_view text) {
  if (text == "cost" || text == "f_cost") return Variant::f_cost;
  if (text == "balance" || text == "f_balance") return Variant::f_balance;
  if (text == "co2" || text == "f_co2" || text == "carbon") return Variant::f_co2;
  return std::nullopt;
}

std::optional<SignalKind> parse_signal(std::string_view text) {
  if (text == "marginal") return SignalKind::marginal;
  if (text == "average") return SignalKind::average;
  return std::nullopt;
}

ObjectiveMode market_mode(ObjectiveVariant v) {
  switch (v.kind) {
    case Variant::f_cost: return ObjectiveMode::cost();
    case Variant::f_balance: return ObjectiveMode::carbon_priced(v.rho);
    case Variant::f_co2: return ObjectiveMode::carbon_only(v.rho);
  }
  return ObjectiveMode::cost();
}

double ShiftPlan::shifted() const {
  double s = 0.0;
  for (Index i = 0; i < delta_pd.size(); ++i) s += std::max(delta_pd(i), 0.0);
  return s;
}

ShiftPlan zero_plan(const Network& net) {
  const auto c = static_cast<Index>(net.fleet.size());
  ShiftPlan p;
  p.buses = net.data_center_buses();
  p.delta_pd = VectorXd::Zero(c);
  p.transfers = MatrixXd::Zero(c, c);
  p.predicted_delta_pg = VectorXd::Zero(static_cast<Index>(net.generators.size()));
  return p;
}

namespace {

struct FleetBlock {
  Index dp0 = 0;  // first delta_pd variable
  Index s0 = 0;   // first transfer variable
  Index count = 0;
  Index eq0 = 0;  // first lossless row
  std::vector<std::pair<Index, Index>> pairs;
};

void grow(LinearProgram& lp, Index vars, Index eq, Index ineq) {
  const Index n0 = lp.c.size();
  const Index E0 = lp.G.rows();
  const Index K0 = lp.K.rows();
  lp.c.conservativeResize(n0 + vars);
  lp.c.tail(vars).setZero();
  MatrixXd G = MatrixXd::Zero(E0 + eq, n0 + vars);
  G.topLeftCorner(E0, n0) = lp.G;
  lp.G = std::move(G);
  lp.h.conservativeResize(E0 + eq);
  lp.h.tail(eq).setZero();
  MatrixXd K = MatrixXd::Zero(K0 + ineq, n0 + vars);
  K.topLeftCorner(K0, n0) = lp.K;
  lp.K = std::move(K);
  lp.f.conservativeResize(K0 + ineq);
  lp.f.tail(ineq).setZero();
}

// Appends delta_pd, s_ij, the lossless rows and the fleet limits to `lp`.
FleetBlock append_fleet(LinearProgram& lp, const Network& net, const VectorXd& dp_cost) {
  const auto& fleet = net.fleet;
  const auto dc = net.data_center_loads();
  FleetBlock fb;
  fb.count = static_cast<Index>(dc.size());
  const Index C = fb.count;
  for (Index i = 0; i < C; ++i) {
    for (Index j = 0; j < C; ++j) {
      if (i != j) fb.pairs.emplace_back(i, j);
    }
  }
  const auto S = static_cast<Index>(fb.pairs.size());
  fb.dp0 = lp.c.size();
  fb.s0 = fb.dp0 + C;
  fb.eq0 = lp.G.rows();
  const Index K0 = lp.K.rows();
  grow(lp, C + S, C, 2 * C + 2 * S);

  lp.c.segment(fb.dp0, C) = dp_cost;
  for (Index p = 0; p < S; ++p) {
    const auto [i, j] = fb.pairs[static_cast<std::size_t>(p)];
    lp.c(fb.s0 + p) = fleet.shift_cost(i, j);
  }
  // delta_i = inflow - outflow
  for (Index i = 0; i < C; ++i) lp.G(fb.eq0 + i, fb.dp0 + i) = 1.0;
  for (Index p = 0; p < S; ++p) {
    const auto [i, j] = fb.pairs[static_cast<std::size_t>(p)];
    lp.G(fb.eq0 + i, fb.s0 + p) += 1.0;  // leaves i
    lp.G(fb.eq0 + j, fb.s0 + p) -= 1.0;  // arrives at j
  }
  for (Index i = 0; i < C; ++i) {
    const double cap = fleet.epsilon[static_cast<std::size_t>(i)] * net.loads[dc[static_cast<std::size_t>(i)]].demand;
    lp.K(K0 + 2 * i, fb.dp0 + i) = 1.0;
    lp.f(K0 + 2 * i) = cap;
    lp.K(K0 + 2 * i + 1, fb.dp0 + i) = -1.0;
    lp.f(K0 + 2 * i + 1) = cap;
  }
  for (Index p = 0; p < S; ++p) {
    const auto [i, j] = fb.pairs[static_cast<std::size_t>(p)];
    const Index row = K0 + 2 * C + 2 * p;
    lp.K(row, fb.s0 + p) = 1.0;
    lp.f(row) = fleet.transfer_cap(i, j);
    lp.K(row + 1, fb.s0 + p) = -1.0;
    lp.f(row + 1) = 0.0;
  }
  return fb;
}

void read_fleet(const Network& net, const FleetBlock& fb, const VectorXd& x, ShiftPlan& plan) {
  plan.buses = net.data_center_buses();
  plan.delta_pd = x.segment(fb.dp0, fb.count);
  plan.transfers = MatrixXd::Zero(fb.count, fb.count);
  plan.shift_cost = 0.0;
  for (std::size_t p = 0; p < fb.pairs.size(); ++p) {
    const auto [i, j] = fb.pairs[p];
    const double s = x(fb.s0 + static_cast<Index>(p));
    plan.transfers(i, j) = s;
    plan.shift_cost += net.fleet.shift_cost(i, j) * s;
  }
}

double carbon_weight(const ObjectiveVariant& v) { return v.rho > 0.0 ? v.rho : 1.0; }

}  // namespace

ShiftPlan solve_model1(const Network& net, const EmissionSignals& signals, const VectorXd& lmp,
                       ObjectiveVariant variant, SignalKind signal) {
  const auto dc = net.data_center_loads();
  if (dc.empty()) throw InputError("model 1 needs at least one data center");
  const auto N = static_cast<Index>(net.buses.size());
  if (lmp.size() != N || signals.lmce.size() != N) throw InputError("signal vectors must have one entry per bus");

  const auto C = static_cast<Index>(dc.size());
  VectorXd lambda(C), price(C);
  for (Index i = 0; i < C; ++i) {
    const int bus = net.loads[dc[static_cast<std::size_t>(i)]].bus;
    const auto b = static_cast<Index>(net.bus_index(bus));
    price(i) = lmp(b);
    if (signal == SignalKind::marginal) {
      lambda(i) = signals.lmce(b);
    } else {
      const int region = net.buses[static_cast<std::size_t>(b)].region;
      const auto it = signals.avg_by_region.find(region);
      if (it == signals.avg_by_region.end() || !it->second) {
        throw InputError(fmt::format("no average emission rate for region {} (bus {})", region, bus));
      }
      lambda(i) = *it->second;
    }
  }

  VectorXd coef;
  switch (variant.kind) {
    case Variant::f_cost: coef = price; break;
    case Variant::f_balance: coef = variant.rho * lambda + price; break;
    case Variant::f_co2: coef = carbon_weight(variant) * lambda; break;
  }

  LinearProgram lp;
  lp.c.resize(0);
  lp.G.resize(0, 0);
  lp.h.resize(0);
  lp.K.resize(0, 0);
  lp.f.resize(0);
  const FleetBlock fb = append_fleet(lp, net, coef);
  const LpSolution sol = solve_lp(lp);

  ShiftPlan plan;
  read_fleet(net, fb, sol.x, plan);
  plan.objective = sol.objective;
  plan.predicted_cost_change = price.dot(plan.delta_pd) + plan.shift_cost;
  if (signal == SignalKind::marginal && signals.sensitivity.size() > 0) {
    VectorXd db = VectorXd::Zero(N);
    for (Index i = 0; i < C; ++i) db(static_cast<Index>(net.bus_index(plan.buses[static_cast<std::size_t>(i)]))) += plan.delta_pd(i);
    plan.predicted_delta_pg = signals.sensitivity * db;
    plan.predicted_emission_change = net.emission_rates().dot(plan.predicted_delta_pg);
  } else {
    plan.predicted_delta_pg = VectorXd::Zero(static_cast<Index>(net.generators.size()));
    plan.predicted_emission_change = lambda.dot(plan.delta_pd);
  }
  return plan;
}

ShiftEffects predict_shift_effects(const Network& net, const ShiftPlan& plan, const Basis& basis, const VectorXd& g,
                                   const VectorXd& lmp) {
  const DcopfLayout L(net);
  if (g.size() != L.generators || lmp.size() != L.buses) throw InputError("signal vectors have wrong length");
  if (static_cast<Index>(plan.buses.size()) != plan.delta_pd.size()) throw InputError("plan is inconsistent");
  VectorXd db = VectorXd::Zero(basis.size());
  for (std::size_t i = 0; i < plan.buses.size(); ++i) {
    db(L.balance_row(static_cast<Index>(net.bus_index(plan.buses[i])))) += plan.delta_pd(static_cast<Index>(i));
  }
  ShiftEffects e;
  e.delta_pg = solve_basis_system(basis, db).segment(L.pg(0), L.generators);
  e.delta_co2 = g.dot(e.delta_pg);
  e.delta_cost = lmp.dot(db.head(L.buses)) + plan.shift_cost;
  return e;
}

DispatchResult solve_model2(const Network& net, ObjectiveVariant variant) {
  return solve_dcopf(net, market_mode(variant));
}

std::pair<DispatchResult, ShiftPlan> solve_model3(const Network& net, ObjectiveVariant variant) {
  const auto dc = net.data_center_loads();
  if (dc.empty()) throw InputError("model 3 needs at least one data center");
  LinearProgram lp = build_dcopf(net, market_mode(variant));
  const DcopfLayout L(net);
  const FleetBlock fb = append_fleet(lp, net, VectorXd::Zero(static_cast<Index>(dc.size())));
  // Balance: generation - flows = P_d + delta_pd at data-center buses.
  for (Index i = 0; i < fb.count; ++i) {
    const int bus = net.loads[dc[static_cast<std::size_t>(i)]].bus;
    lp.G(L.balance_row(static_cast<Index>(net.bus_index(bus))), fb.dp0 + i) -= 1.0;
  }
  LpSolution sol = solve_lp(lp);

  ShiftPlan plan;
  read_fleet(net, fb, sol.x, plan);
  plan.objective = sol.objective;
  plan.predicted_delta_pg = VectorXd::Zero(L.generators);
  DispatchResult r = make_dispatch(net, std::move(lp), std::move(sol));
  return {std::move(r), std::move(plan)};
}

void check_plan(const Network& net, const ShiftPlan& plan, double tol) {
  const auto dc = net.data_center_loads();
  const auto C = static_cast<Index>(dc.size());
  if (plan.delta_pd.size() != C || plan.transfers.rows() != C || plan.transfers.cols() != C) {
    throw InputError("plan size differs from the fleet");
  }
  if (std::abs(plan.delta_pd.sum()) > tol) throw InputError("shifts do not sum to zero");
  for (Index i = 0; i < C; ++i) {
    const double cap = net.fleet.epsilon[static_cast<std::size_t>(i)] * net.loads[dc[static_cast<std::size_t>(i)]].demand;
    if (std::abs(plan.delta_pd(i)) > cap + tol) throw InputError(fmt::format("shift at data center {} exceeds its limit", i + 1));
    const double net_in = plan.transfers.col(i).sum() - plan.transfers.row(i).sum();
    if (std::abs(net_in - plan.delta_pd(i)) > tol) {
      throw InputError(fmt::format("transfers at data center {} do not match its shift", i + 1));
    }
    if (std::abs(plan.transfers(i, i)) > tol) throw InputError("self transfer is not allowed");
    for (Index j = 0; j < C; ++j) {
      if (plan.transfers(i, j) < -tol || plan.transfers(i, j) > net.fleet.transfer_cap(i, j) + tol) {
        throw InputError(fmt::format("transfer {}->{} is outside [0, M]", i + 1, j + 1));
      }
    }
  }
}

}  // namespace gridshift
