// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridshift/harness.hpp"

#include <cmath>
#include <fstream>

#include <fmt/core.h>
#include <json.hpp>

#include "gridshift/error.hpp"

namespace gridshift {

using Eigen::VectorXd;

namespace {

constexpr Variant kVariants[] = {Variant::f_cost, Variant::f_balance, Variant::f_co2};

double pct(double value, double base) { return base != 0.0 ? 100.0 * (value - base) / base : 0.0; }

// Relative slack so that equal optima computed along different pivot paths
// compare as equal.
constexpr double kOrderingSlack = 1e-7;

}  // namespace

const RunRecord* ExperimentReport::find(const std::string& model, Variant variant,
                                        std::optional<SignalKind> signal) const {
  for (const auto& r : records) {
    if (r.model == model && r.variant == variant && (!signal || r.signal == signal)) return &r;
  }
  return nullptr;
}

RunRecord make_record(std::string model, Variant variant, std::optional<SignalKind> signal,
                      const DispatchResult& dispatch, double shifted, const RunRecord* base) {
  RunRecord r;
  r.model = std::move(model);
  r.variant = variant;
  r.signal = signal;
  r.cost = dispatch.cost;
  r.emissions = dispatch.emissions;
  r.curtailment = dispatch.curtailment;
  r.shifted = shifted;
  if (base != nullptr) {
    r.cost_change_pct = pct(r.cost, base->cost);
    r.emissions_change_pct = pct(r.emissions, base->emissions);
  }
  return r;
}

PipelineRun run_pipeline_m1(const Network& net, ObjectiveVariant variant, SignalKind signal,
                            const DispatchResult* base, const EmissionSignals* signals) {
  PipelineRun run;
  run.base = base != nullptr ? *base : solve_dcopf(net);
  run.signals = signals != nullptr ? *signals : compute_signals(net, run.base);
  run.plan = solve_model1(net, run.signals, run.base.lmp, variant, signal);
  const std::vector<double> delta(run.plan.delta_pd.data(), run.plan.delta_pd.data() + run.plan.delta_pd.size());
  run.after = solve_dcopf(with_data_center_shift(net, delta));
  run.actual_delta_pg = run.after.p_g - run.base.p_g;
  const RunRecord base_rec = make_record("base", Variant::f_cost, std::nullopt, run.base, 0.0, nullptr);
  run.record = make_record("model1", variant.kind, signal, run.after, run.plan.shifted(), &base_rec);
  return run;
}

ExperimentReport pipeline_report(const Network& net, double rho, Provenance provenance) {
  ExperimentReport rep;
  rep.provenance = provenance;
  const DispatchResult base = solve_dcopf(net);
  const EmissionSignals signals = compute_signals(net, base);
  rep.records.push_back(make_record("base", Variant::f_cost, std::nullopt, base, 0.0, nullptr));
  for (SignalKind s : {SignalKind::marginal, SignalKind::average}) {
    for (Variant v : kVariants) {
      rep.records.push_back(run_pipeline_m1(net, {v, rho}, s, &base, &signals).record);
    }
  }
  return rep;
}

ExperimentReport compare_models(const Network& net, double rho, Provenance provenance) {
  ExperimentReport rep;
  rep.provenance = provenance;
  const DispatchResult base = solve_dcopf(net);
  const EmissionSignals signals = compute_signals(net, base);
  rep.records.push_back(make_record("base", Variant::f_cost, std::nullopt, base, 0.0, nullptr));
  const RunRecord base_rec = rep.records.front();

  for (Variant v : kVariants) {
    rep.records.push_back(run_pipeline_m1(net, {v, rho}, SignalKind::marginal, &base, &signals).record);
  }
  for (Variant v : kVariants) {
    rep.records.push_back(make_record("model2", v, std::nullopt, solve_model2(net, {v, rho}), 0.0, &base_rec));
  }
  for (Variant v : kVariants) {
    auto [dispatch, plan] = solve_model3(net, {v, rho});
    rep.records.push_back(make_record("model3", v, std::nullopt, dispatch, plan.shifted(), &base_rec));
  }
  rep.checks = check_orderings(rep);
  return rep;
}

std::vector<OrderingCheck> check_orderings(const ExperimentReport& report) {
  auto cell = [&](const char* model, Variant v) -> const RunRecord& {
    const RunRecord* r = report.find(model, v, std::string(model) == "model1"
                                                   ? std::optional<SignalKind>(SignalKind::marginal)
                                                   : std::nullopt);
    if (r == nullptr) throw InputError(fmt::format("report has no {} {} cell", model, to_string(v)));
    return *r;
  };
  std::vector<OrderingCheck> out;
  auto le = [&](std::string name, double lhs, double rhs) {
    const bool pass = lhs <= rhs + kOrderingSlack * std::max(1.0, std::abs(rhs));
    out.push_back({std::move(name), lhs, rhs, pass});
  };

  le("lemma1: model3 <= model1 (cost, f_cost)", cell("model3", Variant::f_cost).cost,
     cell("model1", Variant::f_cost).cost);
  le("lemma1: model1 <= model2 (cost, f_cost)", cell("model1", Variant::f_cost).cost,
     cell("model2", Variant::f_cost).cost);
  le("lemma2: model3 <= model2 (emissions, f_co2)", cell("model3", Variant::f_co2).emissions,
     cell("model2", Variant::f_co2).emissions);
  le("lemma2: model3 <= model1 (emissions, f_co2)", cell("model3", Variant::f_co2).emissions,
     cell("model1", Variant::f_co2).emissions);
  for (const char* m : {"model1", "model2", "model3"}) {
    const auto& c = cell(m, Variant::f_cost);
    const auto& b = cell(m, Variant::f_balance);
    const auto& e = cell(m, Variant::f_co2);
    le(fmt::format("{}: cost f_cost <= f_balance", m), c.cost, b.cost);
    le(fmt::format("{}: cost f_balance <= f_co2", m), b.cost, e.cost);
    le(fmt::format("{}: emissions f_co2 <= f_balance", m), e.emissions, b.emissions);
    le(fmt::format("{}: emissions f_balance <= f_cost", m), b.emissions, c.emissions);
  }
  return out;
}

namespace {

// Fixed-decimal text without a negative zero.
std::string fixed(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  double r = std::round(x * scale) / scale;
  if (r == 0.0) r = 0.0;
  return fmt::format("{:.{}f}", r, decimals);
}

double rounded(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double r = std::round(x * scale) / scale;
  return r == 0.0 ? 0.0 : r;
}

std::string signal_text(const RunRecord& r) { return r.signal ? std::string(to_string(*r.signal)) : "-"; }

std::string hex(std::uint64_t v) { return fmt::format("{:016x}", v); }

}  // namespace

std::string render_report(const ExperimentReport& report, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out =
        "model,variant,signal,cost_usd,emissions_t,curtailment_mw,shifted_mw,cost_change_pct,emissions_change_pct,"
        "config_hash,seed\n";
    for (const auto& r : report.records) {
      out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.model, to_string(r.variant), signal_text(r),
                         fixed(r.cost, 0), fixed(r.emissions, 1), fixed(r.curtailment, 1), fixed(r.shifted, 1),
                         fixed(r.cost_change_pct, 2), fixed(r.emissions_change_pct, 2),
                         hex(report.provenance.config_hash), report.provenance.seed);
    }
    return out;
  }

  nlohmann::ordered_json j;
  j["provenance"] = {{"config_hash", hex(report.provenance.config_hash)}, {"seed", report.provenance.seed}};
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    j["records"].push_back({{"model", r.model},
                            {"variant", to_string(r.variant)},
                            {"signal", signal_text(r)},
                            {"cost_usd", static_cast<long long>(std::llround(r.cost))},
                            {"emissions_t", rounded(r.emissions, 1)},
                            {"curtailment_mw", rounded(r.curtailment, 1)},
                            {"shifted_mw", rounded(r.shifted, 1)},
                            {"cost_change_pct", rounded(r.cost_change_pct, 2)},
                            {"emissions_change_pct", rounded(r.emissions_change_pct, 2)}});
  }
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back({{"name", c.name}, {"lhs", rounded(c.lhs, 3)}, {"rhs", rounded(c.rhs, 3)}, {"pass", c.pass}});
  }
  return j.dump(2) + "\n";
}

void export_report(const ExperimentReport& report, ReportFormat format, const std::filesystem::path& path) {
  const std::string text = render_report(report, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw InputError(fmt::format("failed writing {}", path.string()));
}

}  // namespace gridshift
