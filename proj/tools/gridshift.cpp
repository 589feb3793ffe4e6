// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "gridshift/dcopf.hpp"
#include "gridshift/emissions.hpp"
#include "gridshift/error.hpp"
#include "gridshift/harness.hpp"
#include "gridshift/matpower.hpp"
#include "gridshift/scenario.hpp"
#include "gridshift/shifting.hpp"

using namespace gridshift;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kSolver = 1, kConfig = 2, kOrdering = 3 };

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

ReportFormat report_format(const Globals& g) { return g.format == "json" ? ReportFormat::json : ReportFormat::csv; }

Scenario scenario(const Globals& g) {
  if (g.config.empty()) throw InputError("--config is required");
  Scenario s = load_scenario(g.config);
  if (g.seed) s.noise_seed = *g.seed;
  return s;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot write {}", g.out));
  f << text;
}

std::string num(double x) { return fmt::format("{:.6f}", x == 0.0 ? 0.0 : x); }

std::string dispatch_text(const Network& net, const DispatchResult& r, const Globals& g) {
  if (g.format == "json") {
    json j;
    j["cost_usd"] = r.cost;
    j["emissions_t"] = r.emissions;
    j["curtailment_mw"] = r.curtailment;
    j["generators"] = json::array();
    for (std::size_t k = 0; k < net.generators.size(); ++k) {
      const auto& gen = net.generators[k];
      j["generators"].push_back({{"id", gen.id}, {"bus", gen.bus}, {"fuel", to_string(gen.fuel)},
                                 {"p_g", r.p_g(static_cast<Eigen::Index>(k))}});
    }
    j["buses"] = json::array();
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
      j["buses"].push_back({{"id", net.buses[i].id},
                            {"theta", r.theta(static_cast<Eigen::Index>(i))},
                            {"lmp", r.lmp(static_cast<Eigen::Index>(i))}});
    }
    return j.dump(2) + "\n";
  }
  std::string out = fmt::format("# cost_usd={:.2f} emissions_t={:.3f} curtailment_mw={:.3f}\n", r.cost, r.emissions,
                                r.curtailment);
  out += "generator,bus,fuel,p_g\n";
  for (std::size_t k = 0; k < net.generators.size(); ++k) {
    const auto& gen = net.generators[k];
    out += fmt::format("{},{},{},{}\n", gen.id, gen.bus, to_string(gen.fuel), num(r.p_g(static_cast<Eigen::Index>(k))));
  }
  return out;
}

int run_opf(const Globals& g, const std::string& mode_text) {
  const Scenario s = scenario(g);
  const Network net = build_network(s);
  const auto v = parse_variant(mode_text);
  if (!v) throw InputError(fmt::format("--objective must be cost, balance or co2, got '{}'", mode_text));
  emit(g, dispatch_text(net, solve_dcopf(net, market_mode({*v, s.rho})), g));
  return kOk;
}

int run_lmce(const Globals& g) {
  const Network net = build_network(scenario(g));
  const DispatchResult base = solve_dcopf(net);
  const EmissionSignals sig = compute_signals(net, base);
  if (g.format == "json") {
    json j;
    j["basis_id"] = fmt::format("{:016x}", sig.basis_id);
    j["buses"] = json::array();
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      j["buses"].push_back({{"id", net.buses[i].id}, {"region", net.buses[i].region}, {"lmp", base.lmp(ii)},
                            {"lmce", sig.lmce(ii)}});
    }
    j["regions"] = json::object();
    for (const auto& [region, avg] : sig.avg_by_region) {
      j["regions"][std::to_string(region)] = avg ? json(*avg) : json(nullptr);
    }
    emit(g, j.dump(2) + "\n");
    return kOk;
  }
  std::string out = "bus,region,lmp,lmce,region_avg\n";
  for (std::size_t i = 0; i < net.buses.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto& avg = sig.avg_by_region.at(net.buses[i].region);
    out += fmt::format("{},{},{},{},{}\n", net.buses[i].id, net.buses[i].region, num(base.lmp(ii)), num(sig.lmce(ii)),
                       avg ? num(*avg) : std::string("nan"));
  }
  emit(g, out);
  return kOk;
}

std::string plan_text(const ShiftPlan& plan, const DispatchResult& before, const DispatchResult& after,
                      const Globals& g) {
  if (g.format == "json") {
    json j;
    j["before"] = {{"cost_usd", before.cost}, {"emissions_t", before.emissions}, {"curtailment_mw", before.curtailment}};
    j["after"] = {{"cost_usd", after.cost}, {"emissions_t", after.emissions}, {"curtailment_mw", after.curtailment}};
    j["shifted_mw"] = plan.shifted();
    j["predicted_emission_change_t"] = plan.predicted_emission_change;
    j["predicted_cost_change_usd"] = plan.predicted_cost_change;
    j["data_centers"] = json::array();
    for (std::size_t i = 0; i < plan.buses.size(); ++i) {
      j["data_centers"].push_back({{"bus", plan.buses[i]}, {"delta_pd", plan.delta_pd(static_cast<Eigen::Index>(i))}});
    }
    return j.dump(2) + "\n";
  }
  std::string out = fmt::format(
      "# before cost_usd={:.2f} emissions_t={:.3f}; after cost_usd={:.2f} emissions_t={:.3f}; shifted_mw={:.3f}\n",
      before.cost, before.emissions, after.cost, after.emissions, plan.shifted());
  out += "bus,delta_pd\n";
  for (std::size_t i = 0; i < plan.buses.size(); ++i) {
    out += fmt::format("{},{}\n", plan.buses[i], num(plan.delta_pd(static_cast<Eigen::Index>(i))));
  }
  return out;
}

int run_shift(const Globals& g, int model, const std::string& objective, const std::string& signal,
              std::optional<double> rho) {
  Scenario s = scenario(g);
  if (rho) s.rho = *rho;
  if (!objective.empty()) {
    const auto v = parse_variant(objective);
    if (!v) throw InputError(fmt::format("--objective must be cost, balance or co2, got '{}'", objective));
    s.objective = *v;
  }
  if (!signal.empty()) {
    const auto v = parse_signal(signal);
    if (!v) throw InputError(fmt::format("--signal must be marginal or average, got '{}'", signal));
    s.signal = *v;
  }
  const Network net = build_network(s);
  const DispatchResult base = solve_dcopf(net);
  switch (model) {
    case 1: {
      const PipelineRun run = run_pipeline_m1(net, s.variant(), s.signal, &base);
      emit(g, plan_text(run.plan, base, run.after, g));
      break;
    }
    case 2:
      emit(g, plan_text(zero_plan(net), base, solve_model2(net, s.variant()), g));
      break;
    case 3: {
      auto [dispatch, plan] = solve_model3(net, s.variant());
      emit(g, plan_text(plan, base, dispatch, g));
      break;
    }
    default:
      throw InputError("--model must be 1, 2 or 3");
  }
  return kOk;
}

Provenance provenance(const Scenario& s) { return {config_hash(s), s.noise_seed}; }

int run_pipeline(const Globals& g) {
  const Scenario s = scenario(g);
  emit(g, render_report(pipeline_report(build_network(s), s.rho, provenance(s)), report_format(g)));
  return kOk;
}

int run_compare(const Globals& g) {
  const Scenario s = scenario(g);
  emit(g, render_report(compare_models(build_network(s), s.rho, provenance(s)), report_format(g)));
  return kOk;
}

int run_check(const Globals& g) {
  const Scenario s = scenario(g);
  const ExperimentReport rep = compare_models(build_network(s), s.rho, provenance(s));
  bool ok = true;
  std::string out;
  for (const auto& c : rep.checks) {
    out += fmt::format("{} {} (lhs {:.3f}, rhs {:.3f}, margin {:.3f})\n", c.pass ? "PASS" : "FAIL", c.name, c.lhs,
                       c.rhs, c.margin());
    ok = ok && c.pass;
  }
  emit(g, out);
  return ok ? kOk : kOrdering;
}

int run_import(const std::string& case_path, const std::string& fuels, const std::string& dest) {
  const MatpowerCase mpc = parse_matpower(case_path);
  std::optional<std::vector<Fuel>> table;
  if (!fuels.empty()) table = read_fuel_table(fuels, mpc.matrices.at("gen").size());
  const Network net = import_matpower(mpc, table);
  save_network(net, dest);
  std::cerr << fmt::format("wrote {} buses, {} generators, {} lines, {} loads to {}\n", net.buses.size(),
                           net.generators.size(), net.lines.size(), net.loads.size(), dest);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carbon-aware DC optimal power flow and data-center load shifting"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Scenario file (key = value)");
  app.add_option("--seed", g.seed, "Override the cost-noise seed");
  app.add_option("--out", g.out, "Write output here instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::string opf_objective = "cost";
  auto* opf = app.add_subcommand("opf", "Clear the DC optimal power flow");
  opf->add_option("--objective", opf_objective, "cost | balance | co2");

  auto* lmce = app.add_subcommand("lmce", "Locational marginal and regional average emissions");

  int model = 1;
  std::string objective, signal;
  std::optional<double> rho;
  auto* shift = app.add_subcommand("shift", "Solve one load-shifting model");
  shift->add_option("--model", model, "1, 2 or 3")->check(CLI::IsMember({1, 2, 3}));
  shift->add_option("--objective", objective, "cost | balance | co2");
  shift->add_option("--signal", signal, "marginal | average");
  shift->add_option("--rho", rho, "Carbon price, $/t");

  auto* pipeline = app.add_subcommand("pipeline", "Model 1 for all variants and both signals");
  auto* compare = app.add_subcommand("compare", "Three models by three objectives");
  auto* check = app.add_subcommand("check", "Run compare and evaluate the ordering lemmas");

  std::string case_path, fuels, dest;
  auto* import = app.add_subcommand("import-matpower", "Convert a MATPOWER case to the CSV schema");
  import->add_option("--case", case_path, "MATPOWER .m file")->required();
  import->add_option("--fuels", fuels, "CSV with columns gen,fuel");
  import->add_option("--dest", dest, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*opf) return run_opf(g, opf_objective);
    if (*lmce) return run_lmce(g);
    if (*shift) return run_shift(g, model, objective, signal, rho);
    if (*pipeline) return run_pipeline(g);
    if (*compare) return run_compare(g);
    if (*check) return run_check(g);
    if (*import) return run_import(case_path, fuels, dest);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
