// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridshift/dcopf.hpp"
#include "gridshift/emissions.hpp"
#include "gridshift/shifting.hpp"

namespace gridshift {

struct RunRecord {
  std::string model;  // base, model1, model2, model3
  Variant variant = Variant::f_cost;
  std::optional<SignalKind> signal;  // model 1 only
  double cost = 0.0;                 // $
  double emissions = 0.0;            // t
  double curtailment = 0.0;          // MW
  double shifted = 0.0;              // MW
  double cost_change_pct = 0.0;      // against the base record
  double emissions_change_pct = 0.0;
};

struct Provenance {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

struct OrderingCheck {
  std::string name;  // e.g. "lemma1: model3 <= model1 (cost, f_cost)"
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;

  double margin() const { return rhs - lhs; }
};

struct ExperimentReport {
  Provenance provenance;
  std::vector<RunRecord> records;  // first record is the base run when present
  std::vector<OrderingCheck> checks;

  const RunRecord* find(const std::string& model, Variant variant,
                        std::optional<SignalKind> signal = std::nullopt) const;
};

RunRecord make_record(std::string model, Variant variant, std::optional<SignalKind> signal,
                      const DispatchResult& dispatch, double shifted, const RunRecord* base);

struct PipelineRun {
  DispatchResult base;
  EmissionSignals signals;
  ShiftPlan plan;
  DispatchResult after;
  Eigen::VectorXd actual_delta_pg;
  RunRecord record;
};

/// Clear the market, derive signals, let the fleet respond, clear again.
/// A precomputed base dispatch and its signals may be passed in to be reused.
PipelineRun run_pipeline_m1(const Network& net, ObjectiveVariant variant, SignalKind signal,
                            const DispatchResult* base = nullptr, const EmissionSignals* signals = nullptr);

/// Base run plus Model 1 for every variant and both signals.
ExperimentReport pipeline_report(const Network& net, double rho, Provenance provenance = {});

/// Base run plus the 3 x 3 model/variant matrix, with ordering checks.
ExperimentReport compare_models(const Network& net, double rho, Provenance provenance = {});

/// Lemma orderings and within-model monotonicity. Throws InputError if a cell
/// is missing.
std::vector<OrderingCheck> check_orderings(const ExperimentReport& report);

enum class ReportFormat { csv, json };

std::string render_report(const ExperimentReport& report, ReportFormat format);
void export_report(const ExperimentReport& report, ReportFormat format, const std::filesystem::path& path);

}  // namespace gridshift
