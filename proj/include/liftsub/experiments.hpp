#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "liftsub/builder.hpp"

namespace liftsub {

struct SweepConfig {
  std::vector<std::size_t> n_values;
  std::vector<std::size_t> ell_values;  // absolute ell values
  std::vector<double> ratio_values;     // ell = round(ratio * n)
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  BuilderKind builder = BuilderKind::Auto;
  BuildConfig build;                    // seed is overwritten per trial
  std::size_t workers = 0;              // 0: default_worker_count()
  double time_budget_s = 0.0;           // 0: unlimited
  std::string csv_path;                 // empty: rows are kept in memory only
  std::string certificate_dir;          // empty: certificates are not written
};

struct SweepRow {
  std::size_t n = 0;
  std::size_t ell = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string builder;
  bool success = false;
  std::size_t achieved_order = 0;
  double target_order = 0.0;
  double runtime_ms = 0.0;
  std::size_t vertices_used = 0;

  // not part of the CSV
  bool skipped = false;
  std::string failure_stage;
};

struct CellSummary {
  std::size_t n = 0;
  std::size_t ell = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t skipped = 0;
  double median_achieved = 0.0;
  double mean_ratio = 0.0;  // achieved / target over successful rows
  std::map<std::string, std::size_t> failure_stages;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // cell-major, trial-minor
  std::vector<CellSummary> cells;
};

/// Worker count from LIFTSUB_WORKERS, else the hardware concurrency.
std::size_t default_worker_count();

/// (n, ell) cells in run order: n_values order, then ell ascending.
std::vector<std::pair<std::size_t, std::size_t>> sweep_cells(const SweepConfig& cfg);

/// Seed of one trial, derived from (seed, n, ell, trial).
std::uint64_t trial_seed(std::uint64_t root, std::size_t n, std::size_t ell, std::size_t trial);

/// Runs one (n, ell, trial) task: sample, build, re-verify.
SweepRow run_trial(const SweepConfig& cfg, std::size_t n, std::size_t ell, std::size_t trial,
                   std::optional<SubdivisionCertificate>* certificate = nullptr);

/// Runs every trial on a worker pool. Rows reach the CSV in run order and
/// are flushed as soon as all earlier rows are done.
SweepResult run_sweep(const SweepConfig& cfg);

inline constexpr const char* kSweepCsvHeader =
    "n,ell,trial,seed,builder,success,achieved_order,target_order,runtime_ms,vertices_used";
std::string format_csv_row(const SweepRow& row);

std::string summarize_sweep(const SweepConfig& cfg, const SweepResult& result);

std::string certificate_file_name(std::size_t n, std::size_t ell, std::size_t trial);

}  // namespace liftsub
