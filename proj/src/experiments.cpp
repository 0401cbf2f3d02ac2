#include "liftsub/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "liftsub/rng.hpp"

namespace liftsub {

std::size_t default_worker_count() {
  if (const char* env = std::getenv("LIFTSUB_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::pair<std::size_t, std::size_t>> sweep_cells(const SweepConfig& cfg) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (auto n : cfg.n_values) {
    std::set<std::size_t> ells(cfg.ell_values.begin(), cfg.ell_values.end());
    for (double r : cfg.ratio_values) ells.insert(static_cast<std::size_t>(std::max(1.0, std::round(r * static_cast<double>(n)))));
    for (auto ell : ells) cells.emplace_back(n, ell);
  }
  return cells;
}

std::uint64_t trial_seed(std::uint64_t root, std::size_t n, std::size_t ell, std::size_t trial) {
  return derive_seed(root, {n, ell, trial});
}

std::string certificate_file_name(std::size_t n, std::size_t ell, std::size_t trial) {
  return "n" + std::to_string(n) + "_l" + std::to_string(ell) + "_t" + std::to_string(trial) + ".json";
}

SweepRow run_trial(const SweepConfig& cfg, std::size_t n, std::size_t ell, std::size_t trial,
                   std::optional<SubdivisionCertificate>* certificate) {
  SweepRow row;
  row.n = n;
  row.ell = ell;
  row.trial = trial;
  row.seed = trial_seed(cfg.seed, n, ell, trial);
  row.builder = cfg.builder == BuilderKind::Large ? "large" : cfg.builder == BuilderKind::Small ? "small" : "auto";

  const auto start = std::chrono::steady_clock::now();
  const LiftGraph g = sample_uniform_lift(complete_base(n), ell, derive_seed(row.seed, {0}));
  BuildConfig bc = cfg.build;
  bc.seed = derive_seed(row.seed, {1});
  try {
    const BuildOutcome out = build(g, cfg.builder, bc);
    row.builder = out.builder;
    if (out.ok()) {
      // Independent re-check of the round-tripped certificate.
      const auto reread = deserialize_certificate(serialize_certificate(*out.certificate));
      if (verify_certificate(g, reread).passed) {
        row.success = true;
        row.achieved_order = certificate_order(reread);
        row.vertices_used = certificate_vertex_count(reread);
        if (certificate) *certificate = reread;
      } else {
        row.failure_stage = "re-verification";
      }
    } else {
      row.failure_stage = out.failure->stage;
    }
  } catch (const PreconditionError&) {
    row.failure_stage = "precondition";
  }
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (row.builder == "small" && ell >= 2) {
    row.target_order = target_order(n, ell);
  } else {
    row.target_order = static_cast<double>(n);
  }
  return row;
}

std::string format_csv_row(const SweepRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%llu,%s,%d,%zu,%.6f,%.3f,%zu", r.n, r.ell, r.trial,
                static_cast<unsigned long long>(r.seed), r.builder.c_str(), r.success ? 1 : 0, r.achieved_order,
                r.target_order, r.runtime_ms, r.vertices_used);
  return buf;
}

namespace {

std::vector<CellSummary> summarize_cells(const SweepConfig& cfg, const std::vector<SweepRow>& rows) {
  std::vector<CellSummary> cells;
  const auto grid = sweep_cells(cfg);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    CellSummary s;
    s.n = grid[c].first;
    s.ell = grid[c].second;
    std::vector<double> achieved;
    double ratio_sum = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const SweepRow& r = rows[c * cfg.trials + t];
      if (r.skipped) {
        ++s.skipped;
        continue;
      }
      ++s.trials;
      achieved.push_back(static_cast<double>(r.achieved_order));
      if (r.success) {
        ++s.successes;
        ratio_sum += static_cast<double>(r.achieved_order) / r.target_order;
      } else {
        ++s.failure_stages[r.failure_stage];
      }
    }
    if (!achieved.empty()) {
      std::sort(achieved.begin(), achieved.end());
      const std::size_t m = achieved.size();
      s.median_achieved = m % 2 ? achieved[m / 2] : 0.5 * (achieved[m / 2 - 1] + achieved[m / 2]);
    }
    if (s.successes) s.mean_ratio = ratio_sum / static_cast<double>(s.successes);
    cells.push_back(std::move(s));
  }
  return cells;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.n_values.empty()) throw PreconditionError("sweep needs at least one n");
  if (cfg.ell_values.empty() && cfg.ratio_values.empty()) throw PreconditionError("sweep needs ell or ratio values");
  if (cfg.trials == 0) throw PreconditionError("sweep needs at least one trial");

  const auto cells = sweep_cells(cfg);
  const std::size_t total = cells.size() * cfg.trials;
  std::vector<std::optional<SweepRow>> slots(total);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  const auto start = std::chrono::steady_clock::now();

  if (!cfg.certificate_dir.empty()) std::filesystem::create_directories(cfg.certificate_dir);
  std::ofstream csv;
  if (!cfg.csv_path.empty()) {
    csv.open(cfg.csv_path);
    if (!csv) throw std::runtime_error("cannot open " + cfg.csv_path);
    csv << kSweepCsvHeader << '\n' << std::flush;
  }

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      const auto [n, ell] = cells[k / cfg.trials];
      const std::size_t trial = k % cfg.trials;
      SweepRow row;
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (cfg.time_budget_s > 0.0 && elapsed > cfg.time_budget_s) {
        row.n = n;
        row.ell = ell;
        row.trial = trial;
        row.seed = trial_seed(cfg.seed, n, ell, trial);
        row.builder = "skipped";
        row.skipped = true;
        row.failure_stage = "time-budget";
      } else {
        std::optional<SubdivisionCertificate> cert;
        row = run_trial(cfg, n, ell, trial, &cert);
        if (cert && !cfg.certificate_dir.empty()) {
          std::ofstream out(std::filesystem::path(cfg.certificate_dir) / certificate_file_name(n, ell, trial));
          out << serialize_certificate(*cert);
        }
      }
      {
        std::lock_guard lock(mu);
        slots[k] = std::move(row);
      }
      ready.notify_one();
    }
  };

  const std::size_t workers = std::min(total, cfg.workers ? cfg.workers : default_worker_count());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);

  // Single writer: emit rows in run order as soon as they are complete.
  SweepResult result;
  result.rows.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    std::unique_lock lock(mu);
    ready.wait(lock, [&] { return slots[k].has_value(); });
    SweepRow row = std::move(*slots[k]);
    lock.unlock();
    if (csv.is_open()) csv << format_csv_row(row) << '\n' << std::flush;
    result.rows.push_back(std::move(row));
  }
  for (auto& t : pool) t.join();
  result.cells = summarize_cells(cfg, result.rows);
  return result;
}

std::string summarize_sweep(const SweepConfig& cfg, const SweepResult& result) {
  using nlohmann::json;
  json doc;
  doc["seed"] = cfg.seed;
  doc["trials_per_cell"] = cfg.trials;
  doc["epsilon"] = cfg.build.epsilon;
  doc["rows"] = result.rows.size();
  json cells = json::array();
  for (const auto& c : result.cells) {
    json stages = json::object();
    for (const auto& [stage, count] : c.failure_stages) stages[stage] = count;
    cells.push_back({{"n", c.n},
                     {"ell", c.ell},
                     {"trials", c.trials},
                     {"skipped", c.skipped},
                     {"successes", c.successes},
                     {"success_rate", c.trials ? static_cast<double>(c.successes) / static_cast<double>(c.trials) : 0.0},
                     {"median_achieved_order", c.median_achieved},
                     {"mean_achieved_over_target", c.mean_ratio},
                     {"failure_stages", stages}});
  }
  doc["cells"] = cells;
  return doc.dump(2) + "\n";
}

}  // namespace liftsub
