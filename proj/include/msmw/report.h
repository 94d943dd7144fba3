// Batch execution of SimConfigs and the results CSV.
//
// CSV columns, in order:
//   scenario,policy,sweep_value,seed,row_type,satisfaction_ratio,
//   time_avg_mean_queue,max_queue_observed,mean_inter_service_std,
//   max_inter_service_std
// row_type is "run" for one row per (config, run) or "aggregate" for the
// mean over a config's runs (its seed column holds the base seed). Reals are
// printed with 9 significant digits.

#ifndef MSMW_REPORT_H_
#define MSMW_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "msmw/sim.h"

namespace msmw {

struct ConfigResult {
  std::vector<RunMetrics> runs;
  AggregateMetrics aggregate;
};

struct RunOptions {
  unsigned threads = 1;
  // When set, run 0 of every config writes its per-slot trace here.
  std::filesystem::path trace_dir;
};

// Runs every (config, run) pair on a pool of worker threads. Results are
// indexed like `configs` and do not depend on the thread count.
std::vector<ConfigResult> run_configs(const std::vector<SimConfig>& configs,
                                      const RunOptions& options = {});

struct ResultRow {
  std::string scenario;
  std::string policy;
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  std::string row_type;  // "run" or "aggregate"
  double satisfaction_ratio = 0.0;
  double time_avg_mean_queue = 0.0;
  double max_queue_observed = 0.0;
  double mean_inter_service_std = 0.0;
  double max_inter_service_std = 0.0;
};

std::vector<ResultRow> result_rows(const std::vector<SimConfig>& configs,
                                   const std::vector<ConfigResult>& results);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
// Throws ConfigError on a malformed file.
std::vector<ResultRow> read_results_csv(std::istream& in);

std::string format_real(double v);  // %.9g

// Fixed-width table of the aggregate rows.
void write_summary(std::ostream& out, const std::vector<ResultRow>& rows);

// Runs the configs, writes the CSV to output_path and a summary to `log`.
// Returns 0 on success, 1 on I/O failure, 2 if any metric is not finite.
int run_and_emit(const std::vector<SimConfig>& configs, const std::filesystem::path& output_path,
                 const RunOptions& options, std::ostream& log);

}  // namespace msmw

#endif  // MSMW_REPORT_H_
