#include "msmw/report.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace msmw {

namespace {

std::string trace_file_name(const SimConfig& c, std::size_t index) {
  std::string label = c.label;
  for (char& ch : label)
    if (ch == '/' || ch == ' ') ch = '_';
  std::ostringstream s;
  s << std::setw(4) << std::setfill('0') << index << '_' << label << '_' << policy_name(c.policy)
    << '_' << format_real(c.sweep_value) << ".csv";
  return s.str();
}

}  // namespace

std::vector<ConfigResult> run_configs(const std::vector<SimConfig>& configs,
                                      const RunOptions& options) {
  struct Job {
    std::size_t config;
    int run;
  };
  std::vector<Job> jobs;
  std::vector<ConfigResult> results(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    validate_config(configs[c]);
    results[c].runs.resize(static_cast<std::size_t>(configs[c].num_runs));
    for (int r = 0; r < configs[c].num_runs; ++r) jobs.push_back({c, r});
  }
  if (!options.trace_dir.empty()) std::filesystem::create_directories(options.trace_dir);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      const SimConfig& cfg = configs[job.config];
      try {
        TraceSink sink;
        std::ofstream trace_out;
        if (!options.trace_dir.empty() && job.run == 0) {
          trace_out.open(options.trace_dir / trace_file_name(cfg, job.config));
          if (!trace_out) throw std::runtime_error("cannot open trace file in " + options.trace_dir.string());
          write_trace_header(trace_out, cfg.network.size());
          sink = [&](const TraceRecord& rec) { write_trace_record(trace_out, rec); };
        }
        results[job.config].runs[static_cast<std::size_t>(job.run)] =
            run_simulation(cfg, cfg.run_seed(job.run), sink).metrics;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (ConfigResult& r : results) r.aggregate = aggregate_runs(r.runs);
  return results;
}

std::vector<ResultRow> result_rows(const std::vector<SimConfig>& configs,
                                   const std::vector<ConfigResult>& results) {
  std::vector<ResultRow> rows;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const SimConfig& cfg = configs[c];
    ResultRow base;
    base.scenario = cfg.label;
    base.policy = std::string(policy_name(cfg.policy));
    base.sweep_value = cfg.sweep_value;
    for (std::size_t r = 0; r < results[c].runs.size(); ++r) {
      const RunMetrics& m = results[c].runs[r];
      ResultRow row = base;
      row.seed = cfg.run_seed(static_cast<int>(r));
      row.row_type = "run";
      row.satisfaction_ratio = m.satisfaction_ratio;
      row.time_avg_mean_queue = m.time_avg_mean_queue;
      row.max_queue_observed = m.max_queue_observed;
      row.mean_inter_service_std = m.mean_inter_service_std;
      row.max_inter_service_std = m.max_inter_service_std;
      rows.push_back(std::move(row));
    }
  }
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const SimConfig& cfg = configs[c];
    const AggregateMetrics& a = results[c].aggregate;
    ResultRow row;
    row.scenario = cfg.label;
    row.policy = std::string(policy_name(cfg.policy));
    row.sweep_value = cfg.sweep_value;
    row.seed = cfg.base_seed;
    row.row_type = "aggregate";
    row.satisfaction_ratio = a.satisfaction_ratio.mean;
    row.time_avg_mean_queue = a.time_avg_mean_queue.mean;
    row.max_queue_observed = a.max_queue_observed.mean;
    row.mean_inter_service_std = a.mean_inter_service_std.mean;
    row.max_inter_service_std = a.max_inter_service_std.mean;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

constexpr const char* kHeader =
    "scenario,policy,sweep_value,seed,row_type,satisfaction_ratio,time_avg_mean_queue,"
    "max_queue_observed,mean_inter_service_std,max_inter_service_std";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_real(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("results line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.scenario << ',' << r.policy << ',' << format_real(r.sweep_value) << ',' << r.seed
        << ',' << r.row_type << ',' << format_real(r.satisfaction_ratio) << ','
        << format_real(r.time_avg_mean_queue) << ',' << format_real(r.max_queue_observed) << ','
        << format_real(r.mean_inter_service_std) << ',' << format_real(r.max_inter_service_std)
        << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw ConfigError("results CSV header mismatch");
  std::vector<ResultRow> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 10)
      throw ConfigError("results line " + std::to_string(number) + ": expected 10 columns");
    ResultRow r;
    r.scenario = cells[0];
    r.policy = cells[1];
    r.sweep_value = to_real(cells[2], number);
    try {
      r.seed = std::stoull(cells[3]);
    } catch (const std::exception&) {
      throw ConfigError("results line " + std::to_string(number) + ": bad seed");
    }
    r.row_type = cells[4];
    r.satisfaction_ratio = to_real(cells[5], number);
    r.time_avg_mean_queue = to_real(cells[6], number);
    r.max_queue_observed = to_real(cells[7], number);
    r.mean_inter_service_std = to_real(cells[8], number);
    r.max_inter_service_std = to_real(cells[9], number);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << std::left << std::setw(32) << "scenario" << std::setw(11) << "policy" << std::right
      << std::setw(8) << "sweep" << std::setw(12) << "satisfied" << std::setw(12) << "mean_Q"
      << std::setw(12) << "max_Q" << std::setw(12) << "mean_std" << std::setw(12) << "max_std"
      << '\n';
  for (const ResultRow& r : rows) {
    if (r.row_type != "aggregate") continue;
    out << std::left << std::setw(32) << r.scenario << std::setw(11) << r.policy << std::right
        << std::setw(8) << format_real(r.sweep_value) << std::fixed << std::setprecision(4)
        << std::setw(12) << r.satisfaction_ratio << std::setw(12) << r.time_avg_mean_queue
        << std::setw(12) << r.max_queue_observed << std::setw(12) << r.mean_inter_service_std
        << std::setw(12) << r.max_inter_service_std << '\n';
    out.unsetf(std::ios::floatfield);
  }
}

int run_and_emit(const std::vector<SimConfig>& configs, const std::filesystem::path& output_path,
                 const RunOptions& options, std::ostream& log) {
  const std::vector<ConfigResult> results = run_configs(configs, options);
  const std::vector<ResultRow> rows = result_rows(configs, results);

  for (const ResultRow& r : rows) {
    for (double v : {r.satisfaction_ratio, r.time_avg_mean_queue, r.max_queue_observed,
                     r.mean_inter_service_std, r.max_inter_service_std}) {
      if (!std::isfinite(v)) {
        log << "error: non-finite metric for " << r.scenario << " / " << r.policy
            << " / sweep " << format_real(r.sweep_value) << " / seed " << r.seed << '\n';
        return 2;
      }
    }
  }

  if (output_path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(output_path.parent_path(), ec);
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    log << "error: cannot open " << output_path.string() << " for writing\n";
    return 1;
  }
  write_results_csv(out, rows);
  out.close();
  if (!out) {
    log << "error: failed writing " << output_path.string() << '\n';
    return 1;
  }
  write_summary(log, rows);
  log << "wrote " << rows.size() << " rows to " << output_path.string() << '\n';
  return 0;
}

}  // namespace msmw
