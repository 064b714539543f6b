// Multi-trial experiment runner and CSV persistence.

#include "dgs/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "dgs/error.hpp"
#include "dgs/rng.hpp"

namespace dgs {

namespace {

constexpr std::uint64_t kInitStream = 0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::string_view kTrajectoryHeader = "trial,iteration,evals,loss,grad_norm,perturbed";
constexpr std::string_view kMetricsHeader = "trial,cos_dist,grad_norm_std,final_loss";
constexpr std::string_view kMetricsSuffix = "_metrics.csv";

std::size_t method_index(Method m) {
  return static_cast<std::size_t>(std::find(kAllMethods.begin(), kAllMethods.end(), m) -
                                  kAllMethods.begin());
}

RunRecord run_trial(const ExperimentConfig& cfg, const BenchmarkInfo& bench, Method method,
                    std::size_t trial, WorkerPool& pool) {
  RunRecord record;
  record.trial = trial;
  record.method = method;

  const Objective f = make_objective(bench);
  const Vector x0 = trial_initial_state(cfg, trial);
  const std::uint64_t seed = derive_seed(trial_seed(cfg.seed, trial), 1 + method_index(method));

  Trajectory traj;
  try {
    if (method == Method::dgs) {
      DgsConfig run = cfg.dgs;
      run.seed = seed;
      traj = dgs_es_minimize(f, x0, run, pool);
    } else {
      BaselineConfig run = cfg.baseline(method);
      run.seed = seed;
      if (method == Method::mc_gs) run.samples = cfg.resolved_mc_gs_samples();
      traj = baseline_minimize(f, x0, run, pool);
    }
  } catch (const OptimizationAborted& e) {
    traj = e.partial();
    record.failed = true;
    record.failure = e.what();
  }

  record.rows.reserve(traj.records.size());
  for (const auto& r : traj.records) {
    record.rows.push_back(
        {r.iteration, r.evaluations, r.loss, r.has_gradient() ? r.gradient.norm() : kNaN, r.perturbed});
  }
  try {
    record.metrics = metric_report(traj, bench.minimizer);
  } catch (const MetricError&) {
    record.metrics.reset();
  }
  record.final_loss = (record.failed || traj.records.empty()) ? kNaN : traj.final_loss();
  return record;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  while (true) {
    const auto comma = line.find(',');
    cells.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return cells;
}

double parse_cell(std::string_view cell, const std::filesystem::path& path) {
  if (cell == "nan" || cell == "-nan") return kNaN;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw IoError(path.string(), "malformed number '" + std::string(cell) + "'");
  }
  return value;
}

double finite_mean(const std::vector<double>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  }
  return n == 0 ? kNaN : sum / static_cast<double>(n);
}

double finite_median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  return std::string(buffer, ptr);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) noexcept {
  return derive_seed(master, trial);
}

Vector trial_initial_state(const ExperimentConfig& cfg, std::size_t trial) {
  const BenchmarkInfo bench = make_benchmark(cfg.benchmark, cfg.dimension);
  Rng rng(trial_seed(cfg.seed, trial), kInitStream);
  return sample_initial_state(bench, rng);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, Method method, WorkerPool& pool) {
  cfg.validate();
  const BenchmarkInfo bench = make_benchmark(cfg.benchmark, cfg.dimension);
  std::vector<RunRecord> records(cfg.trials);
  pool.parallel_for(cfg.trials, [&](std::size_t trial) {
    records[trial] = run_trial(cfg, bench, method, trial, pool);
  });
  return records;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  WorkerPool pool(std::max<std::size_t>(cfg.workers, 1));
  return run_experiment(cfg, cfg.methods.at(0), pool);
}

std::filesystem::path metrics_path_for(const std::filesystem::path& path) {
  std::filesystem::path out = path;
  out.replace_filename(path.stem().string() + std::string(kMetricsSuffix));
  return out;
}

void write_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  {
    std::ofstream out = open_for_write(path);
    out << kTrajectoryHeader << '\n';
    for (const auto& record : records) {
      for (const auto& row : record.rows) {
        out << record.trial << ',' << row.iteration << ',' << row.evaluations << ','
            << format_double(row.loss) << ',' << format_double(row.grad_norm) << ','
            << (row.perturbed ? 1 : 0) << '\n';
      }
    }
    finish(out, path);
  }
  const std::filesystem::path metrics = metrics_path_for(path);
  std::ofstream out = open_for_write(metrics);
  out << kMetricsHeader << '\n';
  for (const auto& record : records) {
    out << record.trial << ','
        << format_double(record.metrics ? record.metrics->cos_dist : kNaN) << ','
        << format_double(record.metrics ? record.metrics->grad_norm_std : kNaN) << ','
        << format_double(record.final_loss) << '\n';
  }
  finish(out, metrics);
}

std::vector<std::filesystem::path> run_to_directory(const ExperimentConfig& cfg, bool all_methods) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError(cfg.output_dir.string(), "cannot create output directory: " + ec.message());

  std::vector<Method> methods = cfg.methods;
  if (all_methods && !cfg.methods_explicit) methods.assign(kAllMethods.begin(), kAllMethods.end());
  if (!all_methods) methods.resize(1);

  WorkerPool pool(cfg.workers);
  std::vector<std::filesystem::path> written;
  for (Method method : methods) {
    const auto records = run_experiment(cfg, method, pool);
    const auto path = cfg.output_dir / (std::string(method_id(method)) + ".csv");
    write_csv(records, path);
    written.push_back(path);
  }
  return written;
}

std::vector<TableRow> aggregate_table(const std::filesystem::path& results_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(results_dir, ec)) {
    throw IoError(results_dir.string(), "not a results directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(results_dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > kMetricsSuffix.size() &&
        name.ends_with(kMetricsSuffix)) {
      files.push_back(entry.path());
    }
  }
  auto rank = [](const std::filesystem::path& p) {
    const std::string name = p.filename().string();
    const auto m = parse_method(name.substr(0, name.size() - kMetricsSuffix.size()));
    return std::pair(m ? method_index(*m) : kAllMethods.size(), name);
  };
  std::sort(files.begin(), files.end(), [&](const auto& a, const auto& b) { return rank(a) < rank(b); });

  std::vector<TableRow> rows;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader) {
      throw IoError(path.string(), "missing metrics header");
    }
    std::vector<double> cos, grad, loss;
    std::size_t failed = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_csv(line);
      if (cells.size() != 4) throw IoError(path.string(), "expected 4 columns: " + line);
      cos.push_back(parse_cell(cells[1], path));
      grad.push_back(parse_cell(cells[2], path));
      loss.push_back(parse_cell(cells[3], path));
      if (!std::isfinite(loss.back())) ++failed;
    }
    const std::string name = path.filename().string();
    const std::string stem = name.substr(0, name.size() - kMetricsSuffix.size());
    const auto method = parse_method(stem);
    rows.push_back({method ? std::string(method_label(*method)) : stem, loss.size(), failed,
                    finite_mean(cos), finite_mean(grad), finite_mean(loss), finite_median(loss)});
  }
  return rows;
}

void write_table(const std::vector<TableRow>& rows, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << "method,trials,failed,cos_dist,grad_norm,final_loss_mean,final_loss_median\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.trials << ',' << r.failed << ',' << format_double(r.cos_dist) << ','
        << format_double(r.grad_norm) << ',' << format_double(r.final_loss_mean) << ','
        << format_double(r.final_loss_median) << '\n';
  }
  finish(out, path);
}

std::string format_table(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %6s %6s %12s %12s %14s %14s\n", "method", "trials",
                "failed", "Cos_Dist", "Grad_Norm", "loss(mean)", "loss(median)");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-10s %6zu %6zu %12.3e %12.3e %14.4e %14.4e\n",
                  r.method.c_str(), r.trials, r.failed, r.cos_dist, r.grad_norm, r.final_loss_mean,
                  r.final_loss_median);
    out << line;
  }
  return out.str();
}

}  // namespace dgs
