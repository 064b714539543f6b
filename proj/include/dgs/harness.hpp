#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgs/benchmarks.hpp"
#include "dgs/metrics.hpp"
#include "dgs/optimizer.hpp"
#include "dgs/parallel.hpp"

namespace dgs {

enum class Method { dgs, mc_gs, fd, nesterov };

inline constexpr std::array<Method, 4> kAllMethods = {Method::dgs, Method::mc_gs, Method::fd,
                                                      Method::nesterov};

// File/config identifier: dgs, mcgs, fd, nesterov.
std::string_view method_id(Method method) noexcept;
// Display label: DGS-ES, ES-Bpop, FD, Nesterov.
std::string_view method_label(Method method) noexcept;
// Accepts ids and labels, case-insensitively ("mc-gs" and "es-bpop" too).
std::optional<Method> parse_method(std::string_view text);

// One experiment: a benchmark, the hyper-parameters of every method, and the
// trial layout. Schedule horizons always equal the owning method's iteration
// count; set() keeps them in sync.
struct ExperimentConfig {
  BenchmarkKind benchmark = BenchmarkKind::sphere;
  std::size_t dimension = 20;
  std::vector<Method> methods = {Method::dgs};
  bool methods_explicit = false;

  DgsConfig dgs;
  BaselineConfig mc_gs = BaselineConfig::defaults(BaselineMethod::mc_gs);
  BaselineConfig fd = BaselineConfig::defaults(BaselineMethod::fd);
  BaselineConfig nesterov = BaselineConfig::defaults(BaselineMethod::nesterov);
  // Unset: M * d of the DGS settings.
  std::optional<std::size_t> mc_gs_samples;
  // Reject an explicit mcgs.samples that differs from the DGS budget M * d.
  bool match_budget = true;

  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::filesystem::path output_dir = "results";
  std::string preset;

  // Applies one `key = value` assignment. Throws ConfigError naming the key.
  void set(std::string_view key, std::string_view value);

  // Throws ConfigError naming the offending field.
  void validate() const;

  std::size_t resolved_mc_gs_samples() const;
  BaselineConfig& baseline(Method method);
  const BaselineConfig& baseline(Method method) const;
};

// Flat `key = value` grammar: one assignment per line, `#` starts a comment,
// keys use dotted section prefixes (dgs.lr.initial). A `preset` key is applied
// before every other key regardless of its position.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

struct Preset {
  std::string name;
  BenchmarkKind benchmark;
  std::size_t dimension;
  DgsConfig dgs;
  BaselineConfig mc_gs;
  BaselineConfig fd;
  BaselineConfig nesterov;
};

// Tuned settings for the six benchmarks at 2000 and 20 dimensions.
const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);
void apply_preset(ExperimentConfig& cfg, const Preset& preset);
std::string describe_preset(const Preset& preset);

struct RunRow {
  std::size_t iteration = 0;
  std::uint64_t evaluations = 0;
  double loss = 0.0;
  double grad_norm = 0.0;  // NaN on the terminal row
  bool perturbed = false;
};

struct RunRecord {
  std::size_t trial = 0;
  Method method = Method::dgs;
  std::vector<RunRow> rows;
  std::optional<MetricReport> metrics;
  double final_loss = 0.0;
  bool failed = false;
  std::string failure;
};

// Seed of trial i: derive_seed(master, i).
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) noexcept;
// x0 of trial i; identical for every method under the same master seed.
Vector trial_initial_state(const ExperimentConfig& cfg, std::size_t trial);

// Runs cfg.trials independent trials of one method. A trial whose objective
// fails or whose iterate diverges is marked failed; the others still run.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, Method method, WorkerPool& pool);
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

// Writes `trial,iteration,evals,loss,grad_norm,perturbed` rows to `path` and
// `trial,cos_dist,grad_norm_std,final_loss` rows to metrics_path_for(path).
void write_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
std::filesystem::path metrics_path_for(const std::filesystem::path& path);

// Runs the configured methods (first only unless `all_methods`) and writes
// <output_dir>/<method>.csv plus metrics. Returns the trajectory file paths.
std::vector<std::filesystem::path> run_to_directory(const ExperimentConfig& cfg, bool all_methods);

struct TableRow {
  std::string method;
  std::size_t trials = 0;
  std::size_t failed = 0;
  double cos_dist = 0.0;
  double grad_norm = 0.0;
  double final_loss_mean = 0.0;
  double final_loss_median = 0.0;
};

// Aggregates every <method>_metrics.csv in the directory (mean over trials
// with finite values; median of final losses).
std::vector<TableRow> aggregate_table(const std::filesystem::path& results_dir);
void write_table(const std::vector<TableRow>& rows, const std::filesystem::path& path);
std::string format_table(const std::vector<TableRow>& rows);

// 17 significant digits; round-trips exactly through strtod.
std::string format_double(double value);

}  // namespace dgs
