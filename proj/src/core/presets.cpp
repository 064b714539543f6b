// Tuned hyper-parameters for the benchmark suite: one preset per benchmark
// and dimension, carrying the settings of every method.

#include <cctype>
#include <sstream>
#include <string>

#include "dgs/harness.hpp"

namespace dgs {

namespace {

struct Decay {
  double initial;
  double final_value;
  double power;
};

struct Row {
  BenchmarkKind benchmark;
  std::size_t dimension;
  // DGS-ES
  int order;
  Decay dgs_lr;
  Decay dgs_sigma;
  std::size_t dgs_iterations;
  // ES-Bpop
  Decay mc_lr;
  Decay mc_sigma;
  std::size_t mc_iterations;
  // Nesterov
  Decay nesterov_lr;
  std::size_t nesterov_iterations;
  // FD
  Decay fd_lr;
  std::size_t fd_iterations;
};

using B = BenchmarkKind;

// clang-format off
constexpr Row kRows[] = {
  // benchmark       d     M  dgs lr                 dgs sigma            T    mc lr                   mc sigma              T    nesterov lr            T        fd lr                  T
  {B::sphere,      2000,  3, {1.0, 0.01, 2.0},     {1.0, 0.0001, 2.0},  10, {0.1, 0.01, 2.0},       {0.001, 0.0001, 2.0},  20, {0.001, 0.0001, 2.0},   1000000, {1.0, 0.01, 2.0},     20},
  {B::sharp_ridge, 2000,  3, {0.4, 0.0001, 3.0},   {0.5, 0.1, 0.5},     30, {0.001, 0.0001, 2.0},   {0.5, 0.1, 0.5},       30, {0.001, 0.0001, 2.0},   1000000, {0.4, 0.0001, 3.0},   60},
  {B::ackley,      2000,  3, {8000.0, 0.001, 4.0}, {2.0, 0.001, 2.0},   80, {1000.0, 0.001, 4.0},   {2.0, 0.001, 2.0},    100, {1.0, 0.001, 2.0},      1000000, {1.0, 0.001, 2.0},   160},
  {B::rastrigin,   2000, 21, {0.5, 0.001, 2.0},    {1.0, 0.5, 2.0},     20, {0.01, 0.001, 2.0},     {1.0, 0.5, 2.0},       20, {1e-5, 1e-6, 2.0},      1000000, {0.001, 0.0001, 2.0}, 400},
  {B::schaffer,    2000,  3, {5.0, 0.001, 1.0},    {50.0, 0.001, 2.0}, 200, {0.2, 0.1, 2.0},        {50.0, 0.001, 2.0},   200, {0.0001, 0.0001, 2.0},  1000000, {0.01, 0.001, 2.0},  600},
  {B::schwefel,    2000,  5, {10.0, 1.0, 1.0},     {5.0, 1.0, 2.0},    125, {0.0001, 0.00001, 2.0}, {1.0, 0.1, 2.0},      125, {0.005, 0.0001, 2.0},   1000000, {0.1, 0.01, 2.0},    500},
  {B::sphere,        20,  3, {1.0, 0.01, 2.0},     {1.0, 0.0001, 2.0},  10, {0.5, 0.01, 3.0},       {1.0, 0.01, 2.0},      10, {0.01, 0.001, 2.0},         800, {1.0, 0.01, 2.0},     40},
  {B::sharp_ridge,   20,  3, {0.4, 0.00001, 4.0},  {0.5, 0.001, 2.0},   30, {0.1, 0.0001, 2.0},     {1.0, 0.001, 2.0},     30, {0.001, 0.00001, 2.0},     2000, {0.4, 0.0001, 4.0},   50},
  {B::ackley,        20,  3, {200.0, 0.01, 4.0},   {2.0, 0.01, 2.0},    80, {50.0, 0.01, 4.0},      {2.0, 0.01, 2.0},     200, {0.1, 0.01, 2.0},          8000, {1.0, 0.01, 4.0},    400},
  {B::rastrigin,     20, 21, {0.5, 0.001, 2.0},    {1.0, 0.5, 2.0},     10, {0.1, 0.001, 2.0},      {1.0, 0.1, 2.0},       15, {0.001, 0.0001, 2.0},      6000, {0.01, 0.001, 2.0},   300},
  {B::schaffer,      20,  3, {5.0, 0.0001, 3.0},   {10.0, 0.001, 2.0}, 200, {0.5, 0.1, 2.0},        {10.0, 1.0, 2.0},     200, {0.005, 0.001, 2.0},       8000, {0.001, 0.0001, 2.0}, 400},
  {B::schwefel,      20,  5, {10.0, 1.0, 2.0},     {5.0, 1.0, 2.0},    200, {0.5, 0.1, 2.0},        {1.0, 0.5, 2.0},      200, {0.1, 0.01, 2.0},         10000, {0.1, 0.01, 2.0},    500},
};
// clang-format on

Schedule schedule(const Decay& decay, std::size_t iterations) {
  return Schedule{decay.initial, decay.final_value, decay.power, iterations};
}

std::string preset_name(BenchmarkKind kind, std::size_t dimension) {
  std::string name;
  for (char ch : benchmark_name(kind)) {
    if (std::isupper(static_cast<unsigned char>(ch)) && !name.empty()) name.push_back('-');
    name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return name + "-" + std::to_string(dimension) + "d";
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  for (const Row& row : kRows) {
    Preset p{preset_name(row.benchmark, row.dimension), row.benchmark, row.dimension, {}, {}, {}, {}};
    p.dgs.order = row.order;
    p.dgs.learning_rate = schedule(row.dgs_lr, row.dgs_iterations);
    p.dgs.sigma = schedule(row.dgs_sigma, row.dgs_iterations);
    p.dgs.iterations = row.dgs_iterations;
    p.dgs.perturb = false;

    p.mc_gs.method = BaselineMethod::mc_gs;
    p.mc_gs.learning_rate = schedule(row.mc_lr, row.mc_iterations);
    p.mc_gs.sigma = schedule(row.mc_sigma, row.mc_iterations);
    p.mc_gs.samples = static_cast<std::size_t>(row.order) * row.dimension;
    p.mc_gs.iterations = row.mc_iterations;

    p.nesterov.method = BaselineMethod::nesterov;
    p.nesterov.learning_rate = schedule(row.nesterov_lr, row.nesterov_iterations);
    p.nesterov.iterations = row.nesterov_iterations;

    p.fd.method = BaselineMethod::fd;
    p.fd.learning_rate = schedule(row.fd_lr, row.fd_iterations);
    p.fd.iterations = row.fd_iterations;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void apply_preset(ExperimentConfig& cfg, const Preset& preset) {
  cfg.preset = preset.name;
  cfg.benchmark = preset.benchmark;
  cfg.dimension = preset.dimension;
  cfg.dgs = preset.dgs;
  cfg.mc_gs = preset.mc_gs;
  cfg.fd = preset.fd;
  cfg.nesterov = preset.nesterov;
  cfg.mc_gs_samples.reset();
}

std::string describe_preset(const Preset& p) {
  std::ostringstream out;
  out << benchmark_name(p.benchmark) << " d=" << p.dimension << "  DGS-ES(M="
      << p.dgs.order << ", T=" << p.dgs.iterations << ")  ES-Bpop(N=" << p.mc_gs.samples
      << ", T=" << p.mc_gs.iterations << ")  FD(T=" << p.fd.iterations << ")  Nesterov(T="
      << p.nesterov.iterations << ")";
  return out.str();
}

}  // namespace dgs
