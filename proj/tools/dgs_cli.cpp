// Command-line front end. Talks to the library only through dgs.h.
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dgs/dgs.h"

namespace {

struct Overrides {
  std::optional<std::string> seed;
  std::optional<std::string> trials;
  std::optional<std::string> workers;
  std::optional<std::string> out;
};

int report_error(const char* context, dgs_status status) {
  std::fprintf(stderr, "dgs: %s: %s (%s)\n", context, dgs_last_error(), dgs_status_name(status));
  return status == DGS_E_CONFIG || status == DGS_E_INVALID_ARGUMENT ? 2 : 1;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--trials", o.trials, "number of trials");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--out", o.out, "output directory");
}

int run_config(const std::string& path, const Overrides& o, bool compare) {
  dgs_experiment* exp = nullptr;
  dgs_status st = dgs_experiment_load(path.c_str(), &exp);
  if (st != DGS_OK) return report_error("loading config", st);

  const std::pair<const char*, const std::optional<std::string>*> keys[] = {
      {"seed", &o.seed}, {"trials", &o.trials}, {"workers", &o.workers}, {"output", &o.out}};
  for (const auto& [key, value] : keys) {
    if (!*value) continue;
    st = dgs_experiment_set(exp, key, (*value)->c_str());
    if (st != DGS_OK) {
      dgs_experiment_free(exp);
      return report_error("command-line override", st);
    }
  }
  st = dgs_experiment_validate(exp);
  if (st == DGS_OK) st = compare ? dgs_experiment_compare(exp) : dgs_experiment_run(exp);
  if (st != DGS_OK) {
    dgs_experiment_free(exp);
    return report_error(compare ? "compare" : "run", st);
  }
  for (size_t i = 0; i < dgs_experiment_output_count(exp); ++i)
    std::printf("wrote %s\n", dgs_experiment_output_path(exp, i));
  dgs_experiment_free(exp);
  return 0;
}

int make_table(const std::string& dir) {
  char* text = nullptr;
  const dgs_status st = dgs_aggregate_table(dir.c_str(), &text);
  if (st != DGS_OK) return report_error("table", st);
  std::fputs(text, stdout);
  dgs_string_free(text);
  return 0;
}

int list_presets() {
  for (size_t i = 0; i < dgs_preset_count(); ++i)
    std::printf("%-20s %s\n", dgs_preset_name(i), dgs_preset_description(i));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional Gaussian smoothing evolution strategy"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string config_path;
  std::string results_dir;
  Overrides run_o, cmp_o;

  auto* run = app.add_subcommand("run", "run the first configured method");
  run->add_option("config", config_path, "configuration file")->required();
  add_overrides(run, run_o);

  auto* cmp = app.add_subcommand("compare", "run every configured method with paired seeds");
  cmp->add_option("config", config_path, "configuration file")->required();
  add_overrides(cmp, cmp_o);

  auto* table = app.add_subcommand("table", "aggregate metric files into table.csv");
  table->add_option("dir", results_dir, "results directory")->required();

  app.add_subcommand("presets", "list built-in presets");

  CLI11_PARSE(app, argc, argv);

  if (*run) return run_config(config_path, run_o, false);
  if (*cmp) return run_config(config_path, cmp_o, true);
  if (*table) return make_table(results_dir);
  return list_presets();
}
