#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dgs/error.hpp"
#include "dgs/harness.hpp"

using namespace dgs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dgs_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig cfg = parse_config(
      "preset = rastrigin-20d\n"
      "dimension = 6\n"
      "dgs.order = 5\n"
      "dgs.iterations = 8\n"
      "mcgs.iterations = 8\n"
      "fd.iterations = 8\n"
      "nesterov.iterations = 20\n"
      "trials = 4\n"
      "seed = 17\n");
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST(Methods, IdsAndLabels) {
  EXPECT_EQ(method_id(Method::mc_gs), "mcgs");
  EXPECT_EQ(method_label(Method::mc_gs), "ES-Bpop");
  EXPECT_EQ(method_label(Method::dgs), "DGS-ES");
  EXPECT_EQ(parse_method("ES-Bpop"), Method::mc_gs);
  EXPECT_EQ(parse_method("mc_gs"), Method::mc_gs);
  EXPECT_EQ(parse_method("DGS-ES"), Method::dgs);
  EXPECT_EQ(parse_method("Nesterov"), Method::nesterov);
  EXPECT_FALSE(parse_method("cma").has_value());
}

TEST(Config, ParsesGrammar) {
  const auto cfg = parse_config(
      "# comment line\n"
      "benchmark = Ackley   # trailing comment\n"
      "dimension = 12\n"
      "methods = dgs, fd\n"
      "\n"
      "trials = 3\n"
      "seed = 42\n"
      "workers = 2\n"
      "output = out/run\n"
      "dgs.order = 5\n"
      "dgs.iterations = 40\n"
      "dgs.lr.initial = 0.5\n"
      "dgs.lr.final = 0.01\n"
      "dgs.lr.power = 3\n"
      "dgs.sigma.initial = 2\n"
      "dgs.perturb = true\n"
      "dgs.beta = 0.1\n"
      "dgs.gamma = 0.5\n"
      "dgs.alpha = 0.2\n"
      "dgs.basis_update = cumulative\n"
      "dgs.share_center = false\n"
      "fd.step = 1e-5\n");
  EXPECT_EQ(cfg.benchmark, BenchmarkKind::ackley);
  EXPECT_EQ(cfg.dimension, 12u);
  ASSERT_EQ(cfg.methods.size(), 2u);
  EXPECT_EQ(cfg.methods[1], Method::fd);
  EXPECT_TRUE(cfg.methods_explicit);
  EXPECT_EQ(cfg.trials, 3u);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.workers, 2u);
  EXPECT_EQ(cfg.output_dir, fs::path("out/run"));
  EXPECT_EQ(cfg.dgs.order, 5);
  EXPECT_EQ(cfg.dgs.iterations, 40u);
  EXPECT_EQ(cfg.dgs.learning_rate.horizon, 40u);
  EXPECT_EQ(cfg.dgs.sigma.horizon, 40u);
  EXPECT_EQ(cfg.dgs.learning_rate.initial, 0.5);
  EXPECT_EQ(cfg.dgs.learning_rate.final_value, 0.01);
  EXPECT_EQ(cfg.dgs.learning_rate.power, 3.0);
  EXPECT_EQ(cfg.dgs.sigma.initial, 2.0);
  EXPECT_TRUE(cfg.dgs.perturb);
  EXPECT_EQ(cfg.dgs.basis_update, BasisUpdate::cumulative);
  EXPECT_FALSE(cfg.dgs.share_center);
  ASSERT_TRUE(cfg.fd.step.has_value());
  EXPECT_EQ(*cfg.fd.step, 1e-5);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, PresetAppliesBeforeOtherKeys) {
  const auto cfg = parse_config("dgs.iterations = 3\npreset = sphere-20d\n");
  EXPECT_EQ(cfg.benchmark, BenchmarkKind::sphere);
  EXPECT_EQ(cfg.dimension, 20u);
  EXPECT_EQ(cfg.dgs.iterations, 3u);
  EXPECT_EQ(cfg.dgs.learning_rate.horizon, 3u);
  EXPECT_EQ(cfg.dgs.learning_rate.initial, 1.0);
}

TEST(Config, ErrorsNameTheField) {
  try {
    parse_config("dgs.bogus = 1\n", "exp.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "dgs.bogus");
    EXPECT_NE(std::string(e.what()).find("exp.cfg:1"), std::string::npos);
  }
  try {
    parse_config("trials = many\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "trials");
  }
  EXPECT_THROW(parse_config("just words\n"), ConfigError);
  EXPECT_THROW(parse_config("benchmark = rosenbrock\n"), ConfigError);
  EXPECT_THROW(parse_config("preset = nope\n"), ConfigError);
  EXPECT_THROW(parse_config("dgs.basis_update = sideways\n"), ConfigError);
}

TEST(Config, ValidationErrorsNameTheField) {
  auto expect_field = [](const std::string& text, const std::string& field) {
    const auto cfg = parse_config(text);
    try {
      cfg.validate();
      FAIL() << text;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.field(), field) << e.what();
    }
  };
  expect_field("trials = 0\n", "trials");
  expect_field("workers = 0\n", "workers");
  expect_field("dgs.order = 1\n", "dgs.order");
  expect_field("dgs.perturb = true\ndgs.sigma.initial = 1\ndgs.sigma.final = 0.1\ndgs.beta = 0.2\n",
               "dgs.beta");
  expect_field("benchmark = schaffer\ndimension = 1\n", "dimension");
  expect_field("mcgs.lr.power = -1\n", "mcgs.lr.power");
}

TEST(Config, BudgetFairness) {
  auto cfg = parse_config("preset = sphere-20d\n");
  EXPECT_EQ(cfg.resolved_mc_gs_samples(), 60u);
  cfg.set("mcgs.samples", "60");
  EXPECT_NO_THROW(cfg.validate());
  cfg.set("mcgs.samples", "100");
  try {
    cfg.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "mcgs.samples");
  }
  cfg.set("match_budget", "false");
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.resolved_mc_gs_samples(), 100u);
  cfg.set("mcgs.samples", "auto");
  cfg.set("dgs.order", "5");
  EXPECT_EQ(cfg.resolved_mc_gs_samples(), 100u);
}

TEST(Config, LoadMissingFileNamesPath) {
  try {
    load_config("/nonexistent/dir/exp.cfg");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/exp.cfg"), std::string::npos);
  }
}

TEST(Presets, CoverBothDimensionsAndBudgets) {
  const auto& all = presets();
  EXPECT_GE(all.size(), 12u);
  for (auto kind : kAllBenchmarks) {
    for (std::size_t d : {20u, 2000u}) {
      const auto it = std::find_if(all.begin(), all.end(), [&](const Preset& p) {
        return p.benchmark == kind && p.dimension == d;
      });
      ASSERT_NE(it, all.end()) << benchmark_name(kind) << " " << d;
      EXPECT_EQ(it->mc_gs.samples, static_cast<std::size_t>(it->dgs.order) * d) << it->name;
      ExperimentConfig cfg;
      apply_preset(cfg, *it);
      EXPECT_NO_THROW(cfg.validate()) << it->name;
      EXPECT_EQ(cfg.dgs.learning_rate.horizon, cfg.dgs.iterations);
    }
  }
  const auto* s = find_preset("sphere-2000d");
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->dgs.learning_rate.initial, 1.0);
  EXPECT_EQ(s->dgs.learning_rate.final_value, 0.01);
  EXPECT_EQ(s->dgs.learning_rate.power, 2.0);
  EXPECT_EQ(s->dgs.iterations, 10u);
  EXPECT_NEAR(s->dgs.learning_rate.value(5), 0.2575, 1e-15);
  EXPECT_EQ(find_preset("missing"), nullptr);
}

TEST(Csv, FormatDoubleRoundTrips) {
  Rng rng(1);
  std::vector<double> values = {0.2575, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 123456789.123456789};
  for (int k = 0; k < 1000; ++k) values.push_back(std::ldexp(rng.uniform(-1, 1), int(rng.uniform(-60, 60))));
  for (double v : values) {
    const std::string s = format_double(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Csv, EmptyRecordsGiveHeaderOnly) {
  const auto dir = scratch("empty");
  write_csv({}, dir / "x.csv");
  EXPECT_EQ(slurp(dir / "x.csv"), "trial,iteration,evals,loss,grad_norm,perturbed\n");
  EXPECT_EQ(slurp(dir / "x_metrics.csv"), "trial,cos_dist,grad_norm_std,final_loss\n");
}

TEST(Csv, SingleRowRoundTrip) {
  const auto dir = scratch("single");
  RunRecord r;
  r.trial = 2;
  r.rows.push_back({0, 7, 0.2575, 1.5, true});
  r.final_loss = 0.2575;
  write_csv({r}, dir / "one.csv");
  const auto l = lines(slurp(dir / "one.csv"));
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[1], "2,0,7,0.25750000000000001,1.5,1");
  const auto m = lines(slurp(dir / "one_metrics.csv"));
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[1], "2,nan,nan,0.25750000000000001");
}

TEST(Csv, UnwritablePathReported) {
  try {
    write_csv({}, "/nonexistent/dir/x.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/x.csv"), std::string::npos);
  }
}

TEST(Experiment, ZeroIterationsSingleRow) {
  auto cfg = parse_config("preset = sphere-20d\ndgs.iterations = 0\n");
  WorkerPool pool(1);
  const auto recs = run_experiment(cfg, Method::dgs, pool);
  ASSERT_EQ(recs.size(), 1u);
  ASSERT_EQ(recs[0].rows.size(), 1u);
  EXPECT_EQ(recs[0].rows[0].iteration, 0u);
  EXPECT_FALSE(recs[0].metrics.has_value());
}

TEST(Experiment, TrialSeedsAreStableAndPaired) {
  const auto dir = scratch("paired");
  auto cfg = small_config(dir);
  const Vector a = trial_initial_state(cfg, 2);
  cfg.trials = 10;
  EXPECT_TRUE(trial_initial_state(cfg, 2) == a);
  EXPECT_FALSE(trial_initial_state(cfg, 3) == a);
  EXPECT_EQ(trial_seed(17, 2), trial_seed(17, 2));
  EXPECT_NE(trial_seed(17, 2), trial_seed(18, 2));

  WorkerPool pool(1);
  cfg.trials = 3;
  for (auto m : kAllMethods) {
    const auto recs = run_experiment(cfg, m, pool);
    for (const auto& r : recs) {
      const auto bench = make_benchmark(cfg.benchmark, cfg.dimension);
      const Vector x0 = trial_initial_state(cfg, r.trial);
      EXPECT_EQ(r.rows.front().loss, evaluate(bench, as_span(x0))) << method_id(m);
    }
  }
}

TEST(Experiment, RowsAndBudget) {
  const auto dir = scratch("rows");
  const auto cfg = small_config(dir);
  WorkerPool pool(1);
  const auto recs = run_experiment(cfg, Method::dgs, pool);
  ASSERT_EQ(recs.size(), 4u);
  for (const auto& r : recs) {
    EXPECT_FALSE(r.failed);
    ASSERT_EQ(r.rows.size(), 9u);
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      EXPECT_EQ(r.rows[i].iteration, i);
      EXPECT_GT(r.rows[i].evaluations, r.rows[i - 1].evaluations);
    }
    EXPECT_EQ(r.rows[0].evaluations, 4u * 6 + 1);
    EXPECT_TRUE(std::isnan(r.rows.back().grad_norm));
    ASSERT_TRUE(r.metrics.has_value());
  }
}

TEST(Experiment, FailedTrialMarkedOthersContinue) {
  auto cfg = parse_config(
      "benchmark = sphere\ndimension = 4\ntrials = 3\n"
      "dgs.iterations = 30\ndgs.lr.initial = 1e200\ndgs.lr.final = 1e200\n");
  WorkerPool pool(1);
  const auto recs = run_experiment(cfg, Method::dgs, pool);
  ASSERT_EQ(recs.size(), 3u);
  for (const auto& r : recs) {
    EXPECT_TRUE(r.failed);
    EXPECT_FALSE(r.failure.empty());
    EXPECT_TRUE(std::isnan(r.final_loss));
    EXPECT_FALSE(r.rows.empty());
  }
}

TEST(Experiment, ByteIdenticalAcrossRunsAndWorkers) {
  const auto d1 = scratch("det1");
  const auto d2 = scratch("det2");
  auto cfg = small_config(d1);
  cfg.set("dgs.perturb", "true");
  cfg.set("dgs.gamma", "100");
  cfg.set("dgs.alpha", "0.1");
  cfg.set("dgs.beta", "0.2");
  run_to_directory(cfg, true);
  cfg.output_dir = d2;
  cfg.workers = 3;
  run_to_directory(cfg, true);
  for (auto m : kAllMethods) {
    const std::string id(method_id(m));
    EXPECT_EQ(slurp(d1 / (id + ".csv")), slurp(d2 / (id + ".csv"))) << id;
    EXPECT_EQ(slurp(d1 / (id + "_metrics.csv")), slurp(d2 / (id + "_metrics.csv"))) << id;
  }
}

TEST(Experiment, RunWritesFirstMethodOnly) {
  const auto dir = scratch("runfirst");
  auto cfg = small_config(dir);
  cfg.set("methods", "fd,dgs");
  const auto paths = run_to_directory(cfg, false);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].filename(), "fd.csv");
  EXPECT_TRUE(fs::exists(dir / "fd_metrics.csv"));
  EXPECT_FALSE(fs::exists(dir / "dgs.csv"));
}

TEST(Table, OneRowPerMethod) {
  const auto dir = scratch("table");
  const auto cfg = small_config(dir);
  run_to_directory(cfg, true);
  const auto rows = aggregate_table(dir);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].method, "DGS-ES");
  EXPECT_EQ(rows[1].method, "ES-Bpop");
  for (const auto& r : rows) EXPECT_EQ(r.trials, 4u);
  write_table(rows, dir / "table.csv");
  const auto l = lines(slurp(dir / "table.csv"));
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], "method,trials,failed,cos_dist,grad_norm,final_loss_mean,final_loss_median");
  EXPECT_FALSE(format_table(rows).empty());
}

TEST(Table, MeanAndMedianFromMetricFiles) {
  const auto dir = scratch("table_values");
  {
    std::ofstream out(dir / "dgs_metrics.csv");
    out << "trial,cos_dist,grad_norm_std,final_loss\n"
        << "0,0.5,1,1\n"
        << "1,0.25,3,4\n"
        << "2,nan,nan,nan\n";
  }
  const auto rows = aggregate_table(dir);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].trials, 3u);
  EXPECT_EQ(rows[0].failed, 1u);
  EXPECT_DOUBLE_EQ(rows[0].cos_dist, 0.375);
  EXPECT_DOUBLE_EQ(rows[0].grad_norm, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].final_loss_mean, 2.5);
  EXPECT_DOUBLE_EQ(rows[0].final_loss_median, 2.5);
}

TEST(Table, MissingDirectory) {
  EXPECT_THROW(aggregate_table("/nonexistent/results"), IoError);
}
