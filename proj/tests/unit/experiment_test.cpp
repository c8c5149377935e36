#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "subdelay/artifacts.hpp"
#include "subdelay/errors.hpp"
#include "subdelay/experiment.hpp"

using namespace subdelay;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("subdelay_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

int config_error_line(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

ExperimentConfig small_grid(const fs::path& out) {
  ExperimentConfig c;
  c.delays = {"D1", "D3", "D6"};
  c.agents = {"etcg", "cetc-greedy"};
  c.horizons = {100, 200, 400};
  c.replications = 3;
  c.output_dir = out;
  c.trace = true;
  c.alpha_one = true;
  return c;
}

const char* kArtifacts[] = {"summary.csv", "slopes.csv", "summary_alpha1.csv", "slopes_alpha1.csv",
                            "runs.csv", "trace.csv", "feedback_trace.csv"};

#ifdef SUBDELAY_CLI
int run_cli(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = std::string(SUBDELAY_CLI) + " " + args + " > " + stdout_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
  const auto c = parse_config("");
  EXPECT_EQ(c.n, 20u);
  EXPECT_EQ(c.k, 4u);
  EXPECT_EQ(c.envs, (std::vector<std::string>{"F1", "F2"}));
  EXPECT_EQ(c.delays.size(), 6u);
  EXPECT_EQ(c.horizons, (std::vector<std::uint64_t>{100, 1000, 10000, 100000}));
  EXPECT_EQ(c.effective_horizons(), (std::vector<std::uint64_t>{100, 1000, 10000}));
  EXPECT_EQ(c.replications, 10u);
}

TEST(Config, ParsesAllSections) {
  const auto c = parse_config(R"(experiment:
  master_seed: 77
  replications: 4
  horizons: [50, 500]
  output: out/x
  full: true
env:
  families: [F2]
  n: 10
  k: 3
  f1:
    weight_range: [0.2, 0.8]
    noise_sd: 0.05
    noise_bounds: [-0.05, 0.5]
  f2:
    sizes: [5, 5]
delay:
  kinds: [D2, bounded(7), custom]
  custom_pmf: [0.25, 0.75]
agents: [naive-ucb, cetc-greedy]
flags:
  trace: yes
  alpha_one: true
  force_alg1_m: true
)");
  EXPECT_EQ(c.master_seed, 77u);
  EXPECT_EQ(c.replications, 4u);
  EXPECT_EQ(c.output_dir, fs::path("out/x"));
  EXPECT_TRUE(c.full);
  EXPECT_EQ(c.n, 10u);
  EXPECT_EQ(c.f1_weight_hi, 0.8);
  EXPECT_EQ(c.f1_noise.upper, 0.5);
  EXPECT_EQ(c.f2_sizes, (std::vector<std::size_t>{5, 5}));
  EXPECT_EQ(c.delays[1], "bounded(7)");
  EXPECT_EQ(c.custom_pmf.size(), 2u);
  EXPECT_EQ(c.agents[0], "naive-ucb");
  EXPECT_TRUE(c.trace && c.alpha_one && c.force_alg1_m);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(config_error_line("env:\n  families: [F1]\n  colour: blue\n"), 3);
  EXPECT_EQ(config_error_line("experiment:\n  replications: two\n"), 2);
  EXPECT_EQ(config_error_line("experiment:\n  horizons: [1000, 100]\n"), 2);
  EXPECT_EQ(config_error_line("experiment:\n  replications: 0\n"), 2);
  EXPECT_EQ(config_error_line("env:\n  n: 20\n  k: 30\n"), 3);
  EXPECT_EQ(config_error_line("env:\n  f2:\n    sizes: [6, 6, 6]\n"), 3);
  EXPECT_EQ(config_error_line("delay:\n  kinds: [D1, D9]\n"), 2);
  EXPECT_EQ(config_error_line("\n\nagents: [thompson]\n"), 3);
  EXPECT_EQ(config_error_line("experiment:\n  horizons: [10]\n"), 2);
  EXPECT_EQ(config_error_line("flags:\n  trace: maybe\n"), 2);
  EXPECT_EQ(config_error_line("env:\n  families: [F1\n"), 3);
  EXPECT_EQ(config_error_line("delay:\n  kinds: custom\n"), 2);
}

TEST(Config, MessageNamesLine) {
  try {
    load_config(fs::path(SUBDELAY_TEST_DATA) / "bad_key.yaml");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 5: unknown key 'colour'"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST(Grid, CellArithmetic) {
  ExperimentConfig c;
  c.full = true;
  const auto cells = enumerate_cells(c);
  EXPECT_EQ(cells.size() * c.replications, 480u);
  c.agents = {"etcg", "cetc-greedy"};
  const auto two = enumerate_cells(c);
  // Agents of one configuration share their seed stream.
  EXPECT_EQ(two[0].seed_index, two[4].seed_index);
  EXPECT_EQ(two[0].agent, "etcg");
  EXPECT_EQ(two[4].agent, "cetc-greedy");
  EXPECT_NE(two[0].seed_index, two[1].seed_index);
}

TEST(Grid, EnvironmentDraws) {
  ExperimentConfig c;
  const auto a = build_environment(c, "F1");
  const auto b = build_environment(c, "F1");
  ASSERT_TRUE(a.as_linear());
  EXPECT_EQ(a.as_linear()->weights(), b.as_linear()->weights());
  c.master_seed = 2;
  EXPECT_NE(build_environment(c, "F1").as_linear()->weights(), a.as_linear()->weights());
  EXPECT_TRUE(build_environment(c, "F2").as_weight_cover());
}

TEST(WorkerCount, ReadsEnvironment) {
  ::setenv("SUBDELAY_THREADS", "3", 1);
  EXPECT_EQ(worker_count(0), 3u);
  EXPECT_EQ(worker_count(5), 5u);
  ::setenv("SUBDELAY_THREADS", "lots", 1);
  EXPECT_GE(worker_count(0), 1u);
  ::unsetenv("SUBDELAY_THREADS");
}

TEST(Run, Smoke) {
  const auto dir = scratch("smoke");
  auto c = load_config(fs::path(SUBDELAY_TEST_DATA) / "smoke.yaml");
  c.output_dir = dir;
  const auto report = run_experiment(c);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.runs, 1u);
  std::ifstream in(dir / "summary.csv");
  const auto rows = read_summary_csv(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].horizon, 100u);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  // One horizon: no slope rows.
  EXPECT_EQ(lines_of(slurp(dir / "slopes.csv")).size(), 1u);
}

TEST(Run, DeskScaleGridHasTwelveSlopeRows) {
  const auto dir = scratch("desk");
  ExperimentConfig c;
  c.replications = 2;
  c.output_dir = dir;
  const auto report = run_experiment(c);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.runs, 2u * 6 * 3 * 2);
  EXPECT_EQ(lines_of(slurp(dir / "slopes.csv")).size(), 13u);
  EXPECT_EQ(lines_of(slurp(dir / "summary.csv")).size(), 37u);
}

TEST(Run, DeterministicAcrossRunsThreadsAndManifest) {
  const auto a = scratch("det_a"), b = scratch("det_b"), m = scratch("det_m");
  auto config = small_grid(a);
  RunOptions one_thread;
  one_thread.threads = 1;
  run_experiment(config, one_thread);

  config.output_dir = b;
  RunOptions many;
  many.threads = 6;
  run_experiment(config, many);

  auto replay = config_from_manifest(a / "manifest.json");
  replay.output_dir = m;
  run_experiment(replay);

  for (const char* f : kArtifacts) {
    const auto ref = slurp(a / f);
    EXPECT_FALSE(ref.empty()) << f;
    EXPECT_EQ(ref, slurp(b / f)) << f;
    EXPECT_EQ(ref, slurp(m / f)) << f;
  }
}

TEST(Run, SingleCellReplayMatchesGrid) {
  const auto full = scratch("cell_full"), part = scratch("cell_part");
  auto config = small_grid(full);
  run_experiment(config);
  auto replay = config_from_manifest(full / "manifest.json");
  replay.output_dir = part;
  RunOptions only;
  only.only_cells = {7};
  const auto report = run_experiment(replay, only);
  EXPECT_EQ(report.runs, 3u);

  const auto all_rows = lines_of(slurp(full / "runs.csv"));
  const auto cell_rows = lines_of(slurp(part / "runs.csv"));
  ASSERT_EQ(cell_rows.size(), 4u);
  for (std::size_t i = 1; i < cell_rows.size(); ++i)
    EXPECT_NE(std::find(all_rows.begin(), all_rows.end(), cell_rows[i]), all_rows.end()) << cell_rows[i];

  only.only_cells = {999};
  EXPECT_THROW(run_experiment(replay, only), ConfigError);
}

TEST(Run, PartialFailureKeepsOtherCells) {
  const auto dir = scratch("partial");
  auto config = small_grid(dir);
  config.trace = false;
  RunOptions opts;
  opts.before_run = [](const Cell& cell, std::size_t rep) {
    if (cell.index == 2 && rep == 1) throw Error("injected failure");
  };
  const auto report = run_experiment(config, opts);
  EXPECT_FALSE(report.ok());
  ASSERT_EQ(report.failures.size(), 1u);
  EXPECT_EQ(report.failures[0].cell, 2u);
  EXPECT_EQ(report.failures[0].run_id, 7u);
  EXPECT_EQ(report.failures[0].message, "injected failure");

  std::ifstream in(dir / "summary.csv");
  const auto rows = read_summary_csv(in);
  EXPECT_EQ(rows.size(), enumerate_cells(config).size());
  EXPECT_EQ(rows[2].n_runs, 2u);
  EXPECT_EQ(rows[3].n_runs, 3u);
  EXPECT_NE(slurp(dir / "manifest.json").find("injected failure"), std::string::npos);
}

TEST(Run, WarnsWhenExplorationOutrunsHorizon) {
  const auto dir = scratch("warn");
  ExperimentConfig c;
  c.envs = {"F1"};
  c.delays = {"D1"};
  c.horizons = {100};
  c.replications = 1;
  c.output_dir = dir;
  const auto report = run_experiment(c);
  ASSERT_FALSE(report.warnings.empty());
  EXPECT_NE(report.warnings.back().find("before commit"), std::string::npos);
}

#ifdef SUBDELAY_CLI
TEST(Cli, TailboundWorkedFamily) {
  const auto dir = scratch("cli_tail");
  ASSERT_EQ(run_cli("tailbound " + (fs::path(SUBDELAY_TEST_DATA) / "worked_family.csv").string() + " -o " +
                        (dir / "bound.csv").string(),
                    dir / "stdout.txt"),
            0);
  EXPECT_EQ(slurp(dir / "bound.csv"), "delay,mass,tail\n0,0.5,1\n1,0,0.5\n2,0.5,0.5\n");
  EXPECT_EQ(slurp(dir / "stdout.txt"), "expected_tail 1\n");
}

TEST(Cli, OracleDefaultInstances) {
  const auto dir = scratch("cli_oracle");
  ASSERT_EQ(run_cli("oracle", dir / "out.txt"), 0);
  const auto lines = lines_of(slurp(dir / "out.txt"));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "env,n,k,optimum_set,optimum_value,alpha_target");
  EXPECT_EQ(lines[2].substr(0, 23), "F2,20,4,0|6|12|18,0.25,");
}

TEST(Cli, RunFitAndExitCodes) {
  const auto dir = scratch("cli_run");
  const auto cfg = dir / "grid.yaml";
  std::ofstream(cfg) << "experiment:\n  replications: 2\n  horizons: [100, 300, 900]\nenv:\n  families: F2\n"
                        "delay:\n  kinds: [D1, D5]\n";
  ASSERT_EQ(run_cli("run " + cfg.string() + " -o " + (dir / "out").string() + " --threads 2", dir / "run.txt"), 0);
  EXPECT_NE(slurp(dir / "run.txt").find("12 runs, 0 failed"), std::string::npos);

  ASSERT_EQ(run_cli("fit " + (dir / "out" / "summary.csv").string(), dir / "fit.txt"), 0);
  const auto fitted = lines_of(slurp(dir / "fit.txt"));
  const auto written = lines_of(slurp(dir / "out" / "slopes.csv"));
  for (const auto& l : written) EXPECT_NE(std::find(fitted.begin(), fitted.end(), l), fitted.end()) << l;

  EXPECT_EQ(run_cli("run " + (fs::path(SUBDELAY_TEST_DATA) / "bad_key.yaml").string(), dir / "bad.txt"), 1);
  EXPECT_NE(slurp(dir / "bad.txt").find("line 5"), std::string::npos);
  EXPECT_NE(run_cli("frobnicate", dir / "unknown.txt"), 0);
}
#endif
