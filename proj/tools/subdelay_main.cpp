// subdelay: run combinatorial bandit experiments with delayed composite feedback.
//
//   subdelay run [config.yaml] [--manifest m.json] [--cell i ...] [--full] ...
//   subdelay fit summary.csv [--out slopes.csv]
//   subdelay oracle [config.yaml]
//   subdelay tailbound family.csv [--out bound.csv]

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subdelay/artifacts.hpp"
#include "subdelay/delay.hpp"
#include "subdelay/env.hpp"
#include "subdelay/errors.hpp"
#include "subdelay/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;

struct RunArgs {
  std::string config;
  std::string manifest;
  std::vector<std::size_t> cells;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::size_t threads = 0;
  bool trace = false;
  bool alpha_one = false;
  bool force_alg1_m = false;
  bool full = false;
  bool verbose = false;
};

subdelay::ExperimentConfig resolve_config(const std::string& config_path, const std::string& manifest_path) {
  if (!manifest_path.empty()) return subdelay::config_from_manifest(manifest_path);
  if (!config_path.empty()) return subdelay::load_config(config_path);
  return subdelay::ExperimentConfig{};
}

int cmd_run(const RunArgs& a) {
  auto config = resolve_config(a.config, a.manifest);
  if (!a.output.empty()) config.output_dir = a.output;
  if (a.seed) config.master_seed = *a.seed;
  if (a.replications) config.replications = *a.replications;
  config.trace = config.trace || a.trace;
  config.alpha_one = config.alpha_one || a.alpha_one;
  config.force_alg1_m = config.force_alg1_m || a.force_alg1_m;
  config.full = config.full || a.full;

  subdelay::RunOptions options;
  options.only_cells = a.cells;
  options.threads = a.threads;
  options.quiet = !a.verbose;

  const auto report = subdelay::run_experiment(config, options);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : report.failures)
    std::cerr << "failed: run " << f.run_id << " (cell " << f.cell << ", replication " << f.replication
              << "): " << f.message << '\n';
  std::cout << report.runs << " runs, " << report.failures.size() << " failed; manifest "
            << report.manifest.string() << '\n';
  return report.ok() ? kExitOk : kExitPartial;
}

int cmd_fit(const std::string& summary_path, const std::string& out_path) {
  std::ifstream in(summary_path, std::ios::binary);
  if (!in) throw subdelay::ConfigError("cannot open " + summary_path);
  std::vector<std::string> warnings;
  const auto slopes = subdelay::fit_slopes(subdelay::read_summary_csv(in), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  if (out_path.empty()) {
    subdelay::write_slopes_csv(std::cout, slopes);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    subdelay::write_slopes_csv(out, slopes);
  }
  return kExitOk;
}

int cmd_oracle(const std::string& config_path) {
  const auto config = resolve_config(config_path, "");
  std::cout << "env,n,k,optimum_set,optimum_value,alpha_target\n";
  for (const auto& family : config.envs) {
    const auto env = subdelay::build_environment(config, family);
    const auto [set, value] = subdelay::brute_force_optimum(env, config.k);
    std::cout << family << ',' << config.n << ',' << config.k << ',' << set.to_string() << ','
              << subdelay::format_double(value) << ',' << subdelay::format_double(subdelay::kGreedyAlpha * value)
              << '\n';
  }
  return kExitOk;
}

int cmd_tailbound(const std::string& family_path, const std::string& out_path) {
  std::ifstream in(family_path, std::ios::binary);
  if (!in) throw subdelay::ConfigError("cannot open " + family_path);
  const auto family = subdelay::read_pmf_family_csv(in);
  const auto bound = subdelay::build_upper_tail_bound(family);
  if (out_path.empty()) {
    subdelay::write_tail_bound_csv(std::cout, bound);
    std::cerr << "expected_tail " << subdelay::format_double(bound.expected_tail) << '\n';
  } else {
    std::ofstream out(out_path, std::ios::binary);
    subdelay::write_tail_bound_csv(out, bound);
    std::cout << "expected_tail " << subdelay::format_double(bound.expected_tail) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial submodular bandits under composite anonymous delayed feedback"};
  app.require_subcommand(1);
  app.set_version_flag("--version", subdelay::code_version());

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Execute the experiment grid");
  auto* config_opt =
      run_cmd->add_option("config", run.config, "YAML experiment file (defaults reproduce the benchmark grid)");
  run_cmd->add_option("--manifest", run.manifest, "Re-run from the resolved config stored in a manifest")
      ->excludes(config_opt);
  run_cmd->add_option("--cell", run.cells, "Only run these cell indices (repeatable)");
  run_cmd->add_option("-o,--output", run.output, "Output directory");
  run_cmd->add_option("--seed", run.seed, "Override the master seed");
  run_cmd->add_option("--replications", run.replications, "Override the replication count");
  run_cmd->add_option("--threads", run.threads, "Worker threads (default: SUBDELAY_THREADS or all cores)");
  run_cmd->add_flag("--trace", run.trace, "Write per-step trace.csv and feedback_trace.csv");
  run_cmd->add_flag("--alpha-one", run.alpha_one, "Also write 1-regret summary_alpha1.csv / slopes_alpha1.csv");
  run_cmd->add_flag("--force-alg1-m", run.force_alg1_m, "cetc-greedy uses m = ceil((T/n)^(2/3))");
  run_cmd->add_flag("--full", run.full, "Include horizons above 10^4");
  run_cmd->add_flag("-v,--verbose", run.verbose, "Log each finished run");

  std::string summary_path, fit_out;
  auto* fit_cmd = app.add_subcommand("fit", "Fit log-log regret slopes from a summary CSV");
  fit_cmd->add_option("summary", summary_path, "summary.csv written by run")->required();
  fit_cmd->add_option("-o,--out", fit_out, "Write slopes here instead of stdout");

  std::string oracle_config;
  auto* oracle_cmd = app.add_subcommand("oracle", "Print the brute-force optimum for each environment");
  oracle_cmd->add_option("config", oracle_config, "YAML experiment file");

  std::string family_path, bound_out;
  auto* tail_cmd = app.add_subcommand("tailbound", "Upper tail bound and its mean for a pmf family");
  tail_cmd->add_option("family", family_path, "CSV with header member,delay,mass")->required();
  tail_cmd->add_option("-o,--out", bound_out, "Write the bound here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*fit_cmd) return cmd_fit(summary_path, fit_out);
    if (*oracle_cmd) return cmd_oracle(oracle_config);
    if (*tail_cmd) return cmd_tailbound(family_path, bound_out);
  } catch (const subdelay::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
