#include "subdelay/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "subdelay/artifacts.hpp"
#include "subdelay/bandit.hpp"
#include "subdelay/errors.hpp"
#include "subdelay/metrics.hpp"
#include "subdelay/simulation.hpp"

#ifndef SUBDELAY_VERSION
#define SUBDELAY_VERSION "unversioned"
#endif

namespace subdelay {

using json = nlohmann::ordered_json;

std::string code_version() { return SUBDELAY_VERSION; }

// ---------------------------------------------------------------------------
// Validation

namespace {

using LineMap = std::map<std::string, int>;

int line_for(const LineMap& lines, const std::string& key) {
  auto it = lines.find(key);
  return it == lines.end() ? 0 : it->second;
}

bool known_agent(const std::string& name) {
  return std::find(std::begin(kAgentNames), std::end(kAgentNames), name) != std::end(kAgentNames);
}

void validate_impl(const ExperimentConfig& c, const LineMap& lines) {
  auto fail = [&](const std::string& key, const std::string& msg) { throw ConfigError(msg, line_for(lines, key)); };

  if (c.envs.empty()) fail("env.families", "at least one environment family is required");
  for (const auto& e : c.envs)
    if (e != "F1" && e != "F2") fail("env.families", "unknown environment family '" + e + "' (expected F1 or F2)");
  if (c.n == 0) fail("env.n", "n must be positive");
  if (c.k == 0 || c.k > c.n) fail("env.k", "k must lie in [1, n]");
  if (!(0.0 <= c.f1_weight_lo && c.f1_weight_lo <= c.f1_weight_hi && c.f1_weight_hi <= 1.0))
    fail("env.f1.weight_range", "F1 weight range must satisfy 0 <= lo <= hi <= 1");
  if (!(c.f1_noise.sd >= 0.0)) fail("env.f1.noise_sd", "noise_sd must be non-negative");
  if (!(c.f1_noise.lower <= 0.0 && 0.0 <= c.f1_noise.upper))
    fail("env.f1.noise_bounds", "noise bounds must contain 0");
  if (std::find(c.envs.begin(), c.envs.end(), "F2") != c.envs.end()) {
    std::size_t total = 0;
    for (auto s : c.f2_sizes) {
      if (s == 0) fail("env.f2.sizes", "F2 categories must be non-empty");
      total += s;
    }
    if (total != c.n)
      fail("env.f2.sizes", "F2 category sizes sum to " + std::to_string(total) + ", but n = " + std::to_string(c.n));
    if (static_cast<double>(c.f2_sizes.size() * (c.f2_sizes.size() + 1)) / 10.0 > static_cast<double>(c.k) + 1e-12)
      fail("env.f2.sizes", "F2 weight bounds j/5 sum above k; use fewer categories or a larger k");
  }

  if (c.delays.empty()) fail("delay.kinds", "at least one delay kind is required");
  for (const auto& d : c.delays) {
    try {
      build_delay(c, d);
    } catch (const Error& e) {
      fail("delay.kinds", e.what());
    }
  }

  if (c.agents.empty()) fail("agents", "at least one agent is required");
  for (const auto& a : c.agents) {
    if (!known_agent(a)) fail("agents", "unknown agent '" + a + "' (expected etcg, cetc-greedy or naive-ucb)");
    if (a == "naive-ucb" && binomial(c.n, c.k) > kEnumerationLimit)
      fail("agents", "naive-ucb cannot enumerate C(n, k) super arms");
  }

  if (c.horizons.empty()) fail("experiment.horizons", "at least one horizon is required");
  for (std::size_t i = 1; i < c.horizons.size(); ++i)
    if (c.horizons[i] <= c.horizons[i - 1]) fail("experiment.horizons", "horizons must be strictly ascending");
  if (c.horizons.front() < c.n)
    fail("experiment.horizons", "smallest horizon " + std::to_string(c.horizons.front()) + " is below n = " +
                                    std::to_string(c.n));
  if (std::find(c.agents.begin(), c.agents.end(), "cetc-greedy") != c.agents.end() &&
      c.horizons.front() < c.n * c.k)
    fail("experiment.horizons", "cetc-greedy needs every horizon >= n*k");
  if (c.replications == 0) fail("experiment.replications", "replications must be at least 1");
}

}  // namespace

void ExperimentConfig::validate() const { validate_impl(*this, {}); }

std::vector<std::uint64_t> ExperimentConfig::effective_horizons() const {
  std::vector<std::uint64_t> out;
  for (auto t : horizons)
    if (full || t <= kDeskScaleHorizon) out.push_back(t);
  return out;
}

// ---------------------------------------------------------------------------
// YAML parsing

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError(key + " must be a scalar", line_of(node));
  const auto& text = node.Scalar();
  if constexpr (std::is_same_v<T, std::string>) {
    return text;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "no" || text == "off") return false;
    throw ConfigError(key + " must be true or false, got '" + text + "'", line_of(node));
  } else {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw ConfigError(key + ": cannot read '" + text + "' as a number", line_of(node));
    return value;
  }
}

template <typename T>
std::vector<T> list(const YAML::Node& node, const std::string& key) {
  std::vector<T> out;
  if (node.IsScalar()) {
    out.push_back(scalar<T>(node, key));
  } else if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(scalar<T>(item, key));
  } else {
    throw ConfigError(key + " must be a value or a list", line_of(node));
  }
  return out;
}

template <typename T>
std::pair<T, T> range(const YAML::Node& node, const std::string& key) {
  auto v = list<T>(node, key);
  if (v.size() != 2) throw ConfigError(key + " must be a [lo, hi] pair", line_of(node));
  return {v[0], v[1]};
}

// Walks a mapping, rejecting keys that are not in `allowed`.
void each_key(const YAML::Node& map, const std::string& section, std::initializer_list<const char*> allowed,
              const std::function<void(const std::string&, const YAML::Node&)>& fn) {
  if (!map.IsMap()) throw ConfigError(section + " must be a mapping", line_of(map));
  for (const auto& kv : map) {
    const auto key = kv.first.Scalar();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError("unknown key '" + key + "' in " + section, line_of(kv.first));
    fn(key, kv.second);
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  ExperimentConfig c;
  if (root.IsNull()) {
    c.validate();
    return c;
  }

  LineMap lines;
  auto note = [&](const std::string& key, const YAML::Node& node) { lines[key] = line_of(node); };

  each_key(root, "config", {"experiment", "env", "delay", "agents", "flags"}, [&](const std::string& key,
                                                                                   const YAML::Node& node) {
    if (key == "experiment") {
      each_key(node, "experiment", {"master_seed", "replications", "horizons", "output", "full"},
               [&](const std::string& k, const YAML::Node& v) {
                 const auto name = "experiment." + k;
                 note(name, v);
                 if (k == "master_seed") c.master_seed = scalar<std::uint64_t>(v, name);
                 if (k == "replications") c.replications = scalar<std::size_t>(v, name);
                 if (k == "horizons") c.horizons = list<std::uint64_t>(v, name);
                 if (k == "output") c.output_dir = scalar<std::string>(v, name);
                 if (k == "full") c.full = scalar<bool>(v, name);
               });
    } else if (key == "env") {
      each_key(node, "env", {"families", "n", "k", "f1", "f2"}, [&](const std::string& k, const YAML::Node& v) {
        const auto name = "env." + k;
        note(name, v);
        if (k == "families") c.envs = list<std::string>(v, name);
        if (k == "n") c.n = scalar<std::size_t>(v, name);
        if (k == "k") c.k = scalar<std::size_t>(v, name);
        if (k == "f1")
          each_key(v, name, {"weight_range", "noise_sd", "noise_bounds"},
                   [&](const std::string& k1, const YAML::Node& v1) {
                     const auto n1 = name + "." + k1;
                     note(n1, v1);
                     if (k1 == "weight_range") std::tie(c.f1_weight_lo, c.f1_weight_hi) = range<double>(v1, n1);
                     if (k1 == "noise_sd") c.f1_noise.sd = scalar<double>(v1, n1);
                     if (k1 == "noise_bounds") std::tie(c.f1_noise.lower, c.f1_noise.upper) = range<double>(v1, n1);
                   });
        if (k == "f2")
          each_key(v, name, {"sizes"}, [&](const std::string& k2, const YAML::Node& v2) {
            note(name + "." + k2, v2);
            c.f2_sizes = list<std::size_t>(v2, name + "." + k2);
          });
      });
    } else if (key == "delay") {
      each_key(node, "delay", {"kinds", "custom_pmf"}, [&](const std::string& k, const YAML::Node& v) {
        const auto name = "delay." + k;
        note(name, v);
        if (k == "kinds") c.delays = list<std::string>(v, name);
        if (k == "custom_pmf") c.custom_pmf = list<double>(v, name);
      });
    } else if (key == "agents") {
      note("agents", node);
      c.agents = list<std::string>(node, "agents");
    } else if (key == "flags") {
      each_key(node, "flags", {"trace", "alpha_one", "force_alg1_m"}, [&](const std::string& k, const YAML::Node& v) {
        const auto name = "flags." + k;
        note(name, v);
        if (k == "trace") c.trace = scalar<bool>(v, name);
        if (k == "alpha_one") c.alpha_one = scalar<bool>(v, name);
        if (k == "force_alg1_m") c.force_alg1_m = scalar<bool>(v, name);
      });
    }
  });

  validate_impl(c, lines);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Manifest round trip

namespace {

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["envs"] = c.envs;
  j["n"] = c.n;
  j["k"] = c.k;
  j["f1_weight_range"] = {c.f1_weight_lo, c.f1_weight_hi};
  j["f1_noise_sd"] = c.f1_noise.sd;
  j["f1_noise_bounds"] = {c.f1_noise.lower, c.f1_noise.upper};
  j["f2_sizes"] = c.f2_sizes;
  j["delays"] = c.delays;
  j["custom_pmf"] = c.custom_pmf;
  j["agents"] = c.agents;
  j["horizons"] = c.horizons;
  j["replications"] = c.replications;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir.generic_string();
  j["trace"] = c.trace;
  j["alpha_one"] = c.alpha_one;
  j["force_alg1_m"] = c.force_alg1_m;
  j["full"] = c.full;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.envs = j.at("envs").get<std::vector<std::string>>();
  c.n = j.at("n").get<std::size_t>();
  c.k = j.at("k").get<std::size_t>();
  c.f1_weight_lo = j.at("f1_weight_range").at(0).get<double>();
  c.f1_weight_hi = j.at("f1_weight_range").at(1).get<double>();
  c.f1_noise.sd = j.at("f1_noise_sd").get<double>();
  c.f1_noise.lower = j.at("f1_noise_bounds").at(0).get<double>();
  c.f1_noise.upper = j.at("f1_noise_bounds").at(1).get<double>();
  c.f2_sizes = j.at("f2_sizes").get<std::vector<std::size_t>>();
  c.delays = j.at("delays").get<std::vector<std::string>>();
  c.custom_pmf = j.at("custom_pmf").get<std::vector<double>>();
  c.agents = j.at("agents").get<std::vector<std::string>>();
  c.horizons = j.at("horizons").get<std::vector<std::uint64_t>>();
  c.replications = j.at("replications").get<std::size_t>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.output_dir = j.at("output_dir").get<std::string>();
  c.trace = j.at("trace").get<bool>();
  c.alpha_one = j.at("alpha_one").get<bool>();
  c.force_alg1_m = j.at("force_alg1_m").get<bool>();
  c.full = j.at("full").get<bool>();
  return c;
}

}  // namespace

ExperimentConfig config_from_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open manifest " + manifest_path.string());
  try {
    const auto j = json::parse(in);
    auto c = config_from_json(j.at("config"));
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(manifest_path.string() + ": malformed manifest: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Grid

namespace {

constexpr std::uint64_t kEnvironmentStream = 0xffffffffffffffffULL;

}  // namespace

Environment build_environment(const ExperimentConfig& config, const std::string& family) {
  if (family == "F1") {
    Rng rng(derive_seed(config.master_seed, kEnvironmentStream, 0));
    return LinearEnv::draw(config.n, config.k, config.f1_weight_lo, config.f1_weight_hi, rng, config.f1_noise);
  }
  if (family == "F2") return WeightCoverEnv::blocks(config.f2_sizes, config.k);
  throw ConfigError("unknown environment family '" + family + "'");
}

DelayModel build_delay(const ExperimentConfig& config, const std::string& name) {
  if (name == "custom") {
    if (config.custom_pmf.empty()) throw ConfigError("delay 'custom' needs delay.custom_pmf");
    return DelayModel::custom(DelayPmf(config.custom_pmf));
  }
  return DelayModel::from_name(name);
}

std::vector<Cell> enumerate_cells(const ExperimentConfig& config) {
  const auto horizons = config.effective_horizons();
  std::vector<Cell> cells;
  for (std::size_t e = 0; e < config.envs.size(); ++e)
    for (std::size_t d = 0; d < config.delays.size(); ++d)
      for (const auto& agent : config.agents)
        for (std::size_t h = 0; h < horizons.size(); ++h)
          cells.push_back({cells.size(), (e * config.delays.size() + d) * horizons.size() + h, config.envs[e],
                           config.delays[d], agent, horizons[h]});
  return cells;
}

std::size_t worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SUBDELAY_THREADS")) {
    std::size_t n = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc{} && ptr == s.data() + s.size() && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Execution

namespace {

struct Job {
  std::size_t run_id;
  const Cell* cell;
  std::size_t replication;
  std::uint64_t seed;
};

struct JobResult {
  bool ok = false;
  std::string error;
  double regret = 0.0;         // (1 - 1/e)-regret
  double regret_alpha1 = 0.0;  // 1-regret
  std::string committed;
  std::uint64_t clamped = 0;
  double escaped = 0.0;
  std::optional<std::string> warning;
  std::string trace_rows;
  std::string feedback_rows;
};

struct EnvInstance {
  Environment env;
  ArmSet optimum_set;
  double optimum;
};

std::optional<std::string> exploration_warning(const Agent& agent, const Cell& cell) {
  std::uint64_t length = 0;
  if (const auto* e = dynamic_cast<const EtcgAgent*>(&agent)) length = e->exploration_length();
  else return std::nullopt;
  if (length <= cell.horizon) return std::nullopt;
  return cell.env + "/" + cell.delay + "/" + cell.agent + "/T=" + std::to_string(cell.horizon) +
         ": exploration needs " + std::to_string(length) + " steps, run ends before commit";
}

JobResult execute(const ExperimentConfig& config, const Job& job, const EnvInstance& inst) {
  JobResult r;
  const auto& cell = *job.cell;
  const auto delay = build_delay(config, cell.delay);
  auto agent = make_agent(cell.agent, inst.env.ground(), config.k, cell.horizon,
                          AgentOptions{.force_alg1_m = config.force_alg1_m});
  if (job.replication == 0) r.warning = exploration_warning(*agent, cell);

  Rng rng(job.seed);
  const auto sim = simulate(*agent, inst.env, delay, cell.horizon, rng, config.trace);

  RunMetadata meta{job.seed, cell.env, cell.delay, cell.agent, cell.horizon};
  const auto trace = regret_trace(sim.actions, inst.env, inst.optimum, kGreedyAlpha, meta);
  r.regret = trace.total();
  double one = 0.0;
  for (const auto& s : sim.actions) one += inst.optimum - inst.env.expected_value(s);
  r.regret_alpha1 = one;
  r.committed = sim.actions.empty() ? "" : sim.actions.back().to_string();
  r.clamped = sim.clamped_rewards;
  r.escaped = sim.escaped_mass;

  if (config.trace) {
    std::string rows, fb;
    const auto id = std::to_string(job.run_id);
    for (std::size_t i = 0; i < sim.actions.size(); ++i) {
      const auto t = std::to_string(i + 1);
      const auto action = sim.actions[i].to_string();
      rows += id + ',' + t + ',' + action + ',' + format_double(trace.instantaneous[i]) + ',' +
              format_double(trace.cumulative[i]) + '\n';
      const auto& f = sim.feedback[i];
      fb += id + ',' + t + ',' + action + ',' + format_double(f.realized_reward) + ',' +
            format_double(f.observation) + ',' + format_double(f.escaped_mass) + '\n';
    }
    r.trace_rows = std::move(rows);
    r.feedback_rows = std::move(fb);
  }
  r.ok = true;
  return r;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<SummaryRow> summarize(const std::vector<Cell>& cells, const std::vector<Job>& jobs,
                                  const std::vector<JobResult>& results, bool alpha_one) {
  std::map<std::size_t, std::vector<double>> per_cell;
  for (std::size_t i = 0; i < jobs.size(); ++i)
    if (results[i].ok) per_cell[jobs[i].cell->index].push_back(alpha_one ? results[i].regret_alpha1 : results[i].regret);
  std::vector<SummaryRow> rows;
  for (const auto& cell : cells) {
    auto it = per_cell.find(cell.index);
    if (it == per_cell.end()) continue;
    const auto s = summarize_values(it->second);
    rows.push_back({cell.env, cell.delay, cell.agent, cell.horizon, s.mean, s.stddev, s.runs});
  }
  return rows;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const auto started_at = utc_now();

  ExperimentReport report;
  for (auto t : config.horizons)
    if (!config.full && t > ExperimentConfig::kDeskScaleHorizon)
      report.warnings.push_back("horizon " + std::to_string(t) + " skipped; pass --full to include it");

  const auto all_cells = enumerate_cells(config);
  std::vector<Cell> cells;
  if (options.only_cells.empty()) {
    cells = all_cells;
  } else {
    const std::set<std::size_t> wanted(options.only_cells.begin(), options.only_cells.end());
    for (auto idx : wanted)
      if (idx >= all_cells.size())
        throw ConfigError("cell " + std::to_string(idx) + " is outside the grid of " +
                          std::to_string(all_cells.size()) + " cells");
    for (const auto& c : all_cells)
      if (wanted.count(c.index)) cells.push_back(c);
  }

  std::map<std::string, EnvInstance> envs;
  for (const auto& family : config.envs) {
    auto env = build_environment(config, family);
    auto [set, value] = brute_force_optimum(env, config.k);
    envs.emplace(family, EnvInstance{std::move(env), std::move(set), value});
  }

  std::vector<Job> jobs;
  for (const auto& cell : cells)
    for (std::size_t rep = 0; rep < config.replications; ++rep)
      jobs.push_back({cell.index * config.replications + rep, &cell, rep,
                      derive_seed(config.master_seed, cell.seed_index, rep)});

  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        if (options.before_run) options.before_run(*jobs[i].cell, jobs[i].replication);
        results[i] = execute(config, jobs[i], envs.at(jobs[i].cell->env));
      } catch (const std::exception& e) {
        results[i].ok = false;
        results[i].error = e.what();
      }
      if (!options.quiet) {
        std::lock_guard lock(log_mutex);
        std::cerr << "run " << jobs[i].run_id << (results[i].ok ? " done" : " FAILED") << '\n';
      }
    }
  };
  const auto threads = std::min(worker_count(options.threads), std::max<std::size_t>(jobs.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  report.runs = jobs.size();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!results[i].ok)
      report.failures.push_back({jobs[i].run_id, jobs[i].cell->index, jobs[i].replication, results[i].error});
    if (results[i].warning) report.warnings.push_back(*results[i].warning);
  }

  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);

  auto write_pair = [&](bool alpha_one, const std::string& suffix) {
    const auto rows = summarize(cells, jobs, results, alpha_one);
    auto summary = open_out(dir / ("summary" + suffix + ".csv"));
    write_summary_csv(summary, rows);
    auto slopes = open_out(dir / ("slopes" + suffix + ".csv"));
    write_slopes_csv(slopes, fit_slopes(rows, alpha_one ? nullptr : &report.warnings));
  };
  write_pair(false, "");
  if (config.alpha_one) write_pair(true, "_alpha1");

  {
    auto runs = open_out(dir / "runs.csv");
    runs << "run_id,env,delay,agent,T,replication,seed,regret,regret_alpha1,committed,clamped_rewards,escaped_mass\n";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (!results[i].ok) continue;
      const auto& j = jobs[i];
      const auto& r = results[i];
      runs << j.run_id << ',' << j.cell->env << ',' << j.cell->delay << ',' << j.cell->agent << ','
           << j.cell->horizon << ',' << j.replication << ',' << j.seed << ',' << format_double(r.regret) << ','
           << format_double(r.regret_alpha1) << ',' << r.committed << ',' << r.clamped << ','
           << format_double(r.escaped) << '\n';
    }
  }

  if (config.trace) {
    auto trace = open_out(dir / "trace.csv");
    auto feedback = open_out(dir / "feedback_trace.csv");
    trace << kTraceHeader << '\n';
    feedback << kFeedbackTraceHeader << '\n';
    for (const auto& r : results) {
      trace << r.trace_rows;
      feedback << r.feedback_rows;
    }
  }

  json manifest;
  manifest["code_version"] = code_version();
  manifest["config"] = config_to_json(config);
  json env_json;
  for (const auto& [family, inst] : envs) {
    json e;
    if (const auto* lin = inst.env.as_linear()) e["weights"] = lin->weights();
    if (const auto* wc = inst.env.as_weight_cover()) {
      e["category_of"] = wc->category_of();
      e["upper"] = wc->upper();
    }
    e["optimum_set"] = inst.optimum_set.to_string();
    e["optimum_value"] = inst.optimum;
    env_json[family] = std::move(e);
  }
  manifest["environments"] = std::move(env_json);
  json runs = json::array();
  for (const auto& j : jobs)
    runs.push_back({{"run_id", j.run_id},
                    {"cell", j.cell->index},
                    {"env", j.cell->env},
                    {"delay", j.cell->delay},
                    {"agent", j.cell->agent},
                    {"T", j.cell->horizon},
                    {"replication", j.replication},
                    {"seed", j.seed}});
  manifest["runs"] = std::move(runs);
  json failures = json::array();
  for (const auto& f : report.failures)
    failures.push_back({{"run_id", f.run_id}, {"cell", f.cell}, {"replication", f.replication}, {"error", f.message}});
  manifest["failures"] = std::move(failures);
  manifest["warnings"] = report.warnings;
  manifest["started_at"] = started_at;
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  report.manifest = dir / "manifest.json";
  auto out = open_out(report.manifest);
  out << manifest.dump(2) << '\n';
  return report;
}

}  // namespace subdelay
