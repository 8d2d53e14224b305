// Command-line front end: experiments, bound calculators, the Proposition 1
// property suite and exact solves of serialized instances.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swucrl/agents.hpp"
#include "swucrl/bounds.hpp"
#include "swucrl/errors.hpp"
#include "swucrl/experiment.hpp"
#include "swucrl/serialization.hpp"
#include "swucrl/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAudit = 1;
constexpr int kExitInput = 2;

using nlohmann::json;
using namespace swucrl;

struct RunFlags {
  std::string config;
  std::size_t states = 0, actions = 0, horizon = 0, changes = 0, runs = 0, jobs = 0;
  std::size_t window = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> agents;
  std::string diameter_mode;
  std::string out;
};

int cmd_run(const RunFlags& f, CLI::App* app) {
  ExperimentSpec spec;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw InputError("cannot open config " + f.config);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw InputError(std::string("config: ") + e.what());
    }
    merge_from_json(j, spec);
  }
  const auto given = [&](const char* name) { return app->count(name) > 0; };
  if (given("--states")) spec.num_states = f.states;
  if (given("--actions")) spec.num_actions = f.actions;
  if (given("--horizon")) spec.horizon = f.horizon;
  if (given("--changes")) spec.num_changes = f.changes;
  if (given("--delta")) spec.delta = f.delta;
  if (given("--runs")) spec.num_runs = f.runs;
  if (given("--seed")) spec.base_seed = f.seed;
  if (given("--jobs")) spec.jobs = f.jobs;
  if (given("--window")) spec.window_override = f.window;
  if (given("--diameter-mode")) spec.diameter_mode = parse_diameter_mode(f.diameter_mode);
  if (given("--out")) spec.output_dir = f.out;
  if (given("--agents")) {
    spec.agents.clear();
    for (const auto& a : f.agents) spec.agents.push_back(parse_agent_kind(a));
  }
  spec.validate();

  const AggregateResult agg = run_experiment(spec);
  emit_outputs(agg, spec.output_dir);

  for (const auto& a : agg.agents) {
    std::cout << to_string(a.kind) << ": final regret " << a.final_mean << " +/- "
              << a.final_stderr << " (mean episodes " << a.mean_episodes << ")\n";
  }
  std::cout << "runs completed: " << agg.completed_runs << "/" << spec.num_runs
            << ", audits " << (agg.audits_passed() ? "passed" : "FAILED") << ", output in "
            << spec.output_dir.string() << "\n";
  for (const auto& [run, msg] : agg.failed_runs) {
    std::cerr << "run " << run << " failed: " << msg << "\n";
  }
  if (agg.too_many_failures() || !agg.audits_passed()) return kExitAudit;
  return kExitOk;
}

struct BoundFlags {
  double horizon = 100000, diameter = 1, delta = 0.1, eps = 0.1;
  std::size_t changes = 2, states = 5, actions = 3;
  std::optional<double> window;
};

int cmd_bounds(const BoundFlags& f) {
  if (!(f.delta > 0.0 && f.delta < 1.0)) throw InputError("delta must lie in (0,1)");
  if (!(f.eps > 0.0 && f.eps <= 1.0)) throw InputError("eps must lie in (0,1]");
  if (f.horizon <= 0 || f.diameter < 0 || f.states == 0 || f.actions == 0) {
    throw InputError("horizon, diameter, states and actions must be positive");
  }
  const double w_star =
      bounds::optimal_window(f.horizon, f.changes, f.diameter, f.states, f.actions, f.delta);
  const double w = f.window.value_or(
      static_cast<double>(bounds::optimal_window_steps(f.horizon, f.changes, f.diameter, f.states,
                                                       f.actions, f.delta)));
  if (w <= 0) throw InputError("window must be positive");
  const auto check = bounds::validate_window(w, f.horizon, f.states, f.actions, f.delta);
  json out = {
      {"inputs",
       {{"horizon", f.horizon},
        {"changes", f.changes},
        {"diameter", f.diameter},
        {"states", f.states},
        {"actions", f.actions},
        {"delta", f.delta},
        {"eps", f.eps},
        {"window", w}}},
      {"optimal_window", w_star},
      {"theorem1_bound",
       bounds::theorem1_bound(f.horizon, w, f.changes, f.diameter, f.states, f.actions, f.delta)},
      {"episode_count_bound", bounds::episode_count_bound(f.horizon, w, f.states, f.actions)},
      {"weighted_visit_bound", bounds::weighted_visit_bound(f.horizon, w, f.states, f.actions)},
      {"window_admissible", check.admissible},
      {"violated_terms", check.violated_terms}};
  if (f.changes > 0) {
    out["corollary1_bound"] =
        bounds::corollary1_bound(f.horizon, f.changes, f.diameter, f.states, f.actions, f.delta);
    out["corollary2_sample_complexity"] = bounds::corollary2_sample_complexity(
        f.eps, f.changes, f.diameter, f.states, f.actions, f.delta);
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_proptest(std::size_t trials, std::size_t max_n, std::uint64_t max_val,
                 std::uint64_t seed) {
  const auto report = proposition1_property_test(trials, max_n, max_val, seed);
  json out = {{"trials", report.trials},
              {"violations", report.violations},
              {"max_ratio", report.max_ratio},
              {"passed", report.passed()}};
  if (!report.counterexample.empty()) out["counterexample"] = report.counterexample;
  std::cout << out.dump(2) << "\n";
  return report.passed() ? kExitOk : kExitAudit;
}

int cmd_solve(const std::string& path, double eps) {
  const SwitchingMdp m = load_instance(path);
  json configs = json::array();
  for (const auto& c : m.configs()) {
    const auto gain = optimal_gain(c, eps);
    json entry = {{"gain", gain.gain}, {"policy", gain.policy}, {"bias", gain.bias}};
    try {
      entry["diameter"] = diameter(c).diameter;
    } catch (const InfiniteDiameterError&) {
      entry["diameter"] = "infinite";
    }
    configs.push_back(std::move(entry));
  }
  std::cout << json{{"S", m.num_states()},
                    {"A", m.num_actions()},
                    {"change_points", m.change_points()},
                    {"configs", std::move(configs)}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int cmd_generate(std::size_t states, std::size_t actions, std::size_t horizon,
                 std::size_t changes, std::uint64_t seed, const std::string& out) {
  const auto m = random_switching_mdp(states, actions, changes, horizon, seed);
  if (out.empty() || out == "-") {
    write_instance(m, std::cout);
  } else {
    save_instance(m, out);
  }
  return kExitOk;
}

int cmd_trace(const std::string& instance, const std::string& agent, double delta,
              std::size_t window, std::uint64_t seed, const std::string& out) {
  const SwitchingMdp m = load_instance(instance);
  AgentConfig cfg;
  cfg.kind = parse_agent_kind(agent);
  cfg.delta = delta;
  cfg.horizon = m.horizon();
  cfg.window = window;
  if (cfg.kind == AgentKind::Ucrl2R) {
    cfg.restart_schedule = default_restart_schedule(m.num_changes(), m.horizon());
  }
  const RunTrace trace = run_agent(cfg, m, seed);
  std::ofstream csv(out + ".csv");
  std::ofstream meta(out + ".episodes.json");
  if (!csv || !meta) throw IoError("cannot write trace files with prefix " + out);
  write_trace_csv(trace, csv);
  meta << episode_metadata_json(trace).dump(2) << "\n";
  const auto gains = config_gains(m);
  std::cout << "steps " << trace.steps.size() << ", episodes " << trace.num_episodes()
            << ", final regret " << regret_of_trace(trace, m, gains).back() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SW-UCRL and UCRL2 baselines on switching MDPs"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  RunFlags rf;
  {
    // shown as defaults in --help; only flags actually given override the spec
    const ExperimentSpec d;
    rf.states = d.num_states;
    rf.actions = d.num_actions;
    rf.horizon = d.horizon;
    rf.changes = d.num_changes;
    rf.runs = d.num_runs;
    rf.jobs = d.jobs;
    rf.delta = d.delta;
    rf.seed = d.base_seed;
    for (auto k : d.agents) rf.agents.emplace_back(to_string(k));
    rf.diameter_mode = std::string(to_string(d.diameter_mode));
    rf.out = d.output_dir.string();
  }
  auto* run = app.add_subcommand("run", "Monte-Carlo regret experiment");
  run->add_option("--config", rf.config, "JSON experiment spec; flags override it");
  run->add_option("--states", rf.states, "number of states S");
  run->add_option("--actions", rf.actions, "number of actions A");
  run->add_option("--horizon", rf.horizon, "horizon T");
  run->add_option("--changes", rf.changes, "number of changes l");
  run->add_option("--delta", rf.delta, "confidence parameter");
  run->add_option("--runs", rf.runs, "number of random instances");
  run->add_option("--seed", rf.seed, "base seed");
  run->add_option("--agents", rf.agents, "sw-ucrl, ucrl2, ucrl2-r, ucrl2-rw")->delimiter(',');
  run->add_option("--window", rf.window, "window / restart period")
      ->default_str("W*");
  run->add_option("--diameter-mode", rf.diameter_mode, "exact or paper_proxy");
  run->add_option("--jobs", rf.jobs, "worker threads");
  run->add_option("--out", rf.out, "output directory");

  BoundFlags bf;
  auto* bnd = app.add_subcommand("bounds", "evaluate the regret-bound calculators");
  bnd->add_option("--horizon", bf.horizon);
  bnd->add_option("--changes", bf.changes);
  bnd->add_option("--diameter", bf.diameter);
  bnd->add_option("--states", bf.states);
  bnd->add_option("--actions", bf.actions);
  bnd->add_option("--delta", bf.delta);
  bnd->add_option("--eps", bf.eps, "target per-step regret");
  bnd->add_option("--window", bf.window, "window to evaluate (W* is rounded)")
      ->default_str("W*");

  std::size_t trials = 10000, max_n = 50;
  std::uint64_t max_val = 1000, prop_seed = 1;
  auto* prop = app.add_subcommand("proptest", "randomized check of the weighted-sum inequality");
  prop->add_option("--trials", trials);
  prop->add_option("--max-n", max_n);
  prop->add_option("--max-val", max_val);
  prop->add_option("--seed", prop_seed);

  std::string instance;
  double eps = 1e-9;
  auto* solve = app.add_subcommand("solve", "optimal gain and diameter of each config");
  solve->add_option("instance", instance, "instance JSON")->required();
  solve->add_option("--eps", eps);

  std::size_t gs = 5, ga = 3, gt = 100000, gl = 2;
  std::uint64_t gseed = 1;
  std::string gout;
  auto* gen = app.add_subcommand("generate", "write a random switching-MDP instance");
  gen->add_option("--states", gs);
  gen->add_option("--actions", ga);
  gen->add_option("--horizon", gt);
  gen->add_option("--changes", gl);
  gen->add_option("--seed", gseed);
  gen->add_option("--out", gout, "file (default stdout)");

  std::string tagent = "sw-ucrl", tout = "trace";
  double tdelta = 0.1;
  std::size_t twindow = 1000;
  std::uint64_t tseed = 1;
  auto* tr = app.add_subcommand("trace", "run one agent on an instance and dump its trace");
  tr->add_option("instance", instance, "instance JSON")->required();
  tr->add_option("--agent", tagent);
  tr->add_option("--delta", tdelta);
  tr->add_option("--window", twindow);
  tr->add_option("--seed", tseed);
  tr->add_option("--out", tout, "output prefix for <prefix>.csv and <prefix>.episodes.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*run) return cmd_run(rf, run);
    if (*bnd) return cmd_bounds(bf);
    if (*prop) return cmd_proptest(trials, max_n, max_val, prop_seed);
    if (*solve) return cmd_solve(instance, eps);
    if (*gen) return cmd_generate(gs, ga, gt, gl, gseed, gout);
    if (*tr) return cmd_trace(instance, tagent, tdelta, twindow, tseed, tout);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAudit;
  }
  return kExitOk;
}
