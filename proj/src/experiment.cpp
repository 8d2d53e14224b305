#include "swucrl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "swucrl/bounds.hpp"
#include "swucrl/errors.hpp"
#include "swucrl/rng.hpp"
#include "swucrl/solvers.hpp"

namespace swucrl {

using nlohmann::json;

std::string_view to_string(DiameterMode mode) {
  return mode == DiameterMode::Exact ? "exact" : "paper_proxy";
}

DiameterMode parse_diameter_mode(std::string_view name) {
  if (name == "exact") return DiameterMode::Exact;
  if (name == "paper_proxy" || name == "paper-proxy" || name == "proxy") {
    return DiameterMode::PaperProxy;
  }
  throw InputError("unknown diameter mode '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
  if (num_states < 2) throw InputError("experiment: need at least 2 states");
  if (num_actions < 1) throw InputError("experiment: need at least 1 action");
  if (num_changes > 0 && horizon < num_changes + 2) {
    throw InputError("experiment: horizon too short for the requested number of changes");
  }
  if (horizon < 2) throw InputError("experiment: horizon must be >= 2");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("experiment: delta must lie in (0,1)");
  if (num_runs < 1) throw InputError("experiment: need at least one run");
  if (agents.empty()) throw InputError("experiment: agent list is empty");
  if (jobs < 1) throw InputError("experiment: jobs must be >= 1");
  if (window_override && *window_override == 0) throw InputError("experiment: window must be >= 1");
  if (diameter_mode == DiameterMode::PaperProxy && num_actions < 2) {
    throw InputError("experiment: paper_proxy diameter needs A >= 2");
  }
}

json to_json(const ExperimentSpec& spec) {
  json agents = json::array();
  for (auto k : spec.agents) agents.push_back(std::string(to_string(k)));
  json j = {{"states", spec.num_states},
            {"actions", spec.num_actions},
            {"horizon", spec.horizon},
            {"changes", spec.num_changes},
            {"delta", spec.delta},
            {"runs", spec.num_runs},
            {"seed", spec.base_seed},
            {"agents", std::move(agents)},
            {"diameter_mode", std::string(to_string(spec.diameter_mode))},
            {"jobs", spec.jobs},
            {"out", spec.output_dir.string()}};
  j["window"] = spec.window_override ? json(*spec.window_override) : json(nullptr);
  return j;
}

void merge_from_json(const json& j, ExperimentSpec& into) {
  try {
    if (j.contains("states")) into.num_states = j.at("states").get<std::size_t>();
    if (j.contains("actions")) into.num_actions = j.at("actions").get<std::size_t>();
    if (j.contains("horizon")) into.horizon = j.at("horizon").get<std::size_t>();
    if (j.contains("changes")) into.num_changes = j.at("changes").get<std::size_t>();
    if (j.contains("delta")) into.delta = j.at("delta").get<double>();
    if (j.contains("runs")) into.num_runs = j.at("runs").get<std::size_t>();
    if (j.contains("seed")) into.base_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("jobs")) into.jobs = j.at("jobs").get<std::size_t>();
    if (j.contains("out")) into.output_dir = j.at("out").get<std::string>();
    if (j.contains("diameter_mode")) {
      into.diameter_mode = parse_diameter_mode(j.at("diameter_mode").get<std::string>());
    }
    if (j.contains("window")) {
      const auto& w = j.at("window");
      into.window_override =
          w.is_null() ? std::nullopt : std::optional<std::size_t>(w.get<std::size_t>());
    }
    if (j.contains("agents")) {
      into.agents.clear();
      for (const auto& a : j.at("agents")) into.agents.push_back(parse_agent_kind(a.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
}

double diameter_for_window(DiameterMode mode, std::size_t num_states, std::size_t num_actions,
                           const std::vector<MdpConfig>& configs) {
  if (mode == DiameterMode::PaperProxy) {
    if (num_actions < 2) throw InputError("paper_proxy diameter needs A >= 2");
    const double proxy = std::log(static_cast<double>(num_states)) /
                             std::log(static_cast<double>(num_actions)) -
                         3.0;
    return std::max(proxy, 1.0);
  }
  double d = 1.0;
  for (const auto& c : configs) d = std::max(d, diameter(c).diameter);
  return d;
}

RunAudit audit_sw_ucrl_trace(const RunTrace& trace, std::size_t window, std::size_t num_states,
                             std::size_t num_actions, double delta) {
  const std::size_t T = trace.steps.size();
  const std::size_t SA = num_states * num_actions;
  RunAudit audit;
  audit.window = window;
  audit.admissible = T >= SA && bounds::validate_window(static_cast<double>(window),
                                                        static_cast<double>(T), num_states,
                                                        num_actions, delta)
                                    .admissible;

  std::vector<std::uint64_t> count(SA);
  std::vector<std::uint64_t> visits(SA);
  std::size_t i = 0;
  while (i < T) {
    const std::size_t episode = trace.steps[i].episode;
    const std::size_t t_k = trace.steps[i].t;
    // Recount the window [max(1, t_k - W), t_k - 1] from scratch.
    std::fill(count.begin(), count.end(), 0);
    const std::size_t first = t_k > window ? t_k - window : 1;
    for (std::size_t t = first; t < t_k; ++t) {
      const auto& rec = trace.steps[t - 1];
      ++count[rec.state * num_actions + rec.action];
    }
    std::fill(visits.begin(), visits.end(), 0);
    std::size_t length = 0;
    while (i < T && trace.steps[i].episode == episode) {
      ++visits[trace.steps[i].state * num_actions + trace.steps[i].action];
      ++length;
      ++i;
    }
    for (std::size_t sa = 0; sa < SA; ++sa) {
      if (visits[sa] == 0) continue;
      audit.weighted_visits += static_cast<double>(visits[sa]) /
                               std::sqrt(static_cast<double>(std::max<std::uint64_t>(1, count[sa])));
    }
    ++audit.episodes;
    audit.max_episode_length = std::max(audit.max_episode_length, length);
  }

  const double Td = static_cast<double>(T);
  const double Wd = static_cast<double>(window);
  audit.episode_bound = bounds::episode_count_bound(Td, Wd, num_states, num_actions);
  audit.episode_margin = audit.episode_bound - static_cast<double>(audit.episodes);
  audit.weighted_visit_bound = bounds::weighted_visit_bound(Td, Wd, num_states, num_actions);
  audit.weighted_visit_margin = audit.weighted_visit_bound - audit.weighted_visits;
  audit.episode_cap_ok = audit.max_episode_length <= window;
  return audit;
}

std::vector<ChangeAdaptation> change_adaptation(std::span<const double> mean_curve,
                                                std::span<const std::size_t> change_points,
                                                std::size_t window) {
  const std::size_t T = mean_curve.size();
  // prefix(t) = sum of per-step regret over steps 1..t
  const auto prefix = [&](std::size_t t) { return t == 0 ? 0.0 : mean_curve[t - 1]; };
  std::vector<ChangeAdaptation> out;
  for (std::size_t c : change_points) {
    if (c < 2 || c > T) throw InputError("change_adaptation: change point outside (1, T]");
    ChangeAdaptation ca;
    ca.change_point = c;
    const std::size_t pre_lo = c > window ? c - window : 1;
    ca.pre_mean = (prefix(c - 1) - prefix(pre_lo - 1)) / static_cast<double>(c - pre_lo);
    const std::size_t post_hi = std::min(T, c + window);
    ca.post_mean = (prefix(post_hi) - prefix(c - 1)) / static_cast<double>(post_hi - c + 1);
    out.push_back(ca);
  }
  return out;
}

const AgentSummary* AggregateResult::find(AgentKind kind) const {
  for (const auto& a : agents) {
    if (a.kind == kind) return &a;
  }
  return nullptr;
}

bool AggregateResult::audits_passed() const {
  return std::all_of(audits.begin(), audits.end(), [](const RunAudit& a) { return a.passed(); });
}

bool AggregateResult::too_many_failures() const {
  return static_cast<double>(failed_runs.size()) > 0.01 * static_cast<double>(spec.num_runs);
}

std::uint64_t agent_seed(std::uint64_t base_seed, std::size_t run, AgentKind kind) {
  return derive_seed(base_seed + run, static_cast<std::uint64_t>(kind) + 1);
}

namespace {

struct RunOutput {
  bool ok = false;
  std::string error;
  std::size_t window = 0;
  double diameter = 0.0;
  std::vector<std::vector<double>> curves;  // per agent
  std::vector<std::size_t> episodes;        // per agent
  std::optional<RunAudit> audit;
  std::optional<RunRecord> record;
};

RunOutput execute_run(const ExperimentSpec& spec, std::size_t run) {
  RunOutput out;
  try {
    SwitchingMdp instance = random_switching_mdp(spec.num_states, spec.num_actions,
                                                 spec.num_changes, spec.horizon,
                                                 spec.base_seed + run);
    auto gains = config_gains(instance, 1e-9);
    out.diameter = diameter_for_window(spec.diameter_mode, spec.num_states, spec.num_actions,
                                       instance.configs());
    out.window = spec.window_override
                     ? *spec.window_override
                     : bounds::optimal_window_steps(static_cast<double>(spec.horizon),
                                                    spec.num_changes, out.diameter,
                                                    spec.num_states, spec.num_actions, spec.delta);
    const auto schedule = default_restart_schedule(spec.num_changes, spec.horizon);

    RunRecord record{instance, gains, {}, {}};
    for (AgentKind kind : spec.agents) {
      AgentConfig cfg;
      cfg.kind = kind;
      cfg.delta = spec.delta;
      cfg.window = out.window;
      cfg.horizon = spec.horizon;
      if (kind == AgentKind::Ucrl2R) cfg.restart_schedule = schedule;
      const std::uint64_t seed = agent_seed(spec.base_seed, run, kind);
      RunTrace trace = run_agent(cfg, instance, seed);
      out.curves.push_back(regret_of_trace(trace, instance, gains));
      out.episodes.push_back(trace.num_episodes());
      if (kind == AgentKind::SwUcrl && !out.audit) {
        out.audit = audit_sw_ucrl_trace(trace, out.window, spec.num_states, spec.num_actions,
                                        spec.delta);
        out.audit->run = run;
      }
      if (spec.keep_traces) {
        record.traces.push_back(std::move(trace));
        record.seeds.push_back(seed);
      }
    }
    if (spec.keep_traces) out.record = std::move(record);
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
    out.curves.clear();
  }
  return out;
}

// Welford accumulator over runs, one per time step.
struct CurveAccumulator {
  std::vector<double> mean;
  std::vector<double> m2;
  std::size_t n = 0;
  double episodes = 0.0;

  void add(const std::vector<double>& curve, std::size_t num_episodes) {
    if (mean.empty()) {
      mean.assign(curve.size(), 0.0);
      m2.assign(curve.size(), 0.0);
    }
    ++n;
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t t = 0; t < curve.size(); ++t) {
      const double d = curve[t] - mean[t];
      mean[t] += d * inv;
      m2[t] += d * (curve[t] - mean[t]);
    }
    episodes += static_cast<double>(num_episodes);
  }
};

}  // namespace

AggregateResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t runs = spec.num_runs;
  const std::size_t workers = std::min(spec.jobs, runs);

  std::vector<std::optional<RunOutput>> slots(runs);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t run = next++; run < runs; run = next++) {
        RunOutput out = execute_run(spec, run);
        {
          std::lock_guard lock(mu);
          slots[run] = std::move(out);
        }
        ready.notify_all();
      }
    });
  }

  AggregateResult agg;
  agg.spec = spec;
  std::vector<CurveAccumulator> acc(spec.agents.size());
  for (std::size_t run = 0; run < runs; ++run) {
    RunOutput out;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return slots[run].has_value(); });
      out = std::move(*slots[run]);
      slots[run].reset();
    }
    if (!out.ok) {
      agg.failed_runs.emplace_back(run, out.error);
      continue;
    }
    ++agg.completed_runs;
    agg.windows.push_back(out.window);
    agg.diameters.push_back(out.diameter);
    for (std::size_t i = 0; i < spec.agents.size(); ++i) acc[i].add(out.curves[i], out.episodes[i]);
    if (out.audit) agg.audits.push_back(*out.audit);
    if (out.record) agg.records.push_back(std::move(*out.record));
  }
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < spec.agents.size(); ++i) {
    AgentSummary summary;
    summary.kind = spec.agents[i];
    const auto& a = acc[i];
    if (a.n > 0) {
      summary.mean_regret = a.mean;
      summary.stderr_regret.resize(a.mean.size(), 0.0);
      if (a.n > 1) {
        const double nn = static_cast<double>(a.n);
        for (std::size_t t = 0; t < a.mean.size(); ++t) {
          summary.stderr_regret[t] = std::sqrt(std::max(0.0, a.m2[t] / (nn - 1.0)) / nn);
        }
      }
      summary.final_mean = summary.mean_regret.back();
      summary.final_stderr = summary.stderr_regret.back();
      summary.mean_episodes = a.episodes / static_cast<double>(a.n);
    }
    agg.agents.push_back(std::move(summary));
  }
  return agg;
}

namespace {

std::size_t representative_window(const AggregateResult& agg) {
  if (agg.windows.empty()) return 1;
  double sum = 0.0;
  for (auto w : agg.windows) sum += static_cast<double>(w);
  return std::max<std::size_t>(1, static_cast<std::size_t>(
                                      std::llround(sum / static_cast<double>(agg.windows.size()))));
}

double representative_diameter(const AggregateResult& agg) {
  if (agg.diameters.empty()) return 1.0;
  double sum = 0.0;
  for (auto d : agg.diameters) sum += d;
  return sum / static_cast<double>(agg.diameters.size());
}

json audit_to_json(const RunAudit& a) {
  return {{"run", a.run},
          {"window", a.window},
          {"admissible", a.admissible},
          {"episodes", a.episodes},
          {"episode_bound", a.episode_bound},
          {"episode_margin", a.episode_margin},
          {"weighted_visits", a.weighted_visits},
          {"weighted_visit_bound", a.weighted_visit_bound},
          {"weighted_visit_margin", a.weighted_visit_margin},
          {"max_episode_length", a.max_episode_length},
          {"episode_cap_ok", a.episode_cap_ok},
          {"passed", a.passed()}};
}

}  // namespace

json audit_json(const AggregateResult& agg) {
  json runs = json::array();
  for (const auto& a : agg.audits) runs.push_back(audit_to_json(a));
  return {{"all_passed", agg.audits_passed()}, {"runs", std::move(runs)}};
}

json summary_json(const AggregateResult& agg) {
  const auto& spec = agg.spec;
  const std::size_t W = representative_window(agg);
  const double D = representative_diameter(agg);
  const double T = static_cast<double>(spec.horizon);
  const auto cps = regular_change_points(spec.num_changes, spec.horizon);

  json agents = json::array();
  for (const auto& a : agg.agents) {
    json entry = {{"agent", std::string(to_string(a.kind))},
                  {"final_regret_mean", a.final_mean},
                  {"final_regret_stderr", a.final_stderr},
                  {"mean_episodes", a.mean_episodes}};
    if (!a.mean_regret.empty()) {
      json bumps = json::array();
      for (const auto& ca : change_adaptation(a.mean_regret, cps, W)) {
        bumps.push_back({{"change_point", ca.change_point},
                         {"pre_mean", ca.pre_mean},
                         {"post_mean", ca.post_mean},
                         {"bump", ca.bump()}});
      }
      entry["change_adaptation"] = std::move(bumps);
    }
    agents.push_back(std::move(entry));
  }

  json failures = json::array();
  for (const auto& [run, msg] : agg.failed_runs) failures.push_back({{"run", run}, {"error", msg}});

  json overlays = {
      {"diameter", D},
      {"window", W},
      {"optimal_window", bounds::optimal_window(T, spec.num_changes, D, spec.num_states,
                                                spec.num_actions, spec.delta)},
      {"theorem1_bound", bounds::theorem1_bound(T, static_cast<double>(W), spec.num_changes, D,
                                                spec.num_states, spec.num_actions, spec.delta)}};
  if (spec.num_changes > 0) {
    overlays["corollary1_bound"] = bounds::corollary1_bound(
        T, spec.num_changes, D, spec.num_states, spec.num_actions, spec.delta);
  } else {
    overlays["corollary1_bound"] = nullptr;
  }

  return {{"spec", to_json(spec)},
          {"completed_runs", agg.completed_runs},
          {"failed_runs", std::move(failures)},
          {"change_points", cps},
          {"agents", std::move(agents)},
          {"bounds", std::move(overlays)},
          {"audits_passed", agg.audits_passed()}};
}

void emit_outputs(const AggregateResult& agg, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const auto open = [&](const std::string& name) {
    std::ofstream f(dir / name);
    if (!f) throw IoError("cannot write " + (dir / name).string());
    return f;
  };

  char buf[96];
  for (const auto& a : agg.agents) {
    auto f = open("regret_" + std::string(to_string(a.kind)) + ".csv");
    f << "t,mean_regret,stderr\n";
    for (std::size_t t = 0; t < a.mean_regret.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g\n", t + 1, a.mean_regret[t],
                    a.stderr_regret[t]);
      f << buf;
    }
  }
  open("audit.json") << audit_json(agg).dump(2) << '\n';
  open("summary.json") << summary_json(agg).dump(2) << '\n';

  auto plot = open("plot.gp");
  plot << "# gnuplot -persist plot.gp\n"
       << "set datafile separator ','\n"
       << "set key left top\n"
       << "set xlabel 't'\n"
       << "set ylabel 'average cumulative regret'\n"
       << "set title 'S=" << agg.spec.num_states << ", A=" << agg.spec.num_actions
       << ", T=" << agg.spec.horizon << ", l=" << agg.spec.num_changes << "'\n";
  for (std::size_t c : regular_change_points(agg.spec.num_changes, agg.spec.horizon)) {
    plot << "set arrow from " << c << ", graph 0 to " << c << ", graph 1 nohead dt 2\n";
  }
  plot << "plot";
  for (std::size_t i = 0; i < agg.agents.size(); ++i) {
    const std::string name(to_string(agg.agents[i].kind));
    plot << (i ? ", \\\n    " : " ") << "'regret_" << name
         << ".csv' every ::1 using 1:2 with lines title '" << name << "'";
  }
  plot << '\n';
  if (!plot) throw IoError("write failed in " + dir.string());
}

std::pair<double, double> proposition1_sides(std::span<const std::uint64_t> z,
                                             std::span<const std::uint64_t> y,
                                             std::uint64_t cap) {
  if (z.size() != y.size()) throw InputError("proposition1: z and y differ in length");
  double lhs = 0.0;
  double total = 0.0;
  std::uint64_t x = 0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (y[k] > cap || (k > 0 && y[k] > y[k - 1])) {
      throw InputError("proposition1: y must be nonincreasing and bounded by Y");
    }
    if (z[k] > x + y[k]) throw InputError("proposition1: z_k exceeds x_k + y_k");
    const double big_z = static_cast<double>(std::max<std::uint64_t>(1, x + y[k]));
    lhs += static_cast<double>(z[k]) / std::sqrt(big_z);
    total += static_cast<double>(z[k]);
    x += z[k];
  }
  const double rhs = std::sqrt(static_cast<double>(cap)) + (std::sqrt(2.0) + 1.0) * std::sqrt(total);
  return {lhs, rhs};
}

Proposition1Report proposition1_property_test(std::size_t trials, std::size_t max_n,
                                              std::uint64_t max_val, std::uint64_t seed) {
  if (trials == 0 || max_n == 0) throw InputError("proposition1: trials and max_n must be >= 1");
  Rng rng(seed);
  const auto uniform_int = [&](std::uint64_t hi) {  // inclusive
    return hi == 0 ? 0 : static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(hi + 1));
  };
  // Keeps x_k + y_k well inside the exactly representable range of double.
  constexpr std::uint64_t kStepCap = std::uint64_t{1} << 40;

  Proposition1Report report;
  report.trials = trials;
  std::vector<std::uint64_t> z;
  std::vector<std::uint64_t> y;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniform_int(max_n - 1));
    const std::uint64_t cap = uniform_int(max_val);
    z.assign(n, 0);
    y.assign(n, 0);
    std::uint64_t x = 0;
    std::uint64_t prev_y = rng.bernoulli(0.5) ? cap : uniform_int(cap);
    for (std::size_t k = 0; k < n; ++k) {
      y[k] = rng.bernoulli(0.7) ? prev_y : uniform_int(prev_y);
      prev_y = y[k];
      const std::uint64_t room = std::min(x + y[k], kStepCap);
      // Saturated steps z_k = x_k + y_k are where the inequality is tightest.
      const double mode = rng.uniform();
      z[k] = mode < 0.4 ? room : (mode < 0.5 ? 0 : uniform_int(room));
      x += z[k];
    }
    const auto [lhs, rhs] = proposition1_sides(z, y, cap);
    if (rhs > 0.0) report.max_ratio = std::max(report.max_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + 1e-12) + 1e-12) {
      ++report.violations;
      if (report.counterexample.empty()) {
        std::ostringstream os;
        os << "Y=" << cap << " z=[";
        for (std::size_t k = 0; k < n; ++k) os << (k ? "," : "") << z[k];
        os << "] y=[";
        for (std::size_t k = 0; k < n; ++k) os << (k ? "," : "") << y[k];
        os << "] lhs=" << lhs << " rhs=" << rhs;
        report.counterexample = os.str();
      }
    }
  }
  return report;
}

}  // namespace swucrl
