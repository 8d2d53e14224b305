#include "swucrl/agents.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "swucrl/errors.hpp"
#include "swucrl/evi.hpp"
#include "swucrl/sliding_window.hpp"

namespace swucrl {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::SwUcrl:
      return "sw-ucrl";
    case AgentKind::Ucrl2:
      return "ucrl2";
    case AgentKind::Ucrl2R:
      return "ucrl2-r";
    case AgentKind::Ucrl2RW:
      return "ucrl2-rw";
  }
  return "unknown";
}

AgentKind parse_agent_kind(std::string_view name) {
  std::string key;
  for (char ch : name) {
    key.push_back(ch == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  for (auto kind : {AgentKind::SwUcrl, AgentKind::Ucrl2, AgentKind::Ucrl2R, AgentKind::Ucrl2RW}) {
    if (key == to_string(kind)) return kind;
  }
  if (key == "swucrl") return AgentKind::SwUcrl;
  throw InputError("unknown agent '" + std::string(name) + "'");
}

void AgentConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("agent: delta must lie in (0,1)");
  if (window == 0) throw InputError("agent: window must be >= 1");
}

std::vector<std::size_t> default_restart_schedule(std::size_t num_changes, std::size_t horizon) {
  std::vector<std::size_t> schedule;
  if (num_changes == 0) return schedule;
  const std::uint64_t l2 = static_cast<std::uint64_t>(num_changes) * num_changes;
  for (std::uint64_t i = 1;; ++i) {
    const std::uint64_t cube = i * i * i;
    const std::uint64_t tau = (cube + l2 - 1) / l2;
    if (tau > horizon) break;
    if (schedule.empty() || schedule.back() != tau) schedule.push_back(tau);
  }
  return schedule;
}

namespace {

// Whether the history is discarded right before step t.
class RestartClock {
 public:
  RestartClock(const AgentConfig& cfg) : kind_(cfg.kind), period_(cfg.window) {
    if (kind_ == AgentKind::Ucrl2R) schedule_ = cfg.restart_schedule;
    std::sort(schedule_.begin(), schedule_.end());
  }

  bool due(std::size_t t) const {
    if (t <= 1) return false;
    if (kind_ == AgentKind::Ucrl2RW) return (t - 1) % period_ == 0;
    if (kind_ == AgentKind::Ucrl2R) return std::binary_search(schedule_.begin(), schedule_.end(), t);
    return false;
  }

 private:
  AgentKind kind_;
  std::size_t period_;
  std::vector<std::size_t> schedule_;
};

}  // namespace

RunTrace run_agent(const AgentConfig& cfg, const SwitchingMdp& m, std::uint64_t seed,
                   const RunOptions& opts) {
  cfg.validate();
  const std::size_t S = m.num_states();
  const std::size_t A = m.num_actions();
  const std::size_t T = m.horizon();
  if (opts.initial_state >= S) throw InputError("run_agent: initial state out of range");

  const std::size_t capacity =
      cfg.kind == AgentKind::SwUcrl ? cfg.window : SlidingWindowBuffer::kUnbounded;
  SlidingWindowBuffer history(S, A, capacity);
  RestartClock restarts(cfg);
  EnvState env(seed, opts.initial_state);

  EviOptions evi_opts;
  evi_opts.max_iterations = opts.evi_max_iterations;

  RunTrace trace;
  trace.steps.reserve(T);

  while (env.t <= T) {
    const std::size_t t_k = env.t;
    if (restarts.due(t_k)) history.clear();

    EpisodeStats stats = snapshot_episode(history, t_k);
    const ConfidenceModel cm = ConfidenceModel::from_stats(stats, cfg.delta);
    EviResult plan;
    try {
      plan = extended_value_iteration(cm, 1.0 / std::sqrt(static_cast<double>(t_k)), evi_opts);
    } catch (const NumericError& e) {
      throw NumericError("episode starting at t=" + std::to_string(t_k) + ": " + e.what(),
                         e.achieved_span());
    }

    const std::size_t k = trace.episodes.size() + 1;
    EpisodeRecord episode{t_k};
    episode.optimistic_gain = plan.optimistic_gain;
    episode.evi_iterations = plan.iterations;

    while (env.t <= T) {
      if (env.t != t_k && restarts.due(env.t)) break;
      const std::size_t s = env.state;
      const std::size_t a = plan.policy[s];
      if (episode_should_end(stats, s, a)) break;

      const std::size_t t = env.t;
      const StepOutcome out = step(m, env, a);
      trace.steps.push_back({t, s, a, out.reward, k});
      history.push({s, a, out.reward, out.next_state});
      stats.record_visit(s, a);
      ++episode.length;
    }
    episode.weighted_visits = stats.weighted_visits();
    trace.episodes.push_back(episode);
  }
  return trace;
}

}  // namespace swucrl
