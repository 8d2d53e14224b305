#include "swucrl/trace.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "swucrl/errors.hpp"

namespace swucrl {

std::vector<double> RunTrace::rewards() const {
  std::vector<double> r;
  r.reserve(steps.size());
  for (const auto& s : steps) r.push_back(s.reward);
  return r;
}

std::size_t RunTrace::max_episode_length() const {
  std::size_t longest = 0;
  for (const auto& e : episodes) longest = std::max(longest, e.length);
  return longest;
}

void write_trace_csv(const RunTrace& trace, std::ostream& os) {
  os << "t,state,action,reward,episode\n";
  for (const auto& s : trace.steps) {
    os << s.t << ',' << s.state << ',' << s.action << ',' << s.reward << ',' << s.episode << '\n';
  }
}

RunTrace read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "t,state,action,reward,episode") {
    throw InputError("trace csv: bad header");
  }
  RunTrace trace;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    StepRecord rec{};
    if (!(fields >> rec.t >> rec.state >> rec.action >> rec.reward >> rec.episode)) {
      throw InputError("trace csv: malformed row '" + line + "'");
    }
    if (trace.episodes.size() < rec.episode) {
      trace.episodes.push_back(EpisodeRecord{rec.t});
    }
    ++trace.episodes.back().length;
    trace.steps.push_back(rec);
  }
  return trace;
}

nlohmann::json episode_metadata_json(const RunTrace& trace) {
  nlohmann::json eps = nlohmann::json::array();
  for (const auto& e : trace.episodes) {
    eps.push_back({{"t_k", e.start},
                   {"length", e.length},
                   {"optimistic_gain", e.optimistic_gain},
                   {"evi_iterations", e.evi_iterations},
                   {"weighted_visits", e.weighted_visits}});
  }
  return {{"num_episodes", trace.num_episodes()}, {"episodes", std::move(eps)}};
}

}  // namespace swucrl
