#include "swucrl/serialization.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "swucrl/errors.hpp"

namespace swucrl {

using nlohmann::json;

json to_json(const MdpConfig& c) {
  const std::size_t S = c.num_states();
  const std::size_t A = c.num_actions();
  json reward = json::array();
  json transition = json::array();
  for (std::size_t s = 0; s < S; ++s) {
    json rrow = json::array();
    json trow = json::array();
    for (std::size_t a = 0; a < A; ++a) {
      rrow.push_back(c.mean_reward(s, a));
      const auto p = c.transition(s, a);
      trow.push_back(json(std::vector<double>(p.begin(), p.end())));
    }
    reward.push_back(std::move(rrow));
    transition.push_back(std::move(trow));
  }
  return {{"mean_reward", std::move(reward)}, {"transition", std::move(transition)}};
}

json to_json(const SwitchingMdp& m) {
  json configs = json::array();
  for (const auto& c : m.configs()) configs.push_back(to_json(c));
  return {{"S", m.num_states()},
          {"A", m.num_actions()},
          {"horizon", m.horizon()},
          {"change_points", m.change_points()},
          {"configs", std::move(configs)}};
}

MdpConfig mdp_config_from_json(const json& j, std::size_t S, std::size_t A) {
  const auto& reward = j.at("mean_reward");
  const auto& transition = j.at("transition");
  if (reward.size() != S || transition.size() != S) {
    throw InputError("instance: config tables must have S rows");
  }
  std::vector<double> r;
  std::vector<double> p;
  r.reserve(S * A);
  p.reserve(S * A * S);
  for (std::size_t s = 0; s < S; ++s) {
    if (reward[s].size() != A || transition[s].size() != A) {
      throw InputError("instance: config tables must have A entries per state");
    }
    for (std::size_t a = 0; a < A; ++a) {
      r.push_back(reward[s][a].get<double>());
      const auto& row = transition[s][a];
      if (row.size() != S) throw InputError("instance: transition rows must have S entries");
      for (const auto& x : row) p.push_back(x.get<double>());
    }
  }
  return MdpConfig(S, A, std::move(r), std::move(p));
}

SwitchingMdp switching_mdp_from_json(const json& j) {
  try {
    const auto S = j.at("S").get<std::size_t>();
    const auto A = j.at("A").get<std::size_t>();
    auto cps = j.value("change_points", std::vector<std::size_t>{});
    std::vector<MdpConfig> configs;
    for (const auto& cj : j.at("configs")) configs.push_back(mdp_config_from_json(cj, S, A));
    const std::size_t horizon =
        j.contains("horizon") ? j.at("horizon").get<std::size_t>()
                              : (cps.empty() ? std::size_t{2} : cps.back() + 1);
    return SwitchingMdp(std::move(configs), std::move(cps), horizon);
  } catch (const json::exception& e) {
    throw InputError(std::string("instance: ") + e.what());
  }
}

void write_instance(const SwitchingMdp& m, std::ostream& os) {
  // nlohmann emits the shortest round-trip representation (up to 17 digits).
  os << to_json(m).dump(1) << '\n';
}

SwitchingMdp read_instance(std::istream& is) {
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw InputError(std::string("instance: ") + e.what());
  }
  return switching_mdp_from_json(j);
}

void save_instance(const SwitchingMdp& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_instance(m, out);
}

SwitchingMdp load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_instance(in);
}

}  // namespace swucrl
