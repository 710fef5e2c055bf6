#include "gabe/games/microgrid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gabe/errors.hpp"

namespace gabe::games {

namespace {

const Task& find_task(const std::vector<Task>& tasks, int id) {
  for (const Task& t : tasks) {
    if (t.id == id) return t;
  }
  throw PreconditionError("unknown task id " + std::to_string(id));
}

int quantize_tenths(double units) { return static_cast<int>(std::lround(units * 10.0)); }

std::vector<int> next_pending(const std::vector<Task>& tasks, const std::vector<int>& pending,
                              int next_hour) {
  std::vector<int> out;
  for (const Task& t : tasks) {
    if (!t.active_at(next_hour)) continue;
    // Carried over tasks keep their pending status; fresh windows open pending.
    if (t.start == next_hour || std::binary_search(pending.begin(), pending.end(), t.id)) {
      out.push_back(t.id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_subset(const std::vector<int>& chosen, const std::vector<int>& pending,
                  const char* who) {
  for (int id : chosen) {
    if (!std::binary_search(pending.begin(), pending.end(), id)) {
      throw PreconditionError(std::string(who) + " attempted task " + std::to_string(id) +
                              " which is not active");
    }
  }
}

std::string join_ids(const std::vector<int>& ids) {
  std::string s;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(ids[k]);
  }
  return s;
}

std::vector<int> parse_ids(const std::string& s) {
  std::vector<int> ids;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) ids.push_back(std::stoi(tok));
  }
  return ids;
}

}  // namespace

MicrogridConfig MicrogridConfig::defaults() {
  MicrogridConfig c;
  c.tasks_p1 = {
      {1, 0, 8, 2.0, 7.0},    {2, 5, 8, 2.0, 1.5},    {3, 8, 12, 3.6, 0.8},
      {4, 10, 11, 2.4, 1.6},  {5, 11, 13, 3.9, 2.7},  {6, 14, 17, 3.8, 1.4},
      {7, 17, 18, 3.6, 2.9},  {8, 18, 21, 1.2, 1.5},  {9, 18, 23, 1.5, 2.4},
      {10, 23, 24, 5.0, 20.2},
  };
  c.tasks_p2 = {
      {11, 0, 3, 1.5, 2.0},   {12, 4, 6, 5.0, 22.2},  {13, 7, 8, 1.5, 0.9},
      {14, 9, 13, 1.3, 1.4},  {15, 11, 15, 0.7, 2.4}, {16, 13, 17, 4.5, 2.6},
      {17, 15, 18, 2.7, 1.7}, {18, 17, 18, 5.0, 1.6}, {19, 18, 22, 2.8, 1.5},
      {20, 22, 23, 4.0, 5.7},
  };
  c.generation = {1.0, 1.0, 1.0, 1.0, 1.5, 1.5, 1.5, 2.0, 2.5, 3.0, 3.0, 3.5,
                  3.5, 3.5, 3.0, 3.0, 2.5, 2.0, 1.5, 1.5, 1.0, 1.0, 1.0, 1.0};
  return c;
}

void MicrogridConfig::validate() const {
  auto check_tasks = [](const std::vector<Task>& tasks, const std::string& field) {
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      const Task& t = tasks[k];
      const std::string where = field + "[" + std::to_string(k) + "]";
      if (!(0 <= t.start && t.start < t.end && t.end <= kHorizon)) {
        throw ConfigError(where + ".window must satisfy 0 <= start < end <= 24");
      }
      if (!(t.load > 0.0)) throw ConfigError(where + ".load must be > 0");
      if (!std::isfinite(t.utility)) throw ConfigError(where + ".utility must be finite");
    }
  };
  check_tasks(tasks_p1, "tasks_p1");
  check_tasks(tasks_p2, "tasks_p2");
  std::vector<int> ids;
  for (const Task& t : tasks_p1) ids.push_back(t.id);
  for (const Task& t : tasks_p2) ids.push_back(t.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ConfigError("tasks: task ids must be unique across both players");
  }
  for (std::size_t h = 0; h < generation.size(); ++h) {
    if (!(generation[h] >= 0.0)) {
      throw ConfigError("generation[" + std::to_string(h) + "] must be >= 0");
    }
  }
  if (!(storage_cap >= 0.0)) throw ConfigError("storage_cap must be >= 0");
  if (!(blackout_cost >= 0.0)) throw ConfigError("blackout_cost must be >= 0");
}

MicrogridState microgrid_start(const MicrogridConfig& config) {
  MicrogridState s;
  s.pending_p1 = next_pending(config.tasks_p1, {}, 0);
  s.pending_p2 = next_pending(config.tasks_p2, {}, 0);
  return s;
}

MicrogridStep microgrid_step(const MicrogridConfig& config, const MicrogridState& state,
                             const std::vector<int>& run_p1, const std::vector<int>& run_p2) {
  if (state.hour >= MicrogridConfig::kHorizon) {
    throw PreconditionError("microgrid day is already over");
  }
  check_subset(run_p1, state.pending_p1, "player 1");
  check_subset(run_p2, state.pending_p2, "player 2");

  double demand = 0.0;
  for (int id : run_p1) demand += find_task(config.tasks_p1, id).load;
  for (int id : run_p2) demand += find_task(config.tasks_p2, id).load;
  const double available = state.storage() + config.generation[state.hour];

  MicrogridStep out;
  std::vector<int> left_p1 = state.pending_p1;
  std::vector<int> left_p2 = state.pending_p2;
  if (demand <= available + 1e-9) {
    for (int id : run_p1) {
      out.rewards.first += find_task(config.tasks_p1, id).utility;
      std::erase(left_p1, id);
    }
    for (int id : run_p2) {
      out.rewards.second += find_task(config.tasks_p2, id).utility;
      std::erase(left_p2, id);
    }
    const double kept = std::min(config.storage_cap, std::max(0.0, available - demand));
    out.next.storage_tenths = quantize_tenths(kept);
  } else {
    // Blackout: storage empties, attempted tasks stay pending, and the restart
    // cost is shared by whoever attempted something this hour.
    out.blackout = true;
    out.next.storage_tenths = 0;
    const int culprits = (run_p1.empty() ? 0 : 1) + (run_p2.empty() ? 0 : 1);
    if (culprits > 0) {
      const double share = config.blackout_cost / culprits;
      if (!run_p1.empty()) out.rewards.first -= share;
      if (!run_p2.empty()) out.rewards.second -= share;
    }
  }
  out.next.hour = state.hour + 1;
  out.next.pending_p1 = next_pending(config.tasks_p1, left_p1, out.next.hour);
  out.next.pending_p2 = next_pending(config.tasks_p2, left_p2, out.next.hour);
  return out;
}

MicrogridGame::MicrogridGame(MicrogridConfig config) : config_(std::move(config)) {
  config_.validate();
}

StateId MicrogridGame::encode(const MicrogridState& s) {
  return StateId("h=" + std::to_string(s.hour) + ";s=" + std::to_string(s.storage_tenths) +
                 ";p1=" + join_ids(s.pending_p1) + ";p2=" + join_ids(s.pending_p2));
}

MicrogridState MicrogridGame::decode(const StateId& id) {
  MicrogridState s;
  std::stringstream in(id.bytes());
  std::string field;
  while (std::getline(in, field, ';')) {
    const auto eq = field.find('=');
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "h") s.hour = std::stoi(value);
    else if (key == "s") s.storage_tenths = std::stoi(value);
    else if (key == "p1") s.pending_p1 = parse_ids(value);
    else if (key == "p2") s.pending_p2 = parse_ids(value);
  }
  return s;
}

std::vector<int> MicrogridGame::tasks_of(const MicrogridState& state, Seat seat, int action) {
  const auto& pending = seat == Seat::first ? state.pending_p1 : state.pending_p2;
  std::vector<int> ids;
  for (std::size_t k = 0; k < pending.size(); ++k) {
    if (action >> k & 1) ids.push_back(pending[k]);
  }
  return ids;
}

StateId MicrogridGame::start_state() const { return encode(microgrid_start(config_)); }

bool MicrogridGame::is_goal(const StateId& state) const {
  return decode(state).hour >= MicrogridConfig::kHorizon;
}

std::vector<std::string> MicrogridGame::actions(const StateId& state, Seat seat) const {
  const MicrogridState s = decode(state);
  const auto& pending = seat == Seat::first ? s.pending_p1 : s.pending_p2;
  std::vector<std::string> labels;
  const int count = 1 << pending.size();
  for (int a = 0; a < count; ++a) labels.push_back("{" + join_ids(tasks_of(s, seat, a)) + "}");
  return labels;
}

MicrogridStep MicrogridGame::step(const StateId& state, JointAction action) const {
  const MicrogridState s = decode(state);
  return microgrid_step(config_, s, tasks_of(s, Seat::first, action.first),
                        tasks_of(s, Seat::second, action.second));
}

std::vector<Transition> MicrogridGame::transition(const StateId& state, JointAction action) const {
  return {Transition{encode(step(state, action).next), 1.0}};
}

RewardPair MicrogridGame::rewards(const StateId& state, JointAction action) const {
  return step(state, action).rewards;
}

}  // namespace gabe::games
