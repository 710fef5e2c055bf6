#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "gabe/rsg.hpp"

namespace gabe::games {

struct Task {
  int id = 0;
  int start = 0;  // window is [start, end) in hours
  int end = 0;
  double load = 0.0;
  double utility = 0.0;

  bool active_at(int hour) const { return start <= hour && hour < end; }
};

struct MicrogridConfig {
  std::vector<Task> tasks_p1;
  std::vector<Task> tasks_p2;
  std::array<double, 24> generation{};
  double storage_cap = 5.0;
  double blackout_cost = 2.0;

  static constexpr int kHorizon = 24;

  // Tasks of both players as tabulated for the scenario, with the bundled
  // 24-hour generation profile.
  static MicrogridConfig defaults();
  // Throws ConfigError naming the offending field.
  void validate() const;
};

struct MicrogridState {
  int hour = 0;
  int storage_tenths = 0;  // stored electricity, quantized to 0.1 units
  // Unexecuted tasks whose window contains `hour`, sorted by id.
  std::vector<int> pending_p1;
  std::vector<int> pending_p2;

  double storage() const { return storage_tenths / 10.0; }
  friend bool operator==(const MicrogridState&, const MicrogridState&) = default;
};

struct MicrogridStep {
  MicrogridState next;
  RewardPair rewards;
  bool blackout = false;
};

MicrogridState microgrid_start(const MicrogridConfig& config);

// One hour of the scenario. `run_p1`/`run_p2` are the task ids each player
// attempts; each must be pending and active. Throws PreconditionError otherwise.
MicrogridStep microgrid_step(const MicrogridConfig& config, const MicrogridState& state,
                             const std::vector<int>& run_p1, const std::vector<int>& run_p2);

class MicrogridGame final : public Rsg {
 public:
  explicit MicrogridGame(MicrogridConfig config);

  const MicrogridConfig& config() const { return config_; }

  std::string name() const override { return "microgrid"; }
  StateId start_state() const override;
  bool is_goal(const StateId& state) const override;
  // Every subset of the seat's pending tasks; bit k of the action index selects
  // the k-th pending task, so action 0 is "run nothing".
  std::vector<std::string> actions(const StateId& state, Seat seat) const override;
  std::vector<Transition> transition(const StateId& state, JointAction action) const override;
  RewardPair rewards(const StateId& state, JointAction action) const override;
  std::string describe(const StateId& state) const override { return state.bytes(); }

  static StateId encode(const MicrogridState& state);
  static MicrogridState decode(const StateId& id);
  // Task ids selected by an action index in `state` for `seat`.
  static std::vector<int> tasks_of(const MicrogridState& state, Seat seat, int action);

 private:
  MicrogridStep step(const StateId& state, JointAction action) const;

  MicrogridConfig config_;
};

}  // namespace gabe::games
