#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gearquest/combat.hpp"
#include "gearquest/plan_dsl.hpp"
#include "gearquest/task.hpp"

namespace gearquest {

enum class ExecMode : std::uint8_t { kDeterministic, kStochastic };
std::string_view to_string(ExecMode mode);
std::optional<ExecMode> exec_mode_from_string(std::string_view name);

struct ExecOptions {
  ExecMode mode = ExecMode::kDeterministic;
  std::uint64_t seed = 0;
};

enum class FailReason : std::uint8_t {
  kWrongLocation,
  kMissingIngredients,
  kInsufficientLevel,
  kUnknownItem,
  kSlotConflict,
  kCombatLoss,
  kNotANode,
  kNotAWorkshop,
  kNoMonster,
};
std::string_view to_string(FailReason reason);
std::optional<FailReason> fail_reason_from_string(std::string_view name);

struct SimState {
  CharacterState character;
  std::map<std::string, int, std::less<>> defeated;
  bool operator==(const SimState&) const = default;
};

struct CombatSummary {
  std::string monster_id;
  bool player_won = false;
  int turns = 0;
  bool capped = false;
  int player_hp = 0;
  int monster_hp = 0;
  bool operator==(const CombatSummary&) const = default;
};

// Everything an event changed; applying it to the previous state yields the next one.
struct StateDelta {
  std::map<std::string, int, std::less<>> inventory;  // signed change per item
  std::optional<Coord> position;                      // new position
  std::map<GearPosition, std::optional<std::string>> equipment;  // new occupant
  std::map<std::string, SkillProgress, std::less<>> skills;     // new progress
  std::optional<int> damage_taken;                                // new value
  std::map<std::string, int, std::less<>> defeated;              // kills added

  bool empty() const;
  bool operator==(const StateDelta&) const = default;
};

struct Event {
  std::size_t index = 0;
  Action action;
  std::optional<FailReason> failure;  // nullopt when the action succeeded
  std::string detail;
  StateDelta delta;
  std::optional<CombatSummary> combat;

  bool ok() const { return !failure.has_value(); }
  bool operator==(const Event&) const = default;
};

struct ExecSummary {
  bool success = false;
  std::size_t events = 0;
  std::size_t failed_events = 0;
  std::string final_state_hash;
  bool operator==(const ExecSummary&) const = default;
};

struct ExecutionLog {
  std::string task_id;
  ExecOptions options;
  std::vector<Event> events;
  ExecSummary summary;
};

// Character at spawn with the task's equipment, skills, and inventory.
SimState init_state(const Task& task);
// Same, after checking the task was generated from this world; throws TaskError (reason world_mismatch).
SimState init_state(const WorldDef& world, const Task& task);

std::string state_hash(const SimState& state);
nlohmann::json state_to_json(const SimState& state);

// True when the task's goal holds in `state`.
bool goal_reached(const Task& task, const SimState& state);

void apply_delta(SimState& state, const StateDelta& delta);

// Applies actions one at a time against the task environment. Failed actions
// leave the state untouched.
class Simulator {
 public:
  Simulator(const Task& task, ExecOptions options);

  Event step(const Action& action);
  const SimState& state() const { return state_; }
  std::size_t steps_taken() const { return next_index_; }

 private:
  Event fail(Event e, FailReason reason, std::string detail) const;
  void do_move(const Action& a, Event& e);
  void do_gather(Event& e);
  void do_fight(Event& e);
  void do_craft(const Action& a, Event& e);
  void do_equip(const Action& a, Event& e);
  void do_unequip(const Action& a, Event& e);
  void do_recycle(const Action& a, Event& e);
  void do_rest(Event& e);
  int max_level_of(std::string_view skill) const;

  const Task& task_;
  const WorldDef& env_;
  ExecOptions options_;
  SimState state_;
  std::size_t next_index_ = 0;
};

ExecutionLog run(const Task& task, const std::vector<Action>& actions, ExecOptions options = {});
// Flattens first; throws PlanTooLongError from flatten.
ExecutionLog run(const Task& task, const PlanProgram& program, ExecOptions options = {});

// Re-applies every event delta from init_state.
SimState replay(const Task& task, const ExecutionLog& log);

nlohmann::json event_to_json(const Event& event);
Event event_from_json(const nlohmann::json& j);
// One compact JSON object per line; the summary is the last line.
std::string log_to_jsonl(const ExecutionLog& log);
ExecutionLog log_from_jsonl(std::string_view text);

}  // namespace gearquest
