#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gearquest/combat.hpp"
#include "gearquest/world.hpp"

namespace gearquest {

inline constexpr int kTaskSchemaVersion = 1;

enum class TaskKind : std::uint8_t { kCombat, kCraft };
std::string_view to_string(TaskKind kind);

struct TaskMechanics {
  bool leveling = false;
  int noise_count = 0;
  bool operator==(const TaskMechanics&) const = default;
};

struct Task {
  int schema_version = kTaskSchemaVersion;
  std::string id;
  TaskKind kind = TaskKind::kCombat;
  std::string target;  // monster id (combat) or item id (craft)
  std::vector<std::string> equipped;
  std::vector<std::string> missing;
  std::vector<std::string> auxiliary;  // start in the inventory
  // Missing-item sets of every minimal winning set that contains `equipped`;
  // `missing` is one of them.
  std::vector<std::vector<std::string>> alternatives;
  std::vector<std::string> noise;  // never shown as such in prompts
  CharacterState character;
  WorldDef environment;
  int difficulty = 0;
  int bracket = 0;
  TaskMechanics mechanics;
  std::uint64_t seed = 0;
  std::string world_hash;
  std::string template_version;
  std::string template_hash;
  std::vector<std::string> warnings;

  bool operator==(const Task&) const = default;
};

class TaskError : public std::runtime_error {
 public:
  // reason: infeasible_target, auxiliary_infeasible, uncraftable, target_in_closure, invalid_task, ...
  TaskError(std::string reason, const std::string& message)
      : std::runtime_error(message), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

nlohmann::json character_to_json(const CharacterState& c);
CharacterState character_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json task_to_json(const Task& task);
// Throws TaskError (reason invalid_task) on schema problems.
Task task_from_json(const nlohmann::json& j);

// Pretty-printed JSON with sorted keys and a trailing newline.
std::string serialize_task(const Task& task);
Task deserialize_task(std::string_view text);
Task load_task(const std::string& path);

// Nine contiguous difficulty ranges; brackets are numbered from 1.
struct BracketTable {
  std::vector<std::pair<int, int>> ranges;  // inclusive [lo, hi]

  // 0 when d falls outside every range.
  int bracket_of(int difficulty) const;
  bool operator==(const BracketTable&) const = default;
};

inline constexpr int kBracketCount = 9;

const BracketTable& default_brackets();
// Throws TaskError when ranges are not kBracketCount contiguous, increasing intervals.
BracketTable brackets_from_json(const nlohmann::json& j);
nlohmann::json brackets_to_json(const BracketTable& table);

}  // namespace gearquest
