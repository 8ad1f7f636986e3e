#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gearquest/craft_graph.hpp"
#include "gearquest/gear_search.hpp"
#include "gearquest/plan_dsl.hpp"
#include "gearquest/task.hpp"

namespace gearquest {

struct TaskOptions {
  int missing_count = 1;
  bool leveling = false;
  int noise_count = 0;
  std::uint64_t seed = 0;
};

// Throws TaskError: infeasible_target (no winning gear, or a bare-handed win),
// uncraftable, target_in_closure, auxiliary_infeasible, leveling_unreachable,
// canonical_failed. A short noise quota only adds a warning.
Task generate_combat_task(const WorldDef& world, std::string_view monster_id, const TaskOptions& options,
                          const BracketTable& brackets = default_brackets());

// Craft-only task: the goal is holding the item. Throws TaskError uncraftable,
// or craft_requires_combat when its closure involves a fight.
Task generate_craft_task(const WorldDef& world, std::string_view item_id, const TaskOptions& options,
                         const BracketTable& brackets = default_brackets());

// Reference plan built from the task alone: leveling gathers, auxiliary
// equips, gathers, fights, crafts, then equipping the missing items and
// fighting the target.
PlanProgram canonical_solution(const Task& task);

// Merged closure of the task's missing items (craft tasks: the target).
DependencyClosure task_closure(const Task& task);

struct SuiteVariant {
  bool leveling = false;
  int noise_count = 0;
  bool operator==(const SuiteVariant&) const = default;
};

struct SuiteSpec {
  int per_bracket_count = 20;
  std::uint64_t seed = 0;
  BracketTable brackets = default_brackets();
  std::vector<SuiteVariant> variants{{false, 0}, {true, 0}, {false, 2}, {true, 2}};
  double craft_share = 0.2;  // upper bound on craft-only tasks per bracket
  int seeds_per_split = 10;  // partition seeds tried per (monster, missing_count)
};

SuiteSpec suite_spec_from_json(const nlohmann::json& j);
nlohmann::json suite_spec_to_json(const SuiteSpec& spec);

struct BracketReport {
  int bracket = 0;
  int requested = 0;
  int produced = 0;
  int candidates = 0;
  std::map<std::string, int> rejections;  // TaskError reason -> count
};

struct Suite {
  std::vector<Task> tasks;  // ordered by (bracket, id)
  std::vector<BracketReport> brackets;
  bool complete() const;
};

Suite generate_suite(const WorldDef& world, const SuiteSpec& spec);

}  // namespace gearquest
