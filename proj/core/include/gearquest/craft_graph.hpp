#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gearquest/world.hpp"

namespace gearquest {

class CraftError : public std::runtime_error {
 public:
  CraftError(std::string item_id, const std::string& message)
      : std::runtime_error(message), item_id_(std::move(item_id)) {}
  const std::string& item_id() const { return item_id_; }

 private:
  std::string item_id_;
};

struct GatherStep {
  std::string node_id;
  std::string item_id;
  int qty = 0;
  bool operator==(const GatherStep&) const = default;
};

struct FightStep {
  std::string monster_id;
  int kills = 0;
  bool operator==(const FightStep&) const = default;
};

struct CraftStep {
  std::string item_id;
  int runs = 0;  // craft(item_id, runs) produces runs * output_qty units
  bool operator==(const CraftStep&) const = default;
};

enum class DropModel : std::uint8_t { kDeterministic, kStochastic };

struct DependencyClosure {
  // Total units of every item the closure produces or acquires, roots included.
  std::map<std::string, int, std::less<>> required;
  std::vector<GatherStep> gather_steps;  // by node id
  std::vector<FightStep> fight_steps;    // by monster id
  std::vector<CraftStep> craft_steps;    // ingredients before the items that use them
  std::map<std::string, int, std::less<>> required_levels;  // profession -> level
  std::vector<Coord> locations_touched;                     // sorted, unique

  // Atomic actions excluding movement: one per gather, one per kill, one per craft step.
  int action_count() const;
  bool operator==(const DependencyClosure&) const = default;
};

// Acquisition route chosen for an item: a resource node if any (lowest
// skill level, then id), else a monster drop (lowest monster level, then id),
// else its recipe. Throws CraftError when there is none.
AcquisitionRoute preferred_route(const WorldDef& world, std::string_view item_id);

// Planned kills to collect qty units of a drop.
int planned_kills(int qty, double rate, DropModel model);

// Merges shared ingredients across every root. Throws CraftError when an
// item in the closure has no acquisition route, std::invalid_argument for qty < 1.
DependencyClosure dependency_closure(const WorldDef& world, std::span<const Ingredient> roots,
                                     DropModel model = DropModel::kDeterministic);
DependencyClosure dependency_closure(const WorldDef& world, std::string_view item_id, int qty,
                                     DropModel model = DropModel::kDeterministic);

// Atomic action count of dependency_closure(item, 1).
int cost(const WorldDef& world, std::string_view item_id);

// |missing| + sum of cost over missing items (each costed on its own).
int total_difficulty(const WorldDef& world, std::span<const std::string> missing);

// Experience needed to advance from `level` to `level + 1`.
constexpr int xp_threshold(int level) { return 100 * level; }
// Experience granted per crafting run of a recipe.
constexpr int craft_xp(int recipe_skill_level) { return 5 * recipe_skill_level; }

// Applies xp with carry-over; stops at max_level.
void add_skill_xp(int& level, int& xp, int gained, int max_level);

struct LevelingStep {
  std::string node_id;
  int gathers = 0;
  bool operator==(const LevelingStep&) const = default;
};

// Fewest gathers that raise `profession` from from_level (0 xp) to to_level,
// taking the highest-xp node the current level allows at every step. Throws
// CraftError when some level grants no xp, std::invalid_argument when from > to.
std::vector<LevelingStep> leveling_schedule(const WorldDef& world, std::string_view profession,
                                            int from_level, int to_level);

}  // namespace gearquest
