#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gearquest/combat.hpp"
#include "gearquest/world.hpp"

namespace gearquest {

// A gear set is minimal when it has the fewest items of any winning set:
// it wins, and every set obtained by removing one item loses.
//
// Candidates come from items_at_or_below_level(world, monster level) and the
// character is fought at the monster's level. Results are ordered by
// gear_less; an empty list means no winning set exists.
std::vector<GearSet> minimal_winning_gear(const WorldDef& world, const Monster& monster);
std::vector<GearSet> minimal_winning_gear(const Monster& monster, std::span<const Item> pool);

// Ground truth by enumerating every slot-feasible subset of the pool.
// Throws std::invalid_argument when the pool has more than kExhaustivePoolLimit items.
inline constexpr std::size_t kExhaustivePoolLimit = 20;
std::vector<GearSet> exhaustive_minimal_gear(const Monster& monster, std::span<const Item> pool);

struct PartitionPolicy {
  int missing_count = 1;
  std::uint64_t seed = 0;
};

struct GearPartition {
  std::vector<std::string> equipped;  // sorted
  std::vector<std::string> missing;   // sorted
};

// Seeded split of a gear set into pre-equipped and to-be-acquired items.
// Throws std::invalid_argument when missing_count exceeds the set size or
// is zero for a non-empty set.
GearPartition partition_gear(const GearSet& gear, const PartitionPolicy& policy);

struct AuxiliaryQuery {
  const Monster* target = nullptr;
  int level = 1;
  std::vector<std::string> equipped;
  std::vector<std::string> solution;  // the chosen minimal set; never offered as auxiliary
  std::vector<const Monster*> scenario_monsters;  // non-target monsters the plan must fight
  int max_size = 3;
};

// Smallest set (then first in level/id order) of extra items such that
// equipped + auxiliary beats every scenario monster but still loses to the
// target. std::nullopt when no set of at most max_size items separates them.
std::optional<std::vector<std::string>> auxiliary_items(const WorldDef& world, const AuxiliaryQuery& query);

struct NoiseQuery {
  int level = 1;
  // Items that may not become noise (every member of every minimal set).
  std::set<std::string, std::less<>> excluded;
  // Every item in the dependency closure of the missing items.
  std::set<std::string, std::less<>> closure_items;
  // True when the task environment offers a way to obtain the item.
  std::function<bool(const std::string&)> obtainable;
};

// Up to k craftable gear items (highest level first, then id) that have at
// least one ingredient outside the missing items' closure which the task
// environment provides no way to obtain.
std::vector<std::string> noise_items(const WorldDef& world, const NoiseQuery& query, int k);

}  // namespace gearquest
