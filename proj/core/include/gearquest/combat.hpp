#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gearquest/stats.hpp"
#include "gearquest/world.hpp"

namespace gearquest {

// Combat ends in a player loss once this many strikes have been exchanged.
inline constexpr int kTurnCap = 50;

// Level-scaled character stats before any gear: hp = 100 + 10 * level, nothing else.
StatVector base_stats(int level);

// The nine places an item can be worn. Rings take ring1 before ring2.
enum class GearPosition : std::uint8_t {
  kWeapon,
  kShield,
  kHelmet,
  kBodyArmor,
  kLegArmor,
  kBoots,
  kAmulet,
  kRing1,
  kRing2,
};
inline constexpr std::size_t kGearPositionCount = 9;

std::string_view to_string(GearPosition pos);
std::optional<GearPosition> gear_position_from_string(std::string_view name);
std::span<const GearPosition> positions_for(ItemSlot slot);

class GearError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GearSet {
 public:
  GearSet() = default;

  // Places every item, rings filling ring1 then ring2. Throws GearError on
  // unknown items, materials, duplicates, or more items than positions.
  static GearSet from_items(const WorldDef& world, std::span<const std::string> item_ids);
  static GearSet from_items(std::span<const Item* const> items);

  const std::optional<std::string>& at(GearPosition pos) const {
    return slots_[static_cast<std::size_t>(pos)];
  }
  // First free position for the item's slot kind, if any.
  std::optional<GearPosition> free_position(ItemSlot slot) const;
  void put(GearPosition pos, std::string item_id) { slots_[static_cast<std::size_t>(pos)] = std::move(item_id); }
  std::optional<std::string> take(GearPosition pos);

  std::vector<std::string> item_ids() const;  // sorted
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  bool contains(std::string_view item_id) const;
  std::optional<GearPosition> position_of(std::string_view item_id) const;

  bool operator==(const GearSet&) const = default;

 private:
  std::array<std::optional<std::string>, kGearPositionCount> slots_{};
};

// Orders gear sets by size, then lexicographically by sorted item ids.
bool gear_less(const GearSet& a, const GearSet& b);

struct SkillProgress {
  int level = 1;
  int xp = 0;  // progress towards the next level
  bool operator==(const SkillProgress&) const = default;
};

struct CharacterState {
  int level = 1;
  StatVector base_stats;
  // Current hp is max hp minus this; rest() clears it.
  int damage_taken = 0;
  std::map<std::string, SkillProgress, std::less<>> skills;
  std::map<std::string, int, std::less<>> inventory;
  GearSet equipment;
  Coord position;

  int skill_level(std::string_view skill) const;
  int count(std::string_view item_id) const;
  bool operator==(const CharacterState&) const = default;
};

// base_stats plus the componentwise sum of every equipped item's stats.
// Throws GearError if an item is unknown, worn in the wrong slot kind, or above the character's level.
StatVector effective_stats(const WorldDef& world, const CharacterState& character, const GearSet& gear);

// Stats of a level-`level` character wearing the given items; no slot checks.
StatVector loadout_stats(int level, std::span<const Item> items);

// Per element: floor(attack * (1 + amp/100) * (1 - resist/100)), each term
// clamped at 0, summed. Amplification is floored at -100% and resistance
// capped at 100% so damage is monotone in every channel.
int damage_per_turn(const StatVector& attacker, const StatVector& defender);

enum class Side : std::uint8_t { kPlayer, kMonster };
std::string_view to_string(Side side);

struct TurnRecord {
  Side actor = Side::kPlayer;
  ElementArray damage{};
  int defender_hp = 0;
  bool operator==(const TurnRecord&) const = default;
};

struct CombatOutcome {
  Side winner = Side::kMonster;
  int turns = 0;
  std::vector<TurnRecord> turn_log;
  bool capped = false;
  int player_hp = 0;   // remaining
  int monster_hp = 0;  // remaining

  bool player_won() const { return winner == Side::kPlayer; }
  bool operator==(const CombatOutcome&) const = default;
};

// Alternating strikes, player first; the side whose hp reaches 0 loses.
// Reaching kTurnCap strikes without a kill is a player loss (capped = true).
// Throws std::invalid_argument unless both sides start with hp > 0.
CombatOutcome simulate(const StatVector& player, const StatVector& monster);

// Same result as simulate(...).player_won() without building the turn log.
bool player_wins(const StatVector& player, const StatVector& monster);

}  // namespace gearquest
