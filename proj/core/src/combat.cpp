#include "gearquest/combat.hpp"

#include <algorithm>

namespace gearquest {

StatVector base_stats(int level) {
  StatVector s;
  s.hp = 100 + 10 * level;
  return s;
}

namespace {

constexpr std::array<std::string_view, kGearPositionCount> kPositionNames{
    "weapon", "shield", "helmet", "body_armor", "leg_armor", "boots", "amulet", "ring1", "ring2"};

constexpr std::array<GearPosition, 1> kWeaponPos{GearPosition::kWeapon};
constexpr std::array<GearPosition, 1> kShieldPos{GearPosition::kShield};
constexpr std::array<GearPosition, 1> kHelmetPos{GearPosition::kHelmet};
constexpr std::array<GearPosition, 1> kBodyPos{GearPosition::kBodyArmor};
constexpr std::array<GearPosition, 1> kLegPos{GearPosition::kLegArmor};
constexpr std::array<GearPosition, 1> kBootsPos{GearPosition::kBoots};
constexpr std::array<GearPosition, 1> kAmuletPos{GearPosition::kAmulet};
constexpr std::array<GearPosition, 2> kRingPos{GearPosition::kRing1, GearPosition::kRing2};

}  // namespace

std::string_view to_string(GearPosition pos) { return kPositionNames[static_cast<std::size_t>(pos)]; }

std::optional<GearPosition> gear_position_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kPositionNames.size(); ++i) {
    if (kPositionNames[i] == name) return static_cast<GearPosition>(i);
  }
  return std::nullopt;
}

std::span<const GearPosition> positions_for(ItemSlot slot) {
  switch (slot) {
    case ItemSlot::kWeapon:
      return kWeaponPos;
    case ItemSlot::kShield:
      return kShieldPos;
    case ItemSlot::kHelmet:
      return kHelmetPos;
    case ItemSlot::kBodyArmor:
      return kBodyPos;
    case ItemSlot::kLegArmor:
      return kLegPos;
    case ItemSlot::kBoots:
      return kBootsPos;
    case ItemSlot::kAmulet:
      return kAmuletPos;
    case ItemSlot::kRing:
      return kRingPos;
    case ItemSlot::kNone:
      break;
  }
  return {};
}

GearSet GearSet::from_items(const WorldDef& world, std::span<const std::string> item_ids) {
  GearSet gear;
  for (const auto& id : item_ids) {
    const Item* item = world.find_item(id);
    if (item == nullptr) throw GearError("unknown item '" + id + "'");
    if (!item->equippable()) throw GearError("item '" + id + "' is not equippable");
    if (gear.contains(id)) throw GearError("item '" + id + "' listed twice");
    const auto pos = gear.free_position(item->slot);
    if (!pos) throw GearError("no free " + std::string(to_string(item->slot)) + " position for '" + id + "'");
    gear.put(*pos, id);
  }
  return gear;
}

GearSet GearSet::from_items(std::span<const Item* const> items) {
  GearSet gear;
  for (const Item* item : items) {
    if (!item->equippable()) throw GearError("item '" + item->id + "' is not equippable");
    if (gear.contains(item->id)) throw GearError("item '" + item->id + "' listed twice");
    const auto pos = gear.free_position(item->slot);
    if (!pos) throw GearError("no free " + std::string(to_string(item->slot)) + " position for '" + item->id + "'");
    gear.put(*pos, item->id);
  }
  return gear;
}

std::optional<GearPosition> GearSet::free_position(ItemSlot slot) const {
  for (GearPosition pos : positions_for(slot)) {
    if (!at(pos)) return pos;
  }
  return std::nullopt;
}

std::optional<std::string> GearSet::take(GearPosition pos) {
  auto& slot = slots_[static_cast<std::size_t>(pos)];
  std::optional<std::string> out = std::move(slot);
  slot.reset();
  return out;
}

std::vector<std::string> GearSet::item_ids() const {
  std::vector<std::string> ids;
  for (const auto& s : slots_) {
    if (s) ids.push_back(*s);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::size_t GearSet::size() const {
  return static_cast<std::size_t>(std::count_if(slots_.begin(), slots_.end(), [](const auto& s) { return s.has_value(); }));
}

bool GearSet::contains(std::string_view item_id) const { return position_of(item_id).has_value(); }

std::optional<GearPosition> GearSet::position_of(std::string_view item_id) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i] && *slots_[i] == item_id) return static_cast<GearPosition>(i);
  }
  return std::nullopt;
}

bool gear_less(const GearSet& a, const GearSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.item_ids() < b.item_ids();
}

int CharacterState::skill_level(std::string_view skill) const {
  auto it = skills.find(skill);
  return it == skills.end() ? 1 : it->second.level;
}

int CharacterState::count(std::string_view item_id) const {
  auto it = inventory.find(item_id);
  return it == inventory.end() ? 0 : it->second;
}

StatVector effective_stats(const WorldDef& world, const CharacterState& character, const GearSet& gear) {
  StatVector total = character.base_stats;
  for (std::size_t i = 0; i < kGearPositionCount; ++i) {
    const auto pos = static_cast<GearPosition>(i);
    const auto& id = gear.at(pos);
    if (!id) continue;
    const Item* item = world.find_item(*id);
    if (item == nullptr) throw GearError("unknown item '" + *id + "'");
    const auto allowed = positions_for(item->slot);
    if (std::find(allowed.begin(), allowed.end(), pos) == allowed.end()) {
      throw GearError("item '" + *id + "' cannot be worn as " + std::string(to_string(pos)));
    }
    if (item->level > character.level) {
      throw GearError("item '" + *id + "' requires level " + std::to_string(item->level));
    }
    total += item->bonus();
  }
  return total;
}

StatVector loadout_stats(int level, std::span<const Item> items) {
  StatVector total = base_stats(level);
  for (const auto& item : items) total += item.bonus();
  return total;
}

namespace {

int element_damage(const StatVector& attacker, const StatVector& defender, std::size_t e) {
  const long long amp = std::max(attacker.dmg_amp[e], -100);
  const long long resist = std::min(defender.resist[e], 100);
  const long long scaled = static_cast<long long>(attacker.attack[e]) * (100 + amp) * (100 - resist);
  // Both factors are non-negative, so a non-negative product divides down as floor.
  return scaled <= 0 ? 0 : static_cast<int>(scaled / 10000);
}

template <typename OnStrike>
CombatOutcome run_combat(const StatVector& player, const StatVector& monster, OnStrike&& on_strike) {
  if (player.hp <= 0 || monster.hp <= 0) {
    throw std::invalid_argument("simulate requires both combatants to start with hp > 0");
  }
  CombatOutcome out;
  int player_hp = player.hp;
  int monster_hp = monster.hp;
  ElementArray player_hits{};
  ElementArray monster_hits{};
  for (std::size_t e = 0; e < kElementCount; ++e) {
    player_hits[e] = element_damage(player, monster, e);
    monster_hits[e] = element_damage(monster, player, e);
  }
  int player_dmg = 0;
  int monster_dmg = 0;
  for (std::size_t e = 0; e < kElementCount; ++e) {
    player_dmg += player_hits[e];
    monster_dmg += monster_hits[e];
  }

  for (int turn = 1; turn <= kTurnCap; ++turn) {
    const bool player_turn = (turn % 2) == 1;
    if (player_turn) {
      monster_hp = std::max(0, monster_hp - player_dmg);
      on_strike(out, TurnRecord{Side::kPlayer, player_hits, monster_hp});
    } else {
      player_hp = std::max(0, player_hp - monster_dmg);
      on_strike(out, TurnRecord{Side::kMonster, monster_hits, player_hp});
    }
    out.turns = turn;
    if (monster_hp == 0 || player_hp == 0) {
      out.winner = monster_hp == 0 ? Side::kPlayer : Side::kMonster;
      out.player_hp = player_hp;
      out.monster_hp = monster_hp;
      return out;
    }
  }
  out.winner = Side::kMonster;
  out.capped = true;
  out.player_hp = player_hp;
  out.monster_hp = monster_hp;
  return out;
}

}  // namespace

int damage_per_turn(const StatVector& attacker, const StatVector& defender) {
  int total = 0;
  for (std::size_t e = 0; e < kElementCount; ++e) total += element_damage(attacker, defender, e);
  return total;
}

std::string_view to_string(Side side) { return side == Side::kPlayer ? "player" : "monster"; }

CombatOutcome simulate(const StatVector& player, const StatVector& monster) {
  return run_combat(player, monster, [](CombatOutcome& out, TurnRecord&& rec) { out.turn_log.push_back(std::move(rec)); });
}

bool player_wins(const StatVector& player, const StatVector& monster) {
  return run_combat(player, monster, [](CombatOutcome&, TurnRecord&&) {}).player_won();
}

}  // namespace gearquest
