#pragma once

#include <compare>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gearquest/stats.hpp"

namespace gearquest {

inline constexpr int kWorldSchemaVersion = 1;

// Kind of equipment an item is worn as. Rings fit two positions.
enum class ItemSlot : std::uint8_t {
  kWeapon,
  kShield,
  kHelmet,
  kBodyArmor,
  kLegArmor,
  kBoots,
  kAmulet,
  kRing,
  kNone,
};

inline constexpr std::array<ItemSlot, 8> kEquipmentSlots{
    ItemSlot::kWeapon,   ItemSlot::kShield, ItemSlot::kHelmet, ItemSlot::kBodyArmor,
    ItemSlot::kLegArmor, ItemSlot::kBoots,  ItemSlot::kAmulet, ItemSlot::kRing};

std::string_view to_string(ItemSlot slot);
std::optional<ItemSlot> item_slot_from_string(std::string_view name);
constexpr int slot_capacity(ItemSlot slot) {
  return slot == ItemSlot::kRing ? 2 : (slot == ItemSlot::kNone ? 0 : 1);
}

struct Coord {
  int x = 0;
  int y = 0;
  auto operator<=>(const Coord&) const = default;
};

struct GridBounds {
  int width = 0;
  int height = 0;
  bool contains(Coord c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  bool operator==(const GridBounds&) const = default;
};

struct Ingredient {
  std::string item_id;
  int qty = 1;
  bool operator==(const Ingredient&) const = default;
};

struct Recipe {
  std::string output_id;
  int output_qty = 1;
  std::string skill;
  int skill_level = 1;
  std::vector<Ingredient> ingredients;
  std::string workshop;
  bool operator==(const Recipe&) const = default;
};

struct Drop {
  std::string item_id;
  double rate = 1.0;
  bool operator==(const Drop&) const = default;
};

struct Monster {
  std::string id;
  std::string name;
  StatVector stats;
  // Minimal character level required to defeat the monster with level-feasible gear.
  int difficulty_level = 1;
  std::vector<Drop> drops;
  std::string location_id;
  bool operator==(const Monster&) const = default;
};

struct ResourceNode {
  std::string id;
  std::string name;
  std::string resource_item_id;
  std::string skill;
  int skill_level = 1;
  int xp_reward = 1;
  std::string location_id;
  bool operator==(const ResourceNode&) const = default;
};

enum class ElementKind : std::uint8_t { kResourceNode, kWorkshop, kMonster };
std::string_view to_string(ElementKind kind);

struct LocationElement {
  ElementKind kind = ElementKind::kResourceNode;
  std::string id;
  bool operator==(const LocationElement&) const = default;
};

struct Location {
  std::string id;
  std::string name;
  Coord coords;
  std::vector<LocationElement> elements;
  bool operator==(const Location&) const = default;
};

enum class SkillKind : std::uint8_t { kGathering, kCrafting };

struct Skill {
  std::string id;
  SkillKind kind = SkillKind::kGathering;
  int max_level = 50;
  bool operator==(const Skill&) const = default;
};

struct AcquisitionRoute {
  enum class Kind : std::uint8_t { kGather, kDrop, kCraft };
  Kind kind = Kind::kGather;
  std::string source_id;  // node id, monster id, or the item's own id for crafts
  bool operator==(const AcquisitionRoute&) const = default;
};

struct Item {
  std::string id;
  std::string name;
  ItemSlot slot = ItemSlot::kNone;
  int level = 1;
  // Required for equippable items; materials carry none.
  std::optional<StatVector> stats;
  // Derived on indexing from nodes, monster drops, and recipes.
  std::vector<AcquisitionRoute> sources;

  bool equippable() const { return slot != ItemSlot::kNone; }
  StatVector bonus() const { return stats.value_or(StatVector{}); }
  bool operator==(const Item&) const = default;
};

template <typename T>
using IdMap = std::map<std::string, T, std::less<>>;

// Registry of every world entity, indexed by id. Immutable once loaded.
struct WorldDef {
  GridBounds grid;
  Coord spawn;
  IdMap<Item> items;
  IdMap<Recipe> recipes;  // keyed by output item id
  IdMap<Monster> monsters;
  IdMap<ResourceNode> resource_nodes;
  IdMap<Location> locations;
  IdMap<Skill> skills;

  const Item* find_item(std::string_view id) const;
  const Recipe* recipe_for(std::string_view item_id) const;
  const Monster* find_monster(std::string_view id) const;
  const ResourceNode* find_node(std::string_view id) const;
  const Location* find_location(std::string_view id) const;
  const Location* location_at(Coord c) const;
  std::optional<Coord> coords_of(std::string_view location_id) const;
  // Locations hosting the named workshop, ordered by coordinates.
  std::vector<Coord> workshop_coords(std::string_view workshop) const;

  // Recomputes Item::sources from nodes, drops, and recipes.
  void rebuild_index();

  bool operator==(const WorldDef&) const = default;
};

class WorldError : public std::runtime_error {
 public:
  enum class Kind { kIo, kSchema, kDanglingReference, kCraftingCycle, kInvalid };

  WorldError(Kind kind, std::string subject, const std::string& message)
      : std::runtime_error(message), kind_(kind), subject_(std::move(subject)) {}

  Kind kind() const { return kind_; }
  const std::string& subject() const { return subject_; }

 private:
  Kind kind_;
  std::string subject_;
};

struct Violation {
  std::string kind;     // dangling_reference, crafting_cycle, missing_field, out_of_range, ...
  std::string subject;  // offending entity, e.g. "resource_node:copper_rocks"
  std::string message;
  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::map<std::string, int> counts;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Strict schema parse of one JSON document (any subset of entity sections).
// merge_world_json raises SchemaError on unknown fields and wrong types;
// world_from_json reports them as WorldError::Kind::kSchema. Both name the source and field.
void merge_world_json(WorldDef& world, const nlohmann::json& doc, std::string_view source);
WorldDef world_from_json(const nlohmann::json& doc, std::string_view source);
nlohmann::json world_to_json(const WorldDef& world);

// Schema-checked parse without semantic validation.
WorldDef parse_world_files(std::span<const std::filesystem::path> paths);

// Parses and validates; throws WorldError on the first violation.
WorldDef load_world(std::span<const std::filesystem::path> paths);
WorldDef load_world_dir(const std::filesystem::path& dir);
std::vector<std::filesystem::path> world_bundle_files(const std::filesystem::path& dir);

ValidationReport validate_world(const WorldDef& world);

// Items participating in a crafting cycle, or empty when the graph is acyclic.
std::vector<std::string> find_crafting_cycle(const WorldDef& world);

// Equippable items with level <= level, ordered by id.
std::vector<Item> items_at_or_below_level(const WorldDef& world, int level);

// Stable content hash of the canonical JSON form.
std::string world_hash(const WorldDef& world);

// JSON helpers shared by every serializer in the project.
nlohmann::json stats_to_json(const StatVector& stats);
StatVector stats_from_json(const nlohmann::json& j, const std::string& where);

}  // namespace gearquest
