#include "gearquest/world.hpp"

#include <algorithm>
#include <set>

#include "gearquest/hash.hpp"

namespace gearquest {

std::string_view to_string(ItemSlot slot) {
  switch (slot) {
    case ItemSlot::kWeapon:
      return "weapon";
    case ItemSlot::kShield:
      return "shield";
    case ItemSlot::kHelmet:
      return "helmet";
    case ItemSlot::kBodyArmor:
      return "body_armor";
    case ItemSlot::kLegArmor:
      return "leg_armor";
    case ItemSlot::kBoots:
      return "boots";
    case ItemSlot::kAmulet:
      return "amulet";
    case ItemSlot::kRing:
      return "ring";
    case ItemSlot::kNone:
      return "none";
  }
  return "none";
}

std::optional<ItemSlot> item_slot_from_string(std::string_view name) {
  for (ItemSlot s : kEquipmentSlots) {
    if (to_string(s) == name) return s;
  }
  if (name == "none") return ItemSlot::kNone;
  return std::nullopt;
}

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::kResourceNode:
      return "resource_node";
    case ElementKind::kWorkshop:
      return "workshop";
    case ElementKind::kMonster:
      return "monster";
  }
  return "resource_node";
}

namespace {

template <typename T>
const T* find_in(const IdMap<T>& map, std::string_view id) {
  auto it = map.find(id);
  return it == map.end() ? nullptr : &it->second;
}

}  // namespace

const Item* WorldDef::find_item(std::string_view id) const { return find_in(items, id); }
const Recipe* WorldDef::recipe_for(std::string_view item_id) const { return find_in(recipes, item_id); }
const Monster* WorldDef::find_monster(std::string_view id) const { return find_in(monsters, id); }
const ResourceNode* WorldDef::find_node(std::string_view id) const { return find_in(resource_nodes, id); }
const Location* WorldDef::find_location(std::string_view id) const { return find_in(locations, id); }

const Location* WorldDef::location_at(Coord c) const {
  for (const auto& [id, loc] : locations) {
    if (loc.coords == c) return &loc;
  }
  return nullptr;
}

std::optional<Coord> WorldDef::coords_of(std::string_view location_id) const {
  const Location* loc = find_location(location_id);
  if (loc == nullptr) return std::nullopt;
  return loc->coords;
}

std::vector<Coord> WorldDef::workshop_coords(std::string_view workshop) const {
  std::vector<Coord> out;
  for (const auto& [id, loc] : locations) {
    for (const auto& e : loc.elements) {
      if (e.kind == ElementKind::kWorkshop && e.id == workshop) {
        out.push_back(loc.coords);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void WorldDef::rebuild_index() {
  for (auto& [id, item] : items) item.sources.clear();
  for (const auto& [id, node] : resource_nodes) {
    auto it = items.find(node.resource_item_id);
    if (it != items.end()) it->second.sources.push_back({AcquisitionRoute::Kind::kGather, node.id});
  }
  for (const auto& [id, monster] : monsters) {
    for (const auto& drop : monster.drops) {
      auto it = items.find(drop.item_id);
      if (it != items.end()) it->second.sources.push_back({AcquisitionRoute::Kind::kDrop, monster.id});
    }
  }
  for (const auto& [id, recipe] : recipes) {
    auto it = items.find(recipe.output_id);
    if (it != items.end()) it->second.sources.push_back({AcquisitionRoute::Kind::kCraft, recipe.output_id});
  }
}

std::vector<std::string> find_crafting_cycle(const WorldDef& world) {
  enum class Color { kWhite, kGrey, kBlack };
  std::map<std::string, Color, std::less<>> color;
  for (const auto& [id, r] : world.recipes) color[id] = Color::kWhite;

  struct Frame {
    std::string id;
    std::size_t next = 0;
  };
  for (const auto& [root, unused] : world.recipes) {
    if (color[root] != Color::kWhite) continue;
    std::vector<Frame> stack{{root, 0}};
    color[root] = Color::kGrey;
    while (!stack.empty()) {
      Frame& top = stack.back();
      const Recipe& rec = world.recipes.find(top.id)->second;
      if (top.next == rec.ingredients.size()) {
        color[top.id] = Color::kBlack;
        stack.pop_back();
        continue;
      }
      const std::string& child = rec.ingredients[top.next++].item_id;
      auto it = color.find(child);
      if (it == color.end()) continue;  // raw material, no recipe
      if (it->second == Color::kGrey) {
        std::vector<std::string> cycle;
        auto from = std::find_if(stack.begin(), stack.end(), [&](const Frame& f) { return f.id == child; });
        for (; from != stack.end(); ++from) cycle.push_back(from->id);
        std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
        return cycle;
      }
      if (it->second == Color::kWhite) {
        it->second = Color::kGrey;
        stack.push_back({child, 0});
      }
    }
  }
  return {};
}

namespace {

class Validator {
 public:
  explicit Validator(const WorldDef& w) : w_(w) {
    for (const auto& [id, loc] : w_.locations) {
      for (const auto& e : loc.elements) {
        if (e.kind == ElementKind::kWorkshop) workshops_.insert(e.id);
      }
    }
  }

  ValidationReport run() {
    check_items();
    check_recipes();
    check_monsters();
    check_nodes();
    check_locations();
    check_cycle();
    fill_counts();
    return std::move(report_);
  }

 private:
  void add(std::string kind, std::string subject, std::string message) {
    report_.violations.push_back({std::move(kind), std::move(subject), std::move(message)});
  }

  void check_stats(const StatVector& s, const std::string& subject) {
    if (s.hp < 0) add("out_of_range", subject, "hp must be >= 0");
    for (Element e : kAllElements) {
      const int r = s.resist_of(e);
      if (r < -100 || r > 100) {
        add("out_of_range", subject,
            "resist." + std::string(to_string(e)) + " = " + std::to_string(r) + " outside [-100, 100]");
      }
    }
  }

  void check_items() {
    for (const auto& [id, item] : w_.items) {
      const std::string subject = "item:" + id;
      if (item.level < 1) add("out_of_range", subject, "level must be >= 1");
      if (item.equippable() && !item.stats) {
        add("missing_field", subject, "equippable item (slot " + std::string(to_string(item.slot)) +
                                          ") has no stats");
      }
      if (item.stats) check_stats(*item.stats, subject);
    }
  }

  void check_recipes() {
    for (const auto& [output, rec] : w_.recipes) {
      const std::string subject = "recipe:" + output;
      if (rec.ingredients.empty()) add("missing_field", subject, "recipe has no ingredients");
      for (const auto& ing : rec.ingredients) {
        if (w_.find_item(ing.item_id) == nullptr) {
          add("dangling_reference", subject, "ingredient '" + ing.item_id + "' is not a known item");
        }
        if (ing.qty < 1) add("out_of_range", subject, "ingredient '" + ing.item_id + "' qty must be >= 1");
      }
      if (w_.find_item(rec.output_id) == nullptr) {
        add("dangling_reference", subject, "output '" + rec.output_id + "' is not a known item");
      }
      if (rec.output_qty < 1) add("out_of_range", subject, "output_qty must be >= 1");
      if (rec.skill_level < 1) add("out_of_range", subject, "skill_level must be >= 1");
      if (w_.skills.find(rec.skill) == w_.skills.end()) {
        add("dangling_reference", subject, "skill '" + rec.skill + "' is not a known skill");
      }
      if (workshops_.count(rec.workshop) == 0) {
        add("dangling_reference", subject, "workshop '" + rec.workshop + "' is not placed at any location");
      }
    }
  }

  void check_monsters() {
    for (const auto& [id, m] : w_.monsters) {
      const std::string subject = "monster:" + id;
      if (m.difficulty_level < 1) add("out_of_range", subject, "level must be >= 1");
      if (m.stats.hp <= 0) add("out_of_range", subject, "monster hp must be > 0");
      check_stats(m.stats, subject);
      for (const auto& d : m.drops) {
        if (w_.find_item(d.item_id) == nullptr) {
          add("dangling_reference", subject, "drop '" + d.item_id + "' is not a known item");
        }
        if (!(d.rate > 0.0 && d.rate <= 1.0)) {
          add("out_of_range", subject, "drop rate for '" + d.item_id + "' outside (0, 1]");
        }
      }
      check_placement(subject, m.location_id, ElementKind::kMonster, id);
    }
  }

  void check_nodes() {
    for (const auto& [id, n] : w_.resource_nodes) {
      const std::string subject = "resource_node:" + id;
      if (w_.find_item(n.resource_item_id) == nullptr) {
        add("dangling_reference", subject, "resource '" + n.resource_item_id + "' is not a known item");
      }
      if (w_.skills.find(n.skill) == w_.skills.end()) {
        add("dangling_reference", subject, "skill '" + n.skill + "' is not a known skill");
      }
      if (n.skill_level < 1) add("out_of_range", subject, "skill_level must be >= 1");
      if (n.xp_reward < 1) add("out_of_range", subject, "xp must be >= 1");
      check_placement(subject, n.location_id, ElementKind::kResourceNode, id);
    }
  }

  // The entity must name a known location, and that location must list it.
  void check_placement(const std::string& subject, const std::string& location_id, ElementKind kind,
                       const std::string& id) {
    const Location* loc = w_.find_location(location_id);
    if (loc == nullptr) {
      add("dangling_reference", subject, "location '" + location_id + "' is not a known location");
      return;
    }
    const bool listed = std::any_of(loc->elements.begin(), loc->elements.end(),
                                    [&](const LocationElement& e) { return e.kind == kind && e.id == id; });
    if (!listed) add("inconsistent", subject, "location '" + location_id + "' does not list it");
  }

  void check_locations() {
    std::map<Coord, std::string> seen;
    for (const auto& [id, loc] : w_.locations) {
      const std::string subject = "location:" + id;
      if (!w_.grid.contains(loc.coords)) {
        add("out_of_range", subject, "coordinates outside the grid");
      }
      auto [it, inserted] = seen.emplace(loc.coords, id);
      if (!inserted) add("duplicate", subject, "coordinates already used by '" + it->second + "'");
      for (const auto& e : loc.elements) {
        if (e.kind == ElementKind::kWorkshop) continue;
        const std::string* placed_at = nullptr;
        if (e.kind == ElementKind::kResourceNode) {
          if (const ResourceNode* n = w_.find_node(e.id)) placed_at = &n->location_id;
        } else if (const Monster* m = w_.find_monster(e.id)) {
          placed_at = &m->location_id;
        }
        if (placed_at == nullptr) {
          add("dangling_reference", subject,
              std::string(to_string(e.kind)) + " '" + e.id + "' is not a known entity");
        } else if (*placed_at != id && w_.find_location(*placed_at) != nullptr) {
          add("inconsistent", subject,
              std::string(to_string(e.kind)) + " '" + e.id + "' declares location '" + *placed_at + "'");
        }
      }
    }
  }

  void check_cycle() {
    const auto cycle = find_crafting_cycle(w_);
    if (cycle.empty()) return;
    std::string path;
    for (const auto& id : cycle) path += id + " -> ";
    path += cycle.front();
    std::string members = "{";
    auto sorted = cycle;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) members += (i ? "," : "") + sorted[i];
    members += "}";
    add("crafting_cycle", "recipe:" + cycle.front(), "crafting cycle " + members + ": " + path);
  }

  void fill_counts() {
    auto& c = report_.counts;
    c["locations"] = static_cast<int>(w_.locations.size());
    c["monsters"] = static_cast<int>(w_.monsters.size());
    c["items"] = static_cast<int>(w_.items.size());
    c["recipes"] = static_cast<int>(w_.recipes.size());
    c["resource_nodes"] = static_cast<int>(w_.resource_nodes.size());
    c["skills"] = static_cast<int>(w_.skills.size());
    c["workshops"] = static_cast<int>(workshops_.size());
    std::set<std::string> resource_types;
    for (const auto& [id, n] : w_.resource_nodes) resource_types.insert(n.resource_item_id);
    c["resource_types"] = static_cast<int>(resource_types.size());
    c["equippable_items"] = static_cast<int>(std::count_if(
        w_.items.begin(), w_.items.end(), [](const auto& kv) { return kv.second.equippable(); }));
  }

  const WorldDef& w_;
  std::set<std::string> workshops_;
  ValidationReport report_;
};

WorldError::Kind error_kind_for(const std::string& violation_kind) {
  if (violation_kind == "dangling_reference") return WorldError::Kind::kDanglingReference;
  if (violation_kind == "crafting_cycle") return WorldError::Kind::kCraftingCycle;
  return WorldError::Kind::kInvalid;
}

}  // namespace

ValidationReport validate_world(const WorldDef& world) { return Validator(world).run(); }

WorldDef load_world(std::span<const std::filesystem::path> paths) {
  WorldDef world = parse_world_files(paths);
  const ValidationReport report = validate_world(world);
  if (!report.ok()) {
    const Violation& v = report.violations.front();
    throw WorldError(error_kind_for(v.kind), v.subject, v.subject + ": " + v.message);
  }
  return world;
}

std::vector<std::filesystem::path> world_bundle_files(const std::filesystem::path& dir) {
  static constexpr std::array<std::string_view, 6> kFiles{
      "items.json", "monsters.json", "locations.json", "resource_nodes.json", "recipes.json", "skills.json"};
  std::vector<std::filesystem::path> out;
  for (auto name : kFiles) {
    auto p = dir / name;
    if (std::filesystem::exists(p)) out.push_back(std::move(p));
  }
  return out;
}

WorldDef load_world_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw WorldError(WorldError::Kind::kIo, dir.string(), "world directory not found: " + dir.string());
  }
  const auto files = world_bundle_files(dir);
  return load_world(files);
}

std::vector<Item> items_at_or_below_level(const WorldDef& world, int level) {
  std::vector<Item> out;
  for (const auto& [id, item] : world.items) {
    if (item.equippable() && item.level <= level) out.push_back(item);
  }
  return out;
}

std::string world_hash(const WorldDef& world) { return sha256_hex(world_to_json(world).dump()); }

}  // namespace gearquest
