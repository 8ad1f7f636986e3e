#include <fstream>
#include <sstream>

#include "gearquest/world.hpp"
#include "json_reader.hpp"

namespace gearquest {

using nlohmann::json;
using detail::index_path;
using detail::ObjectReader;
using detail::schema_fail;

namespace {

ElementArray element_array_from_json(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  ElementArray out{};
  for (Element e : kAllElements) {
    out[static_cast<std::size_t>(e)] = r.small_int_or(to_string(e), 0);
  }
  r.finish();
  return out;
}

json element_array_to_json(const ElementArray& a) {
  json j = json::object();
  for (Element e : kAllElements) {
    const int v = a[static_cast<std::size_t>(e)];
    if (v != 0) j[std::string(to_string(e))] = v;
  }
  return j;
}

Coord coord_from_json(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  Coord c{r.small_int("x"), r.small_int("y")};
  r.finish();
  return c;
}

void require_schema_version(ObjectReader& r) {
  const json* v = r.find("schema_version");
  if (v == nullptr) schema_fail(r.path("schema_version"), "missing required field");
  if (!v->is_number_integer() || v->get<long long>() != kWorldSchemaVersion) {
    schema_fail(r.path("schema_version"),
                "unsupported schema version (expected " + std::to_string(kWorldSchemaVersion) + ")");
  }
}

template <typename T>
void insert_unique(IdMap<T>& map, T value, const std::string& where) {
  const std::string id = value.id;
  if (id.empty()) schema_fail(where + ".id", "id must be non-empty");
  if (!map.emplace(id, std::move(value)).second) schema_fail(where + ".id", "duplicate id '" + id + "'");
}

Item item_from_json(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  Item item;
  item.id = r.string("id");
  item.name = r.string_or("name", item.id);
  const std::string slot = r.string("slot");
  const auto parsed = item_slot_from_string(slot);
  if (!parsed) schema_fail(r.path("slot"), "unknown slot '" + slot + "'");
  item.slot = *parsed;
  item.level = r.small_int("level");
  if (const json* s = r.find("stats")) item.stats = stats_from_json(*s, r.path("stats"));
  r.finish();
  return item;
}

Recipe recipe_from_json(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  Recipe recipe;
  recipe.output_id = r.string("output");
  recipe.output_qty = r.small_int_or("output_qty", 1);
  recipe.skill = r.string("skill");
  recipe.skill_level = r.small_int("skill_level");
  recipe.workshop = r.string("workshop");
  const json& ingredients = r.array("ingredients");
  for (std::size_t i = 0; i < ingredients.size(); ++i) {
    ObjectReader ir(ingredients[i], index_path(r.path("ingredients"), i));
    Ingredient ing{ir.string("item"), ir.small_int("qty")};
    ir.finish();
    recipe.ingredients.push_back(std::move(ing));
  }
  r.finish();
  return recipe;
}

Monster monster_from_json(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  Monster m;
  m.id = r.string("id");
  m.name = r.string_or("name", m.id);
  m.difficulty_level = r.small_int("level");
  m.stats = stats_from_json(r.required("stats"), r.path("stats"));
  if (const json* drops = r.array_opt("drops")) {
    for (std::size_t i = 0; i < drops->size(); ++i) {
      ObjectReader dr((*drops)[i], index_path(r.path("drops"), i));
      Drop d{dr.string("item"), dr.number("rate")};
      dr.finish();
      m.drops.push_back(std::move(d));
    }
  }
  m.location_id = r.string("location");
  r.finish();
  return m;
}

ResourceNode node_from_json(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  ResourceNode n;
  n.id = r.string("id");
  n.name = r.string_or("name", n.id);
  n.resource_item_id = r.string("item");
  n.skill = r.string("skill");
  n.skill_level = r.small_int("skill_level");
  n.xp_reward = r.small_int("xp");
  n.location_id = r.string("location");
  r.finish();
  return n;
}

std::optional<ElementKind> element_kind_from_string(std::string_view s) {
  for (ElementKind k : {ElementKind::kResourceNode, ElementKind::kWorkshop, ElementKind::kMonster}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

Location location_from_json(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  Location loc;
  loc.id = r.string("id");
  loc.name = r.string_or("name", loc.id);
  loc.coords = Coord{r.small_int("x"), r.small_int("y")};
  if (const json* elements = r.array_opt("elements")) {
    for (std::size_t i = 0; i < elements->size(); ++i) {
      ObjectReader er((*elements)[i], index_path(r.path("elements"), i));
      const std::string kind = er.string("kind");
      const auto parsed = element_kind_from_string(kind);
      if (!parsed) schema_fail(er.path("kind"), "unknown element kind '" + kind + "'");
      loc.elements.push_back(LocationElement{*parsed, er.string("id")});
      er.finish();
    }
  }
  r.finish();
  return loc;
}

Skill skill_from_json(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  Skill s;
  s.id = r.string("id");
  const std::string kind = r.string("kind");
  if (kind == "gathering") {
    s.kind = SkillKind::kGathering;
  } else if (kind == "crafting") {
    s.kind = SkillKind::kCrafting;
  } else {
    schema_fail(r.path("kind"), "unknown skill kind '" + kind + "'");
  }
  s.max_level = r.small_int_or("max_level", 50);
  r.finish();
  return s;
}

template <typename T, typename Parse>
void read_section(ObjectReader& r, std::string_view key, IdMap<T>& into, Parse parse) {
  const json* arr = r.array_opt(key);
  if (arr == nullptr) return;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string where = index_path(r.path(key), i);
    insert_unique(into, parse((*arr)[i], where), where);
  }
}

}  // namespace

StatVector stats_from_json(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  StatVector s;
  s.hp = r.small_int_or("hp", 0);
  if (const json* a = r.find("attack")) s.attack = element_array_from_json(*a, r.path("attack"));
  if (const json* a = r.find("dmg_amp")) s.dmg_amp = element_array_from_json(*a, r.path("dmg_amp"));
  if (const json* a = r.find("resist")) s.resist = element_array_from_json(*a, r.path("resist"));
  r.finish();
  return s;
}

json stats_to_json(const StatVector& s) {
  json j = json::object();
  j["hp"] = s.hp;
  j["attack"] = element_array_to_json(s.attack);
  j["dmg_amp"] = element_array_to_json(s.dmg_amp);
  j["resist"] = element_array_to_json(s.resist);
  return j;
}

void merge_world_json(WorldDef& world, const json& doc, std::string_view source) {
  ObjectReader r(doc, std::string(source));
  require_schema_version(r);
  if (const json* grid = r.find("grid")) {
    ObjectReader gr(*grid, r.path("grid"));
    world.grid = GridBounds{gr.small_int("width"), gr.small_int("height")};
    gr.finish();
  }
  if (const json* spawn = r.find("spawn")) world.spawn = coord_from_json(*spawn, r.path("spawn"));

  read_section(r, "items", world.items, item_from_json);
  {
    const json* arr = r.array_opt("recipes");
    for (std::size_t i = 0; arr != nullptr && i < arr->size(); ++i) {
      const std::string where = index_path(r.path("recipes"), i);
      Recipe recipe = recipe_from_json((*arr)[i], where);
      const std::string key = recipe.output_id;
      if (!world.recipes.emplace(key, std::move(recipe)).second) {
        schema_fail(where + ".output", "second recipe for '" + key + "'");
      }
    }
  }
  read_section(r, "monsters", world.monsters, monster_from_json);
  read_section(r, "resource_nodes", world.resource_nodes, node_from_json);
  read_section(r, "locations", world.locations, location_from_json);
  read_section(r, "skills", world.skills, skill_from_json);
  r.finish();
}

WorldDef world_from_json(const json& doc, std::string_view source) {
  WorldDef world;
  try {
    merge_world_json(world, doc, source);
  } catch (const SchemaError& e) {
    throw WorldError(WorldError::Kind::kSchema, std::string(source), e.what());
  }
  world.rebuild_index();
  return world;
}

json world_to_json(const WorldDef& world) {
  json doc = json::object();
  doc["schema_version"] = kWorldSchemaVersion;
  doc["grid"] = {{"width", world.grid.width}, {"height", world.grid.height}};
  doc["spawn"] = {{"x", world.spawn.x}, {"y", world.spawn.y}};

  json items = json::array();
  for (const auto& [id, item] : world.items) {
    json j = {{"id", item.id}, {"name", item.name}, {"slot", to_string(item.slot)},
              {"level", item.level}};
    if (item.stats) j["stats"] = stats_to_json(*item.stats);
    items.push_back(std::move(j));
  }
  doc["items"] = std::move(items);

  json recipes = json::array();
  for (const auto& [id, rec] : world.recipes) {
    json ings = json::array();
    for (const auto& ing : rec.ingredients) ings.push_back({{"item", ing.item_id}, {"qty", ing.qty}});
    recipes.push_back({{"output", rec.output_id},
                       {"output_qty", rec.output_qty},
                       {"skill", rec.skill},
                       {"skill_level", rec.skill_level},
                       {"workshop", rec.workshop},
                       {"ingredients", std::move(ings)}});
  }
  doc["recipes"] = std::move(recipes);

  json monsters = json::array();
  for (const auto& [id, m] : world.monsters) {
    json drops = json::array();
    for (const auto& d : m.drops) drops.push_back({{"item", d.item_id}, {"rate", d.rate}});
    monsters.push_back({{"id", m.id},
                        {"name", m.name},
                        {"level", m.difficulty_level},
                        {"stats", stats_to_json(m.stats)},
                        {"drops", std::move(drops)},
                        {"location", m.location_id}});
  }
  doc["monsters"] = std::move(monsters);

  json nodes = json::array();
  for (const auto& [id, n] : world.resource_nodes) {
    nodes.push_back({{"id", n.id},
                     {"name", n.name},
                     {"item", n.resource_item_id},
                     {"skill", n.skill},
                     {"skill_level", n.skill_level},
                     {"xp", n.xp_reward},
                     {"location", n.location_id}});
  }
  doc["resource_nodes"] = std::move(nodes);

  json locations = json::array();
  for (const auto& [id, loc] : world.locations) {
    json elements = json::array();
    for (const auto& e : loc.elements) elements.push_back({{"kind", to_string(e.kind)}, {"id", e.id}});
    locations.push_back({{"id", loc.id},
                         {"name", loc.name},
                         {"x", loc.coords.x},
                         {"y", loc.coords.y},
                         {"elements", std::move(elements)}});
  }
  doc["locations"] = std::move(locations);

  json skills = json::array();
  for (const auto& [id, s] : world.skills) {
    skills.push_back({{"id", s.id},
                      {"kind", s.kind == SkillKind::kGathering ? "gathering" : "crafting"},
                      {"max_level", s.max_level}});
  }
  doc["skills"] = std::move(skills);
  return doc;
}

WorldDef parse_world_files(std::span<const std::filesystem::path> paths) {
  WorldDef world;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw WorldError(WorldError::Kind::kIo, path.string(), "cannot open world file: " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string name = path.filename().string();
    json doc;
    try {
      doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
      throw WorldError(WorldError::Kind::kSchema, name, name + ": malformed JSON: " + e.what());
    }
    try {
      merge_world_json(world, doc, name);
    } catch (const SchemaError& e) {
      throw WorldError(WorldError::Kind::kSchema, name, e.what());
    }
  }
  world.rebuild_index();
  return world;
}

}  // namespace gearquest
