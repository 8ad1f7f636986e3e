#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "gearquest/task_gen.hpp"
#include "gearquest/world.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return GEARQUEST_DATA_DIR; }
inline std::filesystem::path config_dir() { return GEARQUEST_CONFIG_DIR; }
inline std::filesystem::path golden_dir() { return GEARQUEST_GOLDEN_DIR; }

inline const gearquest::WorldDef& toy_world() {
  static const gearquest::WorldDef world = gearquest::load_world_dir(data_dir() / "toy_world");
  return world;
}

inline const gearquest::WorldDef& reference_world() {
  static const gearquest::WorldDef world = gearquest::load_world_dir(data_dir() / "reference_world");
  return world;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gearquest_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Arena world: one workshop at spawn (0,0), nodes on row 0 and monsters on row 1,
// each entity on its own tile. Callers supply items, recipes, node and monster
// entries without locations.
inline gearquest::WorldDef arena(nlohmann::json items, nlohmann::json recipes, nlohmann::json nodes,
                                 nlohmann::json monsters, int max_level = 10) {
  using nlohmann::json;
  json locations = json::array();
  locations.push_back({{"id", "camp"}, {"x", 0}, {"y", 0}, {"elements", {{{"kind", "workshop"}, {"id", "bench"}}}}});
  int x = 1;
  for (auto& n : nodes) {
    const std::string loc = "at_" + n["id"].get<std::string>();
    n["location"] = loc;
    locations.push_back({{"id", loc}, {"x", x++}, {"y", 0}, {"elements", {{{"kind", "resource_node"}, {"id", n["id"]}}}}});
  }
  x = 0;
  for (auto& m : monsters) {
    const std::string loc = "at_" + m["id"].get<std::string>();
    m["location"] = loc;
    locations.push_back({{"id", loc}, {"x", x++}, {"y", 1}, {"elements", {{{"kind", "monster"}, {"id", m["id"]}}}}});
  }
  const int width = std::max<int>(static_cast<int>(std::max(nodes.size() + 1, monsters.size())), 1);
  json doc{{"schema_version", 1},
           {"grid", {{"width", width}, {"height", 2}}},
           {"spawn", {{"x", 0}, {"y", 0}}},
           {"items", items},
           {"recipes", recipes},
           {"resource_nodes", nodes},
           {"monsters", monsters},
           {"locations", locations},
           {"skills", json::array({{{"id", "mining"}, {"kind", "gathering"}, {"max_level", max_level}},
                                   {{"id", "woodcutting"}, {"kind", "gathering"}, {"max_level", max_level}}})}};
  return gearquest::world_from_json(doc, "arena");
}

// A scavenger dropping fang at `rate` guards the maul recipe; the warden
// resists fire, so the club beats only the scavenger.
inline gearquest::WorldDef drop_arena(double rate) {
  using nlohmann::json;
  auto gear = [](const std::string& id, json stats) {
    return json{{"id", id}, {"slot", "weapon"}, {"level", 1}, {"stats", std::move(stats)}};
  };
  return arena(
      json::array({{{"id", "fang"}, {"slot", "none"}, {"level", 1}}, gear("maul", {{"attack", {{"earth", 20}}}}),
                   gear("club", {{"attack", {{"fire", 10}}}}), gear("axe", {{"attack", {{"earth", 1}}}})}),
      json::array({{{"output", "maul"}, {"skill", "mining"}, {"skill_level", 1}, {"workshop", "bench"},
                    {"ingredients", {{{"item", "fang"}, {"qty", 1}}}}}}),
      json::array(),
      json::array({{{"id", "scavenger"}, {"level", 1}, {"stats", {{"hp", 30}, {"attack", {{"earth", 5}}}}},
                    {"drops", {{{"item", "fang"}, {"rate", rate}}}}},
                   {{"id", "warden"}, {"level", 1},
                    {"stats", {{"hp", 40}, {"attack", {{"earth", 60}}}, {"resist", {{"fire", 100}}}}}}}));
}

inline gearquest::Task toy_task(const std::string& monster, int missing, bool leveling = false, int noise = 0,
                                std::uint64_t seed = 7) {
  return gearquest::generate_combat_task(toy_world(), monster, {missing, leveling, noise, seed});
}

}  // namespace fixtures
