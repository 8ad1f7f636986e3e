#include "gearquest/task.hpp"

#include <fstream>
#include <sstream>

#include "json_reader.hpp"

namespace gearquest {

using nlohmann::json;
using detail::index_path;
using detail::ObjectReader;
using detail::schema_fail;

std::string_view to_string(TaskKind kind) { return kind == TaskKind::kCombat ? "combat" : "craft"; }

namespace {

std::vector<std::string> string_list(ObjectReader& r, std::string_view key) {
  std::vector<std::string> out;
  const json* arr = r.array_opt(key);
  if (arr == nullptr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    if (!(*arr)[i].is_string()) schema_fail(index_path(r.path(key), i), "expected a string");
    out.push_back((*arr)[i].get<std::string>());
  }
  return out;
}

}  // namespace

json character_to_json(const CharacterState& c) {
  json skills = json::object();
  for (const auto& [name, p] : c.skills) skills[name] = {{"level", p.level}, {"xp", p.xp}};
  json inventory = json::object();
  for (const auto& [id, qty] : c.inventory) {
    if (qty != 0) inventory[id] = qty;
  }
  json equipment = json::object();
  for (std::size_t i = 0; i < kGearPositionCount; ++i) {
    const auto pos = static_cast<GearPosition>(i);
    if (const auto& item = c.equipment.at(pos)) equipment[std::string(to_string(pos))] = *item;
  }
  return {{"level", c.level},
          {"base_stats", stats_to_json(c.base_stats)},
          {"damage_taken", c.damage_taken},
          {"position", {{"x", c.position.x}, {"y", c.position.y}}},
          {"skills", std::move(skills)},
          {"inventory", std::move(inventory)},
          {"equipment", std::move(equipment)}};
}

CharacterState character_from_json(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  CharacterState c;
  c.level = r.small_int("level");
  c.base_stats = stats_from_json(r.required("base_stats"), r.path("base_stats"));
  c.damage_taken = r.small_int_or("damage_taken", 0);
  {
    ObjectReader pr(r.required("position"), r.path("position"));
    c.position = Coord{pr.small_int("x"), pr.small_int("y")};
    pr.finish();
  }
  if (const json* skills = r.find("skills")) {
    if (!skills->is_object()) schema_fail(r.path("skills"), "expected an object");
    for (auto it = skills->begin(); it != skills->end(); ++it) {
      ObjectReader sr(it.value(), r.path("skills") + "." + it.key());
      c.skills[it.key()] = SkillProgress{sr.small_int("level"), sr.small_int_or("xp", 0)};
      sr.finish();
    }
  }
  if (const json* inv = r.find("inventory")) {
    if (!inv->is_object()) schema_fail(r.path("inventory"), "expected an object");
    for (auto it = inv->begin(); it != inv->end(); ++it) {
      if (!it.value().is_number_integer() || it.value().get<long long>() < 0) {
        schema_fail(r.path("inventory") + "." + it.key(), "expected a non-negative integer");
      }
      c.inventory[it.key()] = it.value().get<int>();
    }
  }
  if (const json* eq = r.find("equipment")) {
    if (!eq->is_object()) schema_fail(r.path("equipment"), "expected an object");
    for (auto it = eq->begin(); it != eq->end(); ++it) {
      const auto pos = gear_position_from_string(it.key());
      if (!pos) schema_fail(r.path("equipment") + "." + it.key(), "unknown gear position");
      if (!it.value().is_string()) schema_fail(r.path("equipment") + "." + it.key(), "expected a string");
      c.equipment.put(*pos, it.value().get<std::string>());
    }
  }
  r.finish();
  return c;
}

json task_to_json(const Task& t) {
  json alternatives = json::array();
  for (const auto& alt : t.alternatives) alternatives.push_back(alt);
  return {{"schema_version", t.schema_version},
          {"id", t.id},
          {"kind", std::string(to_string(t.kind))},
          {"target", t.target},
          {"equipped", t.equipped},
          {"missing", t.missing},
          {"auxiliary", t.auxiliary},
          {"alternatives", std::move(alternatives)},
          {"noise", t.noise},
          {"character", character_to_json(t.character)},
          {"environment", world_to_json(t.environment)},
          {"difficulty", t.difficulty},
          {"bracket", t.bracket},
          {"mechanics", {{"leveling", t.mechanics.leveling}, {"noise_count", t.mechanics.noise_count}}},
          {"seed", t.seed},
          {"world_hash", t.world_hash},
          {"template_version", t.template_version},
          {"template_hash", t.template_hash},
          {"warnings", t.warnings}};
}

Task task_from_json(const json& j) {
  try {
    ObjectReader r(j, "task");
    Task t;
    t.schema_version = r.small_int("schema_version");
    if (t.schema_version != kTaskSchemaVersion) {
      schema_fail(r.path("schema_version"), "unsupported task schema version " + std::to_string(t.schema_version));
    }
    t.id = r.string("id");
    const std::string kind = r.string("kind");
    if (kind == "combat") {
      t.kind = TaskKind::kCombat;
    } else if (kind == "craft") {
      t.kind = TaskKind::kCraft;
    } else {
      schema_fail(r.path("kind"), "unknown task kind '" + kind + "'");
    }
    t.target = r.string("target");
    t.equipped = string_list(r, "equipped");
    t.missing = string_list(r, "missing");
    t.auxiliary = string_list(r, "auxiliary");
    if (const json* alts = r.array_opt("alternatives")) {
      for (std::size_t i = 0; i < alts->size(); ++i) {
        const std::string where = index_path(r.path("alternatives"), i);
        if (!(*alts)[i].is_array()) schema_fail(where, "expected an array");
        std::vector<std::string> alt;
        for (const auto& v : (*alts)[i]) {
          if (!v.is_string()) schema_fail(where, "expected strings");
          alt.push_back(v.get<std::string>());
        }
        t.alternatives.push_back(std::move(alt));
      }
    }
    t.noise = string_list(r, "noise");
    t.character = character_from_json(r.required("character"), r.path("character"));
    t.environment = world_from_json(r.required("environment"), r.path("environment"));
    t.difficulty = r.small_int("difficulty");
    t.bracket = r.small_int("bracket");
    {
      ObjectReader mr(r.required("mechanics"), r.path("mechanics"));
      t.mechanics.leveling = mr.boolean("leveling");
      t.mechanics.noise_count = mr.small_int("noise_count");
      mr.finish();
    }
    const json& seed = r.required("seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) schema_fail(r.path("seed"), "expected an integer");
    t.seed = seed.get<std::uint64_t>();
    t.world_hash = r.string("world_hash");
    t.template_version = r.string("template_version");
    t.template_hash = r.string("template_hash");
    t.warnings = string_list(r, "warnings");
    r.finish();
    return t;
  } catch (const SchemaError& e) {
    throw TaskError("invalid_task", e.what());
  } catch (const WorldError& e) {
    throw TaskError("invalid_task", e.what());
  }
}

std::string serialize_task(const Task& task) { return task_to_json(task).dump(2) + "\n"; }

Task deserialize_task(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TaskError("invalid_task", std::string("malformed task JSON: ") + e.what());
  }
  return task_from_json(j);
}

Task load_task(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TaskError("io", "cannot open task file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return deserialize_task(buffer.str());
}

int BracketTable::bracket_of(int difficulty) const {
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (difficulty >= ranges[i].first && difficulty <= ranges[i].second) return static_cast<int>(i) + 1;
  }
  return 0;
}

const BracketTable& default_brackets() {
  static const BracketTable table{{{2, 4}, {5, 9}, {10, 14}, {15, 19}, {20, 27}, {28, 37}, {38, 49}, {50, 63}, {64, 97}}};
  return table;
}

BracketTable brackets_from_json(const json& j) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(kBracketCount)) {
    throw TaskError("invalid_brackets", "brackets must be an array of " + std::to_string(kBracketCount) + " [lo, hi] pairs");
  }
  BracketTable table;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& pair = j[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
      throw TaskError("invalid_brackets", "bracket " + std::to_string(i + 1) + " must be [lo, hi]");
    }
    const int lo = pair[0].get<int>();
    const int hi = pair[1].get<int>();
    if (lo > hi) throw TaskError("invalid_brackets", "bracket " + std::to_string(i + 1) + " has lo > hi");
    if (!table.ranges.empty() && lo != table.ranges.back().second + 1) {
      throw TaskError("invalid_brackets", "bracket " + std::to_string(i + 1) + " does not start where the previous one ends");
    }
    table.ranges.emplace_back(lo, hi);
  }
  return table;
}

json brackets_to_json(const BracketTable& table) {
  json out = json::array();
  for (const auto& [lo, hi] : table.ranges) out.push_back({lo, hi});
  return out;
}

}  // namespace gearquest
