#include "gearquest/task_gen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gearquest/executor.hpp"
#include "gearquest/hash.hpp"
#include "gearquest/prompt.hpp"
#include "gearquest/rng.hpp"

namespace gearquest {

using nlohmann::json;

namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Copies the entities a task needs out of the full world.
class EnvBuilder {
 public:
  explicit EnvBuilder(const WorldDef& world) : world_(world) {
    env_.grid = world.grid;
    env_.spawn = world.spawn;
  }

  void item(std::string_view id) {
    if (env_.items.count(id) != 0) return;
    const Item* it = world_.find_item(id);
    if (it == nullptr) throw TaskError("invalid_task", "unknown item '" + std::string(id) + "'");
    env_.items.emplace(it->id, *it);
  }

  void recipe(std::string_view output) {
    if (env_.recipes.count(output) != 0) return;
    const Recipe* r = world_.recipe_for(output);
    if (r == nullptr) throw TaskError("uncraftable", "no recipe for '" + std::string(output) + "'");
    env_.recipes.emplace(r->output_id, *r);
    item(output);
    skill(r->skill);
    workshop(r->workshop);
  }

  void node(std::string_view id) {
    if (env_.resource_nodes.count(id) != 0) return;
    const ResourceNode* n = world_.find_node(id);
    env_.resource_nodes.emplace(n->id, *n);
    item(n->resource_item_id);
    skill(n->skill);
    place(n->location_id, ElementKind::kResourceNode, n->id);
  }

  void monster(std::string_view id) {
    if (env_.monsters.count(id) != 0) return;
    const Monster* m = world_.find_monster(id);
    env_.monsters.emplace(m->id, *m);
    place(m->location_id, ElementKind::kMonster, m->id);
  }

  bool has_item(std::string_view id) const { return env_.items.count(id) != 0; }
  const WorldDef& peek() const { return env_; }

  WorldDef finish() {
    for (auto& [id, m] : env_.monsters) {
      std::erase_if(m.drops, [&](const Drop& d) { return env_.items.count(d.item_id) == 0; });
    }
    env_.rebuild_index();
    return env_;
  }

 private:
  void skill(const std::string& name) {
    if (env_.skills.count(name) != 0) return;
    auto it = world_.skills.find(name);
    if (it != world_.skills.end()) env_.skills.emplace(name, it->second);
  }

  void workshop(const std::string& name) {
    const auto coords = world_.workshop_coords(name);
    if (coords.empty()) return;
    const Location* loc = world_.location_at(coords.front());
    place(loc->id, ElementKind::kWorkshop, name);
  }

  void place(const std::string& location_id, ElementKind kind, const std::string& element_id) {
    const Location* src = world_.find_location(location_id);
    if (src == nullptr) return;
    auto [it, inserted] = env_.locations.try_emplace(location_id);
    Location& loc = it->second;
    if (inserted) {
      loc.id = src->id;
      loc.name = src->name;
      loc.coords = src->coords;
    }
    const LocationElement el{kind, element_id};
    if (std::find(loc.elements.begin(), loc.elements.end(), el) != loc.elements.end()) return;
    loc.elements.push_back(el);
    // Keep the world's element order.
    std::vector<LocationElement> ordered;
    for (const auto& e : src->elements) {
      if (std::find(loc.elements.begin(), loc.elements.end(), e) != loc.elements.end()) ordered.push_back(e);
    }
    loc.elements = std::move(ordered);
  }

  const WorldDef& world_;
  WorldDef env_;
};

void add_closure(EnvBuilder& env, const DependencyClosure& closure) {
  for (const auto& [id, qty] : closure.required) env.item(id);
  for (const auto& g : closure.gather_steps) env.node(g.node_id);
  for (const auto& f : closure.fight_steps) env.monster(f.monster_id);
  for (const auto& c : closure.craft_steps) env.recipe(c.item_id);
}

DependencyClosure closure_or_throw(const WorldDef& world, std::span<const Ingredient> roots) {
  try {
    return dependency_closure(world, roots);
  } catch (const CraftError& e) {
    throw TaskError("uncraftable", e.what());
  }
}

struct SkillPlan {
  std::map<std::string, SkillProgress, std::less<>> skills;
  std::vector<std::string> leveling_nodes;
};

SkillPlan plan_skills(const WorldDef& world, const DependencyClosure& closure, bool leveling) {
  SkillPlan out;
  for (const auto& [skill, level] : closure.required_levels) {
    out.skills[skill] = SkillProgress{leveling ? 1 : level, 0};
    if (!leveling || level <= 1) continue;
    try {
      for (const auto& step : leveling_schedule(world, skill, 1, level)) out.leveling_nodes.push_back(step.node_id);
    } catch (const CraftError& e) {
      throw TaskError("leveling_unreachable", e.what());
    }
  }
  return out;
}

void add_noise(const WorldDef& world, Task& task, EnvBuilder& env, const DependencyClosure& closure,
               std::set<std::string, std::less<>> excluded, int k) {
  if (k <= 0) return;
  NoiseQuery q;
  q.level = task.character.level;
  q.excluded = std::move(excluded);
  for (const auto& [id, qty] : closure.required) q.closure_items.insert(id);
  const WorldDef& current = env.peek();
  const CharacterState& c = task.character;
  q.obtainable = [&](const std::string& id) {
    if (c.count(id) > 0 || c.equipment.contains(id)) return true;
    if (current.recipe_for(id) != nullptr) return true;
    for (const auto& [nid, n] : current.resource_nodes) {
      if (n.resource_item_id == id) return true;
    }
    for (const auto& [mid, m] : current.monsters) {
      for (const auto& d : m.drops) {
        if (d.item_id == id) return true;
      }
    }
    return false;
  };
  task.noise = noise_items(world, q, k);
  for (const auto& id : task.noise) env.recipe(id);
  if (static_cast<int>(task.noise.size()) < k) {
    task.warnings.push_back("noise quota unmet: requested " + std::to_string(k) + ", found " +
                            std::to_string(task.noise.size()));
  }
}

void finalize(const WorldDef& world, Task& task, const BracketTable& brackets) {
  task.bracket = brackets.bracket_of(task.difficulty);
  task.world_hash = world_hash(world);
  task.template_version = std::string(kPromptTemplateVersion);
  task.template_hash = prompt_template_hash();
  task.id.clear();
  const std::string digest = sha256_hex(serialize_task(task));
  task.id = std::string(to_string(task.kind)) + "-" + task.target + "-" + digest.substr(0, 8);

  PlanProgram plan;
  try {
    plan = canonical_solution(task);
    const ExecutionLog log = run(task, plan);
    if (!log.summary.success || log.summary.failed_events != 0) {
      std::string why = "canonical plan for " + task.id + " does not solve it";
      for (const auto& e : log.events) {
        if (!e.ok()) {
          why += ": event " + std::to_string(e.index) + " " + to_string(e.action) + " failed (" +
                 std::string(to_string(*e.failure)) + ", " + e.detail + ")";
          break;
        }
      }
      throw TaskError("canonical_failed", why);
    }
  } catch (const PlanTooLongError& e) {
    throw TaskError("canonical_failed", e.what());
  }
}

}  // namespace

Task generate_combat_task(const WorldDef& world, std::string_view monster_id, const TaskOptions& options,
                          const BracketTable& brackets) {
  const Monster* target = world.find_monster(monster_id);
  if (target == nullptr) throw TaskError("invalid_task", "unknown monster '" + std::string(monster_id) + "'");
  const std::vector<GearSet> sets = minimal_winning_gear(world, *target);
  if (sets.empty()) throw TaskError("infeasible_target", "no gear set defeats " + target->id);
  if (sets.front().empty()) throw TaskError("infeasible_target", target->id + " is beaten bare-handed");

  const GearSet& chosen = sets.front();
  GearPartition split;
  try {
    split = partition_gear(chosen, PartitionPolicy{options.missing_count, options.seed});
  } catch (const std::invalid_argument& e) {
    throw TaskError("invalid_task", e.what());
  }

  Task task;
  task.kind = TaskKind::kCombat;
  task.target = target->id;
  task.equipped = split.equipped;
  task.missing = split.missing;
  task.seed = options.seed;
  task.mechanics = TaskMechanics{options.leveling, options.noise_count};

  std::vector<Ingredient> roots;
  for (const auto& id : task.missing) roots.push_back(Ingredient{id, 1});
  const DependencyClosure closure = closure_or_throw(world, roots);

  std::vector<const Monster*> scenario;
  for (const auto& f : closure.fight_steps) {
    if (f.monster_id == target->id) {
      throw TaskError("target_in_closure", "a missing item of " + target->id + " needs a drop from the target itself");
    }
    scenario.push_back(world.find_monster(f.monster_id));
  }

  AuxiliaryQuery aq;
  aq.target = target;
  aq.level = target->difficulty_level;
  aq.equipped = task.equipped;
  aq.solution = chosen.item_ids();
  aq.scenario_monsters = scenario;
  const auto aux = auxiliary_items(world, aq);
  if (!aux) {
    throw TaskError("auxiliary_infeasible", "no auxiliary set separates " + target->id + " from its drop sources");
  }
  task.auxiliary = *aux;

  const std::set<std::string, std::less<>> equipped_set(task.equipped.begin(), task.equipped.end());
  for (const auto& s : sets) {
    const auto ids = s.item_ids();
    if (!std::includes(ids.begin(), ids.end(), equipped_set.begin(), equipped_set.end())) continue;
    std::vector<std::string> alt;
    std::set_difference(ids.begin(), ids.end(), equipped_set.begin(), equipped_set.end(), std::back_inserter(alt));
    task.alternatives.push_back(std::move(alt));
  }

  CharacterState& c = task.character;
  c.level = target->difficulty_level;
  c.base_stats = base_stats(c.level);
  c.position = world.spawn;
  c.equipment = GearSet::from_items(world, task.equipped);
  for (const auto& id : task.auxiliary) c.inventory[id] = 1;

  const SkillPlan skills = plan_skills(world, closure, options.leveling);
  c.skills = skills.skills;

  EnvBuilder env(world);
  for (const auto& id : task.equipped) env.item(id);
  for (const auto& id : task.auxiliary) env.item(id);
  add_closure(env, closure);
  for (const auto& id : skills.leveling_nodes) env.node(id);
  env.monster(target->id);

  std::set<std::string, std::less<>> in_any_set;
  for (const auto& s : sets) {
    for (const auto& id : s.item_ids()) in_any_set.insert(id);
  }
  add_noise(world, task, env, closure, std::move(in_any_set), options.noise_count);
  task.environment = env.finish();

  task.difficulty = total_difficulty(world, task.missing);
  finalize(world, task, brackets);
  return task;
}

namespace {

// The item's preferred route is its own recipe.
bool crafted_directly(const WorldDef& world, std::string_view item_id) {
  try {
    return preferred_route(world, item_id).kind == AcquisitionRoute::Kind::kCraft;
  } catch (const CraftError&) {
    return false;
  }
}

}  // namespace

Task generate_craft_task(const WorldDef& world, std::string_view item_id, const TaskOptions& options,
                         const BracketTable& brackets) {
  const Item* item = world.find_item(item_id);
  if (item == nullptr) throw TaskError("invalid_task", "unknown item '" + std::string(item_id) + "'");
  const Ingredient root{item->id, 1};
  const DependencyClosure closure = closure_or_throw(world, std::span<const Ingredient>(&root, 1));
  if (!closure.fight_steps.empty()) {
    throw TaskError("craft_requires_combat", "crafting " + item->id + " requires defeating monsters");
  }

  Task task;
  task.kind = TaskKind::kCraft;
  task.target = item->id;
  task.seed = options.seed;
  task.mechanics = TaskMechanics{options.leveling, options.noise_count};

  CharacterState& c = task.character;
  c.level = std::max(1, item->level);
  c.base_stats = base_stats(c.level);
  c.position = world.spawn;
  const SkillPlan skills = plan_skills(world, closure, options.leveling);
  c.skills = skills.skills;

  EnvBuilder env(world);
  add_closure(env, closure);
  for (const auto& id : skills.leveling_nodes) env.node(id);
  add_noise(world, task, env, closure, {item->id}, options.noise_count);
  task.environment = env.finish();

  task.difficulty = 1 + closure.action_count();
  finalize(world, task, brackets);
  return task;
}

DependencyClosure task_closure(const Task& task) {
  std::vector<Ingredient> roots;
  if (task.kind == TaskKind::kCraft) {
    roots.push_back(Ingredient{task.target, 1});
  } else {
    for (const auto& id : task.missing) roots.push_back(Ingredient{id, 1});
  }
  return dependency_closure(task.environment, roots);
}

namespace {

class PlanWriter {
 public:
  explicit PlanWriter(Coord start) : pos_(start) {}

  void move_to(Coord c) {
    if (c == pos_) return;
    add(Action::move(c.x, c.y));
    pos_ = c;
  }
  void add(Action a) {
    Statement s;
    s.node = std::move(a);
    out_.statements.push_back(std::move(s));
  }
  void repeat(std::vector<Action> body, int times) {
    if (times == 1) {
      for (auto& a : body) add(std::move(a));
      return;
    }
    ForLoop loop;
    loop.count = times;
    for (auto& a : body) {
      Statement s;
      s.node = std::move(a);
      loop.body.push_back(std::move(s));
    }
    Statement s;
    s.node = std::move(loop);
    out_.statements.push_back(std::move(s));
  }
  PlanProgram take() { return std::move(out_); }

 private:
  Coord pos_;
  PlanProgram out_;
};

Coord coords_or_throw(const WorldDef& env, std::string_view location_id) {
  const auto c = env.coords_of(location_id);
  if (!c) throw TaskError("invalid_task", "location '" + std::string(location_id) + "' missing from environment");
  return *c;
}

}  // namespace

PlanProgram canonical_solution(const Task& task) {
  const WorldDef& env = task.environment;
  const DependencyClosure closure = task_closure(task);
  PlanWriter w(task.character.position);

  if (task.mechanics.leveling) {
    for (const auto& [skill, level] : closure.required_levels) {
      const int current = task.character.skill_level(skill);
      if (current >= level) continue;
      for (const auto& step : leveling_schedule(env, skill, current, level)) {
        w.move_to(coords_or_throw(env, env.find_node(step.node_id)->location_id));
        w.repeat({Action::gather()}, step.gathers);
      }
    }
  }

  GearSet gear = task.character.equipment;
  std::vector<GearPosition> aux_positions;
  if (!closure.fight_steps.empty()) {
    for (const auto& id : task.auxiliary) {
      const auto pos = gear.free_position(env.find_item(id)->slot);
      if (!pos) throw TaskError("invalid_task", "no free slot for auxiliary item '" + id + "'");
      gear.put(*pos, id);
      aux_positions.push_back(*pos);
      w.add(Action::equip(id));
    }
  }

  for (const auto& g : closure.gather_steps) {
    w.move_to(coords_or_throw(env, env.find_node(g.node_id)->location_id));
    w.repeat({Action::gather()}, g.qty);
  }
  for (const auto& f : closure.fight_steps) {
    w.move_to(coords_or_throw(env, env.find_monster(f.monster_id)->location_id));
    w.repeat({Action::fight(), Action::rest()}, f.kills);
  }
  for (const auto& step : closure.craft_steps) {
    const Recipe& recipe = *env.recipe_for(step.item_id);
    const auto workshops = env.workshop_coords(recipe.workshop);
    if (workshops.empty()) throw TaskError("invalid_task", "no " + recipe.workshop + " in the environment");
    w.move_to(workshops.front());
    w.add(Action::craft(step.item_id, step.runs));
  }

  if (task.kind == TaskKind::kCombat) {
    for (GearPosition pos : aux_positions) w.add(Action::unequip(std::string(to_string(pos))));
    for (const auto& id : task.missing) w.add(Action::equip(id));
    w.move_to(coords_or_throw(env, env.find_monster(task.target)->location_id));
    w.add(Action::fight());
  }
  return w.take();
}

SuiteSpec suite_spec_from_json(const json& j) {
  if (!j.is_object()) throw TaskError("invalid_spec", "suite spec must be a JSON object");
  SuiteSpec spec;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    try {
      if (key == "per_bracket_count") {
        spec.per_bracket_count = v.get<int>();
        if (spec.per_bracket_count < 0) throw TaskError("invalid_spec", "per_bracket_count must be >= 0");
      } else if (key == "seed") {
        spec.seed = v.get<std::uint64_t>();
      } else if (key == "brackets") {
        spec.brackets = brackets_from_json(v);
      } else if (key == "variants") {
        spec.variants.clear();
        for (const auto& e : v) {
          for (auto f = e.begin(); f != e.end(); ++f) {
            if (f.key() != "leveling" && f.key() != "noise_count") {
              throw TaskError("invalid_spec", "unknown variant field '" + f.key() + "'");
            }
          }
          spec.variants.push_back(SuiteVariant{e.value("leveling", false), e.value("noise_count", 0)});
        }
        if (spec.variants.empty()) throw TaskError("invalid_spec", "variants must not be empty");
      } else if (key == "craft_share") {
        spec.craft_share = v.get<double>();
        if (spec.craft_share < 0 || spec.craft_share > 1) throw TaskError("invalid_spec", "craft_share must be in [0, 1]");
      } else if (key == "seeds_per_split") {
        spec.seeds_per_split = v.get<int>();
        if (spec.seeds_per_split < 1) throw TaskError("invalid_spec", "seeds_per_split must be >= 1");
      } else if (key != "schema_version") {
        throw TaskError("invalid_spec", "unknown suite spec field '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw TaskError("invalid_spec", "suite spec field '" + key + "': " + e.what());
    }
  }
  return spec;
}

json suite_spec_to_json(const SuiteSpec& spec) {
  json variants = json::array();
  for (const auto& v : spec.variants) variants.push_back({{"leveling", v.leveling}, {"noise_count", v.noise_count}});
  return {{"schema_version", 1},
          {"per_bracket_count", spec.per_bracket_count},
          {"seed", spec.seed},
          {"brackets", brackets_to_json(spec.brackets)},
          {"variants", std::move(variants)},
          {"craft_share", spec.craft_share},
          {"seeds_per_split", spec.seeds_per_split}};
}

bool Suite::complete() const {
  return std::all_of(brackets.begin(), brackets.end(), [](const BracketReport& b) { return b.produced >= b.requested; });
}

namespace {

struct Draft {
  TaskKind kind = TaskKind::kCombat;
  std::string target;
  TaskOptions options;
  int difficulty = 0;
  std::uint64_t rank = 0;
};

std::vector<Draft> enumerate_drafts(const WorldDef& world, const SuiteSpec& spec) {
  std::vector<Draft> drafts;
  std::set<std::string> seen;
  auto pick_variant = [&](const std::string& key) -> std::pair<std::uint64_t, const SuiteVariant&> {
    const std::uint64_t rank = splitmix64(spec.seed ^ fnv1a64(key));
    return {rank, spec.variants[splitmix64(rank) % spec.variants.size()]};
  };

  for (const auto& [id, monster] : world.monsters) {
    const auto sets = minimal_winning_gear(world, monster);
    if (sets.empty() || sets.front().empty()) continue;
    const GearSet& chosen = sets.front();
    const int n = static_cast<int>(chosen.size());
    for (int m = 1; m <= n; ++m) {
      for (int k = 0; k < spec.seeds_per_split; ++k) {
        const std::uint64_t seed =
            splitmix64(spec.seed ^ fnv1a64(id) ^ (static_cast<std::uint64_t>(m) << 32) ^ static_cast<std::uint64_t>(k));
        const GearPartition split = partition_gear(chosen, PartitionPolicy{m, seed});
        std::string key = "combat|" + id + "|";
        for (const auto& s : split.missing) key += s + ",";
        if (!seen.insert(key).second) continue;
        int difficulty = 0;
        try {
          difficulty = total_difficulty(world, split.missing);
        } catch (const CraftError&) {
          continue;
        }
        const auto [rank, variant] = pick_variant(key);
        drafts.push_back(Draft{TaskKind::kCombat, id, TaskOptions{m, variant.leveling, variant.noise_count, seed},
                               difficulty, rank});
      }
    }
  }

  for (const auto& [id, item] : world.items) {
    // Suite craft tasks must involve at least one craft step.
    if (!crafted_directly(world, id)) continue;
    DependencyClosure closure;
    try {
      closure = dependency_closure(world, id, 1);
    } catch (const CraftError&) {
      continue;
    }
    if (!closure.fight_steps.empty()) continue;
    const std::string key = "craft|" + id;
    const auto [rank, variant] = pick_variant(key);
    drafts.push_back(Draft{TaskKind::kCraft, id, TaskOptions{0, variant.leveling, variant.noise_count, spec.seed},
                           1 + closure.action_count(), rank});
  }
  return drafts;
}

}  // namespace

Suite generate_suite(const WorldDef& world, const SuiteSpec& spec) {
  Suite suite;
  const int bracket_count = static_cast<int>(spec.brackets.ranges.size());
  for (int b = 1; b <= bracket_count; ++b) suite.brackets.push_back(BracketReport{b, spec.per_bracket_count, 0, 0, {}});
  if (spec.per_bracket_count == 0) return suite;

  std::vector<std::vector<Draft>> combat(bracket_count);
  std::vector<std::vector<Draft>> craft(bracket_count);
  for (auto& d : enumerate_drafts(world, spec)) {
    const int b = spec.brackets.bracket_of(d.difficulty);
    if (b == 0) continue;
    ++suite.brackets[b - 1].candidates;
    (d.kind == TaskKind::kCombat ? combat : craft)[b - 1].push_back(std::move(d));
  }

  std::set<std::string> ids;
  for (int b = 0; b < bracket_count; ++b) {
    BracketReport& report = suite.brackets[b];
    auto by_rank = [](const Draft& x, const Draft& y) {
      return x.rank != y.rank ? x.rank < y.rank : x.target < y.target;
    };
    std::sort(combat[b].begin(), combat[b].end(), by_rank);
    std::sort(craft[b].begin(), craft[b].end(), by_rank);

    std::vector<Task> accepted;
    auto attempt = [&](const Draft& d) {
      try {
        Task t = d.kind == TaskKind::kCombat ? generate_combat_task(world, d.target, d.options, spec.brackets)
                                             : generate_craft_task(world, d.target, d.options, spec.brackets);
        if (!ids.insert(t.id).second) return false;
        accepted.push_back(std::move(t));
        return true;
      } catch (const TaskError& e) {
        ++report.rejections[e.reason()];
        return false;
      }
    };
    const int craft_quota = static_cast<int>(std::floor(spec.per_bracket_count * spec.craft_share));
    std::size_t ci = 0;
    int crafts = 0;
    for (; ci < craft[b].size() && crafts < craft_quota; ++ci) crafts += attempt(craft[b][ci]) ? 1 : 0;
    for (const auto& d : combat[b]) {
      if (static_cast<int>(accepted.size()) >= spec.per_bracket_count) break;
      attempt(d);
    }
    for (; ci < craft[b].size() && static_cast<int>(accepted.size()) < spec.per_bracket_count; ++ci) {
      attempt(craft[b][ci]);
    }
    report.produced = static_cast<int>(accepted.size());
    for (auto& t : accepted) suite.tasks.push_back(std::move(t));
  }
  std::sort(suite.tasks.begin(), suite.tasks.end(), [](const Task& x, const Task& y) {
    return x.bracket != y.bracket ? x.bracket < y.bracket : x.id < y.id;
  });
  return suite;
}

}  // namespace gearquest
