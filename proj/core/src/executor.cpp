#include "gearquest/executor.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "gearquest/craft_graph.hpp"
#include "gearquest/hash.hpp"
#include "gearquest/rng.hpp"
#include "json_reader.hpp"

namespace gearquest {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 9> kReasonNames{
    "wrong_location", "missing_ingredients", "insufficient_level", "unknown_item", "slot_conflict",
    "combat_loss",    "not_a_node",          "not_a_workshop",     "no_monster"};

constexpr int kDefaultSkillCap = 50;

const Location* location_here(const WorldDef& env, Coord c) { return env.location_at(c); }

template <typename Pred>
const LocationElement* find_element(const Location* loc, ElementKind kind, Pred&& pred) {
  if (loc == nullptr) return nullptr;
  for (const auto& e : loc->elements) {
    if (e.kind == kind && pred(e)) return &e;
  }
  return nullptr;
}

const LocationElement* first_element(const Location* loc, ElementKind kind) {
  return find_element(loc, kind, [](const LocationElement&) { return true; });
}

}  // namespace

std::string_view to_string(ExecMode mode) { return mode == ExecMode::kDeterministic ? "deterministic" : "stochastic"; }

std::optional<ExecMode> exec_mode_from_string(std::string_view name) {
  if (name == "deterministic") return ExecMode::kDeterministic;
  if (name == "stochastic") return ExecMode::kStochastic;
  return std::nullopt;
}

std::string_view to_string(FailReason reason) { return kReasonNames[static_cast<std::size_t>(reason)]; }

std::optional<FailReason> fail_reason_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kReasonNames.size(); ++i) {
    if (kReasonNames[i] == name) return static_cast<FailReason>(i);
  }
  return std::nullopt;
}

bool StateDelta::empty() const {
  return inventory.empty() && !position && equipment.empty() && skills.empty() && !damage_taken && defeated.empty();
}

SimState init_state(const Task& task) {
  SimState s;
  s.character = task.character;
  return s;
}

SimState init_state(const WorldDef& world, const Task& task) {
  const std::string actual = world_hash(world);
  if (actual != task.world_hash) {
    throw TaskError("world_mismatch", "task " + task.id + " was generated from world " + task.world_hash +
                                          ", not " + actual);
  }
  return init_state(task);
}

json state_to_json(const SimState& state) {
  json defeated = json::object();
  for (const auto& [id, n] : state.defeated) defeated[id] = n;
  return {{"character", character_to_json(state.character)}, {"defeated", std::move(defeated)}};
}

std::string state_hash(const SimState& state) { return sha256_hex(state_to_json(state).dump()); }

bool goal_reached(const Task& task, const SimState& state) {
  if (task.kind == TaskKind::kCombat) {
    auto it = state.defeated.find(task.target);
    return it != state.defeated.end() && it->second > 0;
  }
  return state.character.count(task.target) > 0 || state.character.equipment.contains(task.target);
}

void apply_delta(SimState& state, const StateDelta& d) {
  CharacterState& c = state.character;
  for (const auto& [id, change] : d.inventory) {
    const int next = c.count(id) + change;
    if (next == 0) {
      c.inventory.erase(id);
    } else {
      c.inventory[id] = next;
    }
  }
  if (d.position) c.position = *d.position;
  for (const auto& [pos, item] : d.equipment) {
    if (item) {
      c.equipment.put(pos, *item);
    } else {
      c.equipment.take(pos);
    }
  }
  for (const auto& [name, progress] : d.skills) c.skills[name] = progress;
  if (d.damage_taken) c.damage_taken = *d.damage_taken;
  for (const auto& [id, n] : d.defeated) state.defeated[id] += n;
}

Simulator::Simulator(const Task& task, ExecOptions options)
    : task_(task), env_(task.environment), options_(options), state_(init_state(task)) {}

Event Simulator::fail(Event e, FailReason reason, std::string detail) const {
  e.failure = reason;
  e.detail = std::move(detail);
  e.delta = StateDelta{};
  return e;
}

int Simulator::max_level_of(std::string_view skill) const {
  auto it = env_.skills.find(skill);
  return it == env_.skills.end() ? kDefaultSkillCap : it->second.max_level;
}

Event Simulator::step(const Action& action) {
  Event e;
  e.index = next_index_++;
  e.action = action;
  switch (action.kind) {
    case ActionKind::kMove: do_move(action, e); break;
    case ActionKind::kGather: do_gather(e); break;
    case ActionKind::kFight: do_fight(e); break;
    case ActionKind::kCraft: do_craft(action, e); break;
    case ActionKind::kEquip: do_equip(action, e); break;
    case ActionKind::kUnequip: do_unequip(action, e); break;
    case ActionKind::kRecycle: do_recycle(action, e); break;
    case ActionKind::kRest: do_rest(e); break;
  }
  if (e.ok()) apply_delta(state_, e.delta);
  return e;
}

void Simulator::do_move(const Action& a, Event& e) {
  const Coord target{a.x, a.y};
  if (!env_.grid.contains(target)) {
    e = fail(e, FailReason::kWrongLocation,
             "(" + std::to_string(a.x) + ", " + std::to_string(a.y) + ") is outside the map");
    return;
  }
  e.delta.position = target;
}

void Simulator::do_gather(Event& e) {
  const CharacterState& c = state_.character;
  const LocationElement* el = first_element(location_here(env_, c.position), ElementKind::kResourceNode);
  const ResourceNode* node = el == nullptr ? nullptr : env_.find_node(el->id);
  if (node == nullptr) {
    e = fail(e, FailReason::kNotANode, "no resource node here");
    return;
  }
  const int level = c.skill_level(node->skill);
  if (level < node->skill_level) {
    e = fail(e, FailReason::kInsufficientLevel,
             node->id + " needs " + node->skill + " level " + std::to_string(node->skill_level) + ", have " +
                 std::to_string(level));
    return;
  }
  e.delta.inventory[node->resource_item_id] = 1;
  SkillProgress p{level, 0};
  if (auto it = c.skills.find(node->skill); it != c.skills.end()) p = it->second;
  add_skill_xp(p.level, p.xp, node->xp_reward, max_level_of(node->skill));
  e.delta.skills[node->skill] = p;
}

void Simulator::do_fight(Event& e) {
  const CharacterState& c = state_.character;
  const LocationElement* el = first_element(location_here(env_, c.position), ElementKind::kMonster);
  const Monster* monster = el == nullptr ? nullptr : env_.find_monster(el->id);
  if (monster == nullptr) {
    e = fail(e, FailReason::kNoMonster, "no monster here");
    return;
  }
  StatVector player = effective_stats(env_, c, c.equipment);
  const int start_hp = std::max(1, player.hp - c.damage_taken);
  player.hp = start_hp;
  const CombatOutcome outcome = simulate(player, monster->stats);
  CombatSummary summary{monster->id, outcome.player_won(), outcome.turns, outcome.capped, outcome.player_hp,
                        outcome.monster_hp};
  if (!outcome.player_won()) {
    e = fail(e, FailReason::kCombatLoss,
             "lost to " + monster->id + (outcome.capped ? " (turn cap reached)" : ""));
    e.combat = summary;
    return;
  }
  e.combat = summary;
  e.delta.damage_taken = c.damage_taken + (start_hp - outcome.player_hp);
  e.delta.defeated[monster->id] = 1;
  const CounterRng rng(options_.seed);
  for (std::size_t i = 0; i < monster->drops.size(); ++i) {
    const Drop& d = monster->drops[i];
    const bool dropped = options_.mode == ExecMode::kDeterministic || d.rate >= 1.0 ||
                         rng.uniform(e.index, i) < d.rate;
    if (dropped && env_.find_item(d.item_id) != nullptr) e.delta.inventory[d.item_id] += 1;
  }
}

void Simulator::do_craft(const Action& a, Event& e) {
  const CharacterState& c = state_.character;
  const Recipe* recipe = env_.recipe_for(a.id);
  if (recipe == nullptr) {
    e = fail(e, FailReason::kUnknownItem, "no known recipe for '" + a.id + "'");
    return;
  }
  const Location* here = location_here(env_, c.position);
  if (first_element(here, ElementKind::kWorkshop) == nullptr) {
    e = fail(e, FailReason::kNotAWorkshop, "no workshop here");
    return;
  }
  if (find_element(here, ElementKind::kWorkshop, [&](const LocationElement& el) { return el.id == recipe->workshop; }) ==
      nullptr) {
    e = fail(e, FailReason::kWrongLocation, a.id + " is crafted at a " + recipe->workshop);
    return;
  }
  for (const auto& ing : recipe->ingredients) {
    const long long need = static_cast<long long>(ing.qty) * a.qty;
    if (c.count(ing.item_id) < need) {
      e = fail(e, FailReason::kMissingIngredients,
               "need " + std::to_string(need) + " " + ing.item_id + ", have " + std::to_string(c.count(ing.item_id)));
      return;
    }
  }
  const int level = c.skill_level(recipe->skill);
  if (level < recipe->skill_level) {
    e = fail(e, FailReason::kInsufficientLevel,
             a.id + " needs " + recipe->skill + " level " + std::to_string(recipe->skill_level) + ", have " +
                 std::to_string(level));
    return;
  }
  for (const auto& ing : recipe->ingredients) e.delta.inventory[ing.item_id] -= ing.qty * a.qty;
  e.delta.inventory[a.id] += recipe->output_qty * a.qty;
  SkillProgress p{level, 0};
  if (auto it = c.skills.find(recipe->skill); it != c.skills.end()) p = it->second;
  add_skill_xp(p.level, p.xp, craft_xp(recipe->skill_level) * a.qty, max_level_of(recipe->skill));
  e.delta.skills[recipe->skill] = p;
}

void Simulator::do_equip(const Action& a, Event& e) {
  const CharacterState& c = state_.character;
  const Item* item = env_.find_item(a.id);
  if (item == nullptr) {
    e = fail(e, FailReason::kUnknownItem, "unknown item '" + a.id + "'");
    return;
  }
  if (!item->equippable()) {
    e = fail(e, FailReason::kSlotConflict, "'" + a.id + "' cannot be equipped");
    return;
  }
  if (c.count(a.id) < 1) {
    e = fail(e, FailReason::kMissingIngredients, "'" + a.id + "' is not in the inventory");
    return;
  }
  if (item->level > c.level) {
    e = fail(e, FailReason::kInsufficientLevel,
             "'" + a.id + "' requires level " + std::to_string(item->level) + ", character is " + std::to_string(c.level));
    return;
  }
  const auto pos = c.equipment.free_position(item->slot);
  if (!pos) {
    e = fail(e, FailReason::kSlotConflict, "no free " + std::string(to_string(item->slot)) + " slot");
    return;
  }
  e.delta.inventory[a.id] = -1;
  e.delta.equipment[*pos] = a.id;
}

void Simulator::do_unequip(const Action& a, Event& e) {
  const CharacterState& c = state_.character;
  const auto pos = gear_position_from_string(a.id);
  if (!pos) {
    e = fail(e, FailReason::kSlotConflict, "unknown slot '" + a.id + "'");
    return;
  }
  const auto& item = c.equipment.at(*pos);
  if (!item) {
    e = fail(e, FailReason::kSlotConflict, "slot " + a.id + " is empty");
    return;
  }
  e.delta.inventory[*item] = 1;
  e.delta.equipment[*pos] = std::nullopt;
}

void Simulator::do_recycle(const Action& a, Event& e) {
  const CharacterState& c = state_.character;
  const Recipe* recipe = env_.recipe_for(a.id);
  if (recipe == nullptr) {
    e = fail(e, FailReason::kUnknownItem, "'" + a.id + "' has no known recipe to recycle");
    return;
  }
  if (c.count(a.id) < a.qty) {
    e = fail(e, FailReason::kMissingIngredients,
             "need " + std::to_string(a.qty) + " " + a.id + ", have " + std::to_string(c.count(a.id)));
    return;
  }
  e.delta.inventory[a.id] = -a.qty;
  for (const auto& ing : recipe->ingredients) {
    const long long back = static_cast<long long>(ing.qty) * a.qty / (2LL * recipe->output_qty);
    if (back > 0) e.delta.inventory[ing.item_id] += static_cast<int>(back);
  }
}

void Simulator::do_rest(Event& e) {
  if (state_.character.damage_taken != 0) e.delta.damage_taken = 0;
}

ExecutionLog run(const Task& task, const std::vector<Action>& actions, ExecOptions options) {
  ExecutionLog log;
  log.task_id = task.id;
  log.options = options;
  Simulator sim(task, options);
  log.events.reserve(actions.size());
  for (const auto& a : actions) {
    log.events.push_back(sim.step(a));
    if (!log.events.back().ok()) ++log.summary.failed_events;
  }
  log.summary.events = log.events.size();
  log.summary.success = goal_reached(task, sim.state());
  log.summary.final_state_hash = state_hash(sim.state());
  return log;
}

ExecutionLog run(const Task& task, const PlanProgram& program, ExecOptions options) {
  return run(task, flatten(program), options);
}

SimState replay(const Task& task, const ExecutionLog& log) {
  SimState s = init_state(task);
  for (const auto& e : log.events) {
    if (e.ok()) apply_delta(s, e.delta);
  }
  return s;
}

namespace {

json action_to_json(const Action& a) {
  json args = json::array();
  switch (a.kind) {
    case ActionKind::kMove: args = {a.x, a.y}; break;
    case ActionKind::kCraft:
    case ActionKind::kRecycle: args = {a.id, a.qty}; break;
    case ActionKind::kEquip:
    case ActionKind::kUnequip: args = {a.id}; break;
    default: break;
  }
  return {{"name", std::string(to_string(a.kind))}, {"args", std::move(args)}};
}

Action action_from_json(const json& j) {
  detail::ObjectReader r(j, "action");
  const std::string name = r.string("name");
  const json& args = r.array("args");
  r.finish();
  const auto kind = action_kind_from_string(name);
  if (!kind) detail::schema_fail("action.name", "unknown action '" + name + "'");
  Action a;
  a.kind = *kind;
  try {
    switch (*kind) {
      case ActionKind::kMove:
        a.x = args.at(0).get<int>();
        a.y = args.at(1).get<int>();
        break;
      case ActionKind::kCraft:
      case ActionKind::kRecycle:
        a.id = args.at(0).get<std::string>();
        a.qty = args.at(1).get<int>();
        break;
      case ActionKind::kEquip:
      case ActionKind::kUnequip: a.id = args.at(0).get<std::string>(); break;
      default: break;
    }
  } catch (const json::exception& ex) {
    detail::schema_fail("action.args", ex.what());
  }
  return a;
}

json delta_to_json(const StateDelta& d) {
  json out = json::object();
  if (!d.inventory.empty()) {
    json inv = json::object();
    for (const auto& [id, n] : d.inventory) inv[id] = n;
    out["inventory"] = std::move(inv);
  }
  if (d.position) out["position"] = {{"x", d.position->x}, {"y", d.position->y}};
  if (!d.equipment.empty()) {
    json eq = json::object();
    for (const auto& [pos, item] : d.equipment) eq[std::string(to_string(pos))] = item ? json(*item) : json(nullptr);
    out["equipment"] = std::move(eq);
  }
  if (!d.skills.empty()) {
    json sk = json::object();
    for (const auto& [name, p] : d.skills) sk[name] = {{"level", p.level}, {"xp", p.xp}};
    out["skills"] = std::move(sk);
  }
  if (d.damage_taken) out["damage_taken"] = *d.damage_taken;
  if (!d.defeated.empty()) {
    json df = json::object();
    for (const auto& [id, n] : d.defeated) df[id] = n;
    out["defeated"] = std::move(df);
  }
  return out;
}

StateDelta delta_from_json(const json& j) {
  detail::ObjectReader r(j, "delta");
  StateDelta d;
  if (const json* inv = r.find("inventory")) {
    for (auto it = inv->begin(); it != inv->end(); ++it) d.inventory[it.key()] = it.value().get<int>();
  }
  if (const json* pos = r.find("position")) d.position = Coord{pos->at("x").get<int>(), pos->at("y").get<int>()};
  if (const json* eq = r.find("equipment")) {
    for (auto it = eq->begin(); it != eq->end(); ++it) {
      const auto pos = gear_position_from_string(it.key());
      if (!pos) detail::schema_fail("delta.equipment", "unknown gear position '" + it.key() + "'");
      d.equipment[*pos] = it.value().is_null() ? std::nullopt : std::optional<std::string>(it.value().get<std::string>());
    }
  }
  if (const json* sk = r.find("skills")) {
    for (auto it = sk->begin(); it != sk->end(); ++it) {
      d.skills[it.key()] = SkillProgress{it.value().at("level").get<int>(), it.value().at("xp").get<int>()};
    }
  }
  if (const json* dt = r.find("damage_taken")) d.damage_taken = dt->get<int>();
  if (const json* df = r.find("defeated")) {
    for (auto it = df->begin(); it != df->end(); ++it) d.defeated[it.key()] = it.value().get<int>();
  }
  r.finish();
  return d;
}

}  // namespace

json event_to_json(const Event& e) {
  json out = {{"type", "event"},
              {"index", e.index},
              {"action", action_to_json(e.action)},
              {"outcome", e.ok() ? "ok" : "failed"},
              {"delta", delta_to_json(e.delta)}};
  if (e.failure) {
    out["reason"] = std::string(to_string(*e.failure));
    out["detail"] = e.detail;
  }
  if (e.combat) {
    out["combat"] = {{"monster", e.combat->monster_id},
                     {"winner", e.combat->player_won ? "player" : "monster"},
                     {"turns", e.combat->turns},
                     {"capped", e.combat->capped},
                     {"player_hp", e.combat->player_hp},
                     {"monster_hp", e.combat->monster_hp}};
  }
  return out;
}

Event event_from_json(const json& j) {
  detail::ObjectReader r(j, "event");
  Event e;
  r.string("type");
  e.index = static_cast<std::size_t>(r.integer("index"));
  e.action = action_from_json(r.required("action"));
  const std::string outcome = r.string("outcome");
  e.delta = delta_from_json(r.required("delta"));
  if (outcome == "failed") {
    const std::string reason = r.string("reason");
    e.failure = fail_reason_from_string(reason);
    if (!e.failure) detail::schema_fail("event.reason", "unknown reason '" + reason + "'");
    e.detail = r.string_or("detail", "");
  }
  if (const json* c = r.find("combat")) {
    detail::ObjectReader cr(*c, "event.combat");
    e.combat = CombatSummary{cr.string("monster"), cr.string("winner") == "player", cr.small_int("turns"),
                             cr.boolean("capped"), cr.small_int("player_hp"), cr.small_int("monster_hp")};
    cr.finish();
  }
  r.finish();
  return e;
}

std::string log_to_jsonl(const ExecutionLog& log) {
  std::string out;
  for (const auto& e : log.events) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  const json summary = {{"type", "summary"},
                        {"task_id", log.task_id},
                        {"mode", std::string(to_string(log.options.mode))},
                        {"seed", log.options.seed},
                        {"success", log.summary.success},
                        {"events", log.summary.events},
                        {"failed_events", log.summary.failed_events},
                        {"final_state_hash", log.summary.final_state_hash}};
  out += summary.dump();
  out += '\n';
  return out;
}

ExecutionLog log_from_jsonl(std::string_view text) {
  ExecutionLog log;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_summary = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (have_summary) detail::schema_fail("log", "lines after the summary");
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& ex) {
      detail::schema_fail("log", std::string("malformed line: ") + ex.what());
    }
    if (j.value("type", "") == "summary") {
      detail::ObjectReader r(j, "summary");
      r.string("type");
      log.task_id = r.string("task_id");
      const auto mode = exec_mode_from_string(r.string("mode"));
      if (!mode) detail::schema_fail("summary.mode", "unknown mode");
      log.options.mode = *mode;
      log.options.seed = r.required("seed").get<std::uint64_t>();
      log.summary.success = r.boolean("success");
      log.summary.events = static_cast<std::size_t>(r.integer("events"));
      log.summary.failed_events = static_cast<std::size_t>(r.integer("failed_events"));
      log.summary.final_state_hash = r.string("final_state_hash");
      r.finish();
      have_summary = true;
    } else {
      log.events.push_back(event_from_json(j));
    }
  }
  if (!have_summary) detail::schema_fail("log", "missing summary line");
  return log;
}

}  // namespace gearquest
