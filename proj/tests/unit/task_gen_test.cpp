#include <gtest/gtest.h>

#include <fstream>

#include "fixtures.hpp"
#include "gearquest/executor.hpp"
#include "gearquest/task_gen.hpp"
#include "oracles.hpp"

using namespace gearquest;
using nlohmann::json;

namespace {

std::vector<ActionKind> kinds(const PlanProgram& p) {
  std::vector<ActionKind> out;
  for (const auto& a : flatten(p)) out.push_back(a.kind);
  return out;
}

std::string reason_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const TaskError& e) {
    return e.reason();
  }
  return "";
}

}  // namespace

TEST(TaskGen, WeakestMonsterOneMissing) {
  const Task t = fixtures::toy_task("slime", 1);
  EXPECT_EQ(t.kind, TaskKind::kCombat);
  EXPECT_EQ(t.missing, std::vector<std::string>{"stick"});
  EXPECT_TRUE(t.equipped.empty());
  EXPECT_EQ(t.difficulty, 2);
  EXPECT_EQ(t.difficulty, oracle::difficulty(fixtures::toy_world(), t.missing));
  EXPECT_EQ(t.bracket, 1);
}

TEST(TaskGen, SameSeedSameBytes) {
  EXPECT_EQ(serialize_task(fixtures::toy_task("golem", 2, true, 2)),
            serialize_task(fixtures::toy_task("golem", 2, true, 2)));
}

TEST(TaskGen, TaskJsonRoundTrip) {
  const Task t = fixtures::toy_task("golem", 2, false, 2);
  EXPECT_EQ(deserialize_task(serialize_task(t)), t);
  EXPECT_EQ(task_from_json(task_to_json(t)), t);
}

TEST(TaskGen, NoiseItemsCarryUnobtainableRecipes) {
  const Task t = fixtures::toy_task("slime", 1, false, 2);
  ASSERT_EQ(t.noise.size(), 2u);
  const WorldDef& env = t.environment;
  for (const auto& id : t.noise) {
    const Item* item = env.find_item(id);
    ASSERT_NE(item, nullptr) << id;
    EXPECT_TRUE(item->equippable());
    const Recipe* r = env.recipe_for(id);
    ASSERT_NE(r, nullptr) << id;
    bool blocked = false;
    for (const auto& ing : r->ingredients) {
      const Item* in = env.find_item(ing.item_id);
      blocked = blocked || in == nullptr || in->sources.empty();
    }
    EXPECT_TRUE(blocked) << id;
    for (const auto& alt : t.alternatives)
      EXPECT_EQ(std::count(alt.begin(), alt.end(), id), 0) << id;
  }
}

TEST(TaskGen, ShortNoiseQuotaWarns) {
  const Task t = fixtures::toy_task("slime", 1, false, 50);
  EXPECT_LT(t.noise.size(), 50u);
  EXPECT_FALSE(t.warnings.empty());
}

TEST(TaskGen, MissingIsOneOfTheAlternatives) {
  const Task t = fixtures::toy_task("golem", 2);
  EXPECT_EQ(t.missing.size(), 2u);
  EXPECT_NE(std::find(t.alternatives.begin(), t.alternatives.end(), t.missing), t.alternatives.end());
  std::vector<std::string> full = t.missing;
  full.insert(full.end(), t.equipped.begin(), t.equipped.end());
  std::sort(full.begin(), full.end());
  const Monster& golem = *fixtures::toy_world().find_monster("golem");
  const auto expected = oracle::minimal_sets(golem.stats, 5, items_at_or_below_level(fixtures::toy_world(), 5));
  EXPECT_NE(std::find(expected.begin(), expected.end(), full), expected.end());
}

TEST(TaskGen, EquippedItemsAreWornNotCarried) {
  const Task t = fixtures::toy_task("golem", 1);
  for (const auto& id : t.equipped) {
    EXPECT_TRUE(t.character.equipment.contains(id)) << id;
    EXPECT_EQ(t.character.count(id), 0) << id;
  }
}

TEST(TaskGen, BaseTaskSetsProfessionsToRequiredLevels) {
  const Task t = fixtures::toy_task("golem", 3);
  const DependencyClosure c = task_closure(t);
  ASSERT_FALSE(c.required_levels.empty());
  for (const auto& [skill, level] : c.required_levels) EXPECT_EQ(t.character.skill_level(skill), level) << skill;
}

TEST(TaskGen, LevelingTaskStartsAtOne) {
  const Task t = fixtures::toy_task("golem", 3, true);
  for (const auto& [skill, progress] : t.character.skills) EXPECT_EQ(progress.level, 1) << skill;
  const auto plan = flatten(canonical_solution(t));
  ASSERT_FALSE(plan.empty());
  std::size_t first_gather = 0;
  while (plan[first_gather].kind != ActionKind::kGather) ++first_gather;
  for (std::size_t i = 0; i < first_gather; ++i) EXPECT_EQ(plan[i].kind, ActionKind::kMove);
  EXPECT_TRUE(run(t, plan).summary.success);
}

TEST(TaskGen, SwordPlanShape) {
  const Task t = fixtures::toy_task("wolf", 1);
  ASSERT_EQ(t.missing, std::vector<std::string>{"copper_sword"});
  EXPECT_EQ(t.difficulty, 5);
  const std::vector<ActionKind> expected{ActionKind::kMove,  ActionKind::kGather, ActionKind::kGather,
                                         ActionKind::kMove,  ActionKind::kGather, ActionKind::kMove,
                                         ActionKind::kCraft, ActionKind::kEquip,  ActionKind::kMove,
                                         ActionKind::kFight};
  EXPECT_EQ(kinds(canonical_solution(t)), expected);
  EXPECT_TRUE(run(t, canonical_solution(t)).summary.success);
}

TEST(TaskGen, CraftTaskRawMaterial) {
  const Task t = generate_craft_task(fixtures::toy_world(), "ore", {1, false, 0, 7});
  EXPECT_EQ(t.kind, TaskKind::kCraft);
  EXPECT_EQ(t.difficulty, 2);
  const auto k = kinds(canonical_solution(t));
  EXPECT_EQ(k, (std::vector<ActionKind>{ActionKind::kMove, ActionKind::kGather}));
  EXPECT_TRUE(run(t, canonical_solution(t)).summary.success);
}

TEST(TaskGen, CraftTaskDifficultyIsOnePlusCost) {
  const WorldDef& w = fixtures::toy_world();
  for (const char* id : {"copper_ring", "copper_sword", "wooden_shield", "steel_blade", "amber_amulet"}) {
    const Task t = generate_craft_task(w, id, {1, false, 0, 7});
    EXPECT_EQ(t.difficulty, 1 + oracle::cost(w, id)) << id;
    EXPECT_EQ(serialize_task(t), serialize_task(generate_craft_task(w, id, {1, false, 0, 7})));
  }
}

TEST(TaskGen, CraftTaskErrors) {
  const WorldDef& w = fixtures::toy_world();
  EXPECT_EQ(reason_of([&] { generate_craft_task(w, "leather_helmet", {}); }), "craft_requires_combat");
  json doc = world_to_json(w);
  doc["items"].push_back({{"id", "gem"}, {"slot", "none"}, {"level", 1}});
  doc["items"].push_back({{"id", "crown"}, {"slot", "helmet"}, {"level", 1}, {"stats", {{"hp", 5}}}});
  doc["recipes"].push_back({{"output", "crown"}, {"skill", "mining"}, {"skill_level", 1}, {"workshop", "forge"},
                            {"ingredients", {{{"item", "gem"}, {"qty", 1}}}}});
  const WorldDef with_noise = world_from_json(doc, "toy");
  EXPECT_EQ(reason_of([&] { generate_craft_task(with_noise, "crown", {}); }), "uncraftable");
}

TEST(TaskGen, CombatTaskErrors) {
  const WorldDef& w = fixtures::toy_world();
  EXPECT_EQ(reason_of([&] { generate_combat_task(w, "wolf", {2, false, 0, 1}); }), "invalid_task");
  json doc = world_to_json(w);
  for (auto& m : doc["monsters"])
    if (m["id"] == "slime") m["stats"]["hp"] = 100000;
  EXPECT_EQ(reason_of([&] { generate_combat_task(world_from_json(doc, "toy"), "slime", {1, false, 0, 1}); }),
            "infeasible_target");
}

TEST(TaskGen, SuiteSpecFromConfig) {
  const json j = json::parse(std::ifstream(fixtures::config_dir() / "suite.json"));
  const SuiteSpec spec = suite_spec_from_json(j);
  EXPECT_EQ(spec.per_bracket_count, 20);
  EXPECT_EQ(spec.brackets.ranges.size(), 9u);
  EXPECT_EQ(suite_spec_from_json(suite_spec_to_json(spec)).brackets, spec.brackets);
}

TEST(TaskGen, EmptySuite) {
  SuiteSpec spec;
  spec.per_bracket_count = 0;
  const Suite s = generate_suite(fixtures::reference_world(), spec);
  EXPECT_TRUE(s.tasks.empty());
  EXPECT_TRUE(s.complete());
}

TEST(TaskGen, BracketTable) {
  const BracketTable& b = default_brackets();
  EXPECT_EQ(b.bracket_of(2), 1);
  EXPECT_EQ(b.bracket_of(97), 9);
  EXPECT_EQ(b.bracket_of(1), 0);
  EXPECT_EQ(b.bracket_of(98), 0);
  EXPECT_EQ(brackets_from_json(brackets_to_json(b)), b);
  EXPECT_THROW(brackets_from_json(json::array({json::array({2, 4}), json::array({6, 9})})), TaskError);
}
