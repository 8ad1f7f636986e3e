#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "gearquest/gear_search.hpp"
#include "oracles.hpp"

using namespace gearquest;
using nlohmann::json;

namespace {

std::vector<std::vector<std::string>> id_lists(const std::vector<GearSet>& sets) {
  std::vector<std::vector<std::string>> out;
  for (const auto& s : sets) out.push_back(s.item_ids());
  return out;
}

json gear(const std::string& id, const std::string& slot, json stats, int level = 1) {
  return {{"id", id}, {"slot", slot}, {"level", level}, {"stats", std::move(stats)}};
}

json monster(const std::string& id, int level, json stats, json drops = json::array()) {
  return {{"id", id}, {"level", level}, {"stats", std::move(stats)}, {"drops", std::move(drops)}};
}

// Sword alone takes five strikes against the brute and dies to its fourth
// hit; the shield's hp and earth resistance cover the gap.
WorldDef sword_and_shield_world() {
  return fixtures::arena(json::array({gear("sword", "weapon", {{"attack", {{"fire", 10}}}}),
                                      gear("shield", "shield", {{"hp", 30}, {"resist", {{"earth", 20}}}}),
                                      gear("band", "ring", {{"hp", 5}})}),
                         json::array(), json::array(),
                         json::array({monster("brute", 1, {{"hp", 50}, {"attack", {{"earth", 30}}}})}));
}

Item random_item(std::mt19937_64& gen, int index) {
  static constexpr std::array<ItemSlot, 5> slots{ItemSlot::kWeapon, ItemSlot::kShield, ItemSlot::kHelmet,
                                                 ItemSlot::kAmulet, ItemSlot::kRing};
  std::uniform_int_distribution<int> pick(0, static_cast<int>(slots.size()) - 1);
  std::uniform_int_distribution<int> small(0, 12);
  Item it;
  it.id = "i" + std::to_string(index);
  it.slot = slots[static_cast<std::size_t>(pick(gen))];
  StatVector s;
  s.hp = small(gen) * 5;
  s.attack_of(Element::kFire) = small(gen);
  s.attack_of(Element::kEarth) = small(gen) / 2;
  s.amp_of(Element::kFire) = small(gen) * 3;
  s.resist_of(Element::kEarth) = small(gen) * 2;
  it.stats = s;
  return it;
}

}  // namespace

TEST(GearSearch, WolfNeedsOnlyTheSword) {
  const WorldDef& w = fixtures::toy_world();
  const auto sets = minimal_winning_gear(w, *w.find_monster("wolf"));
  EXPECT_EQ(id_lists(sets), (std::vector<std::vector<std::string>>{{"copper_sword"}}));
  const auto pool = items_at_or_below_level(w, 3);
  EXPECT_EQ(id_lists(sets), oracle::minimal_sets(w.find_monster("wolf")->stats, 3, pool));
}

TEST(GearSearch, SwordAndShieldTogether) {
  const WorldDef w = sword_and_shield_world();
  const Monster& brute = *w.find_monster("brute");
  EXPECT_EQ(id_lists(minimal_winning_gear(w, brute)), (std::vector<std::vector<std::string>>{{"shield", "sword"}}));
  const auto pool = items_at_or_below_level(w, 1);
  for (const Item& it : pool) EXPECT_FALSE(oracle::wins(1, {&it}, brute.stats)) << it.id;
}

TEST(GearSearch, EmptySetNeverWinsWithoutBaseAttack) {
  const WorldDef& w = fixtures::toy_world();
  for (const auto& [id, m] : w.monsters) {
    for (const auto& s : minimal_winning_gear(w, m)) EXPECT_FALSE(s.empty()) << id;
  }
}

TEST(GearSearch, EmptyPoolAgainstUnbeatable) {
  const Monster& golem = *fixtures::toy_world().find_monster("golem");
  EXPECT_TRUE(exhaustive_minimal_gear(golem, {}).empty());
  EXPECT_TRUE(minimal_winning_gear(golem, {}).empty());
}

TEST(GearSearch, SingleWinningWeapon) {
  const WorldDef& w = fixtures::toy_world();
  const std::vector<Item> pool{*w.find_item("copper_sword")};
  const auto sets = exhaustive_minimal_gear(*w.find_monster("wolf"), pool);
  EXPECT_EQ(id_lists(sets), (std::vector<std::vector<std::string>>{{"copper_sword"}}));
}

TEST(GearSearch, ExhaustiveRejectsLargePools) {
  std::mt19937_64 gen(1);
  std::vector<Item> pool;
  for (int i = 0; i <= static_cast<int>(kExhaustivePoolLimit); ++i) pool.push_back(random_item(gen, i));
  EXPECT_THROW(exhaustive_minimal_gear(*fixtures::toy_world().find_monster("wolf"), pool), std::invalid_argument);
}

TEST(GearSearch, SearchMatchesBruteForceOnRandomPools) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> size(1, 10);
  std::uniform_int_distribution<int> mhp(20, 260);
  std::uniform_int_distribution<int> matk(5, 45);
  std::uniform_int_distribution<int> level(1, 6);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Item> pool;
    const int n = size(gen);
    for (int i = 0; i < n; ++i) pool.push_back(random_item(gen, i));
    Monster m;
    m.id = "m";
    m.difficulty_level = level(gen);
    m.stats.hp = mhp(gen);
    m.stats.attack_of(Element::kEarth) = matk(gen);
    const auto expected = oracle::minimal_sets(m.stats, m.difficulty_level, pool);
    ASSERT_EQ(id_lists(minimal_winning_gear(m, pool)), expected) << "trial " << trial;
    ASSERT_EQ(id_lists(exhaustive_minimal_gear(m, pool)), expected) << "trial " << trial;
  }
}

TEST(GearSearch, PartitionAllMissing) {
  const WorldDef& w = fixtures::toy_world();
  const std::vector<std::string> ids{"amber_amulet", "steel_blade", "wooden_shield"};
  const auto p = partition_gear(GearSet::from_items(w, ids), {3, 5});
  EXPECT_TRUE(p.equipped.empty());
  EXPECT_EQ(p.missing, ids);
}

TEST(GearSearch, PartitionRejectsDegenerateCounts) {
  const WorldDef& w = fixtures::toy_world();
  const std::vector<std::string> ids{"amber_amulet", "steel_blade", "wooden_shield"};
  const GearSet g = GearSet::from_items(w, ids);
  EXPECT_THROW(partition_gear(g, {0, 7}), std::invalid_argument);
  EXPECT_THROW(partition_gear(g, {4, 7}), std::invalid_argument);
}

TEST(GearSearch, PartitionSeedSevenMatchesGolden) {
  const WorldDef& w = fixtures::toy_world();
  const std::vector<std::string> ids{"amber_amulet", "steel_blade", "wooden_shield"};
  const auto p = partition_gear(GearSet::from_items(w, ids), {2, 7});
  const json golden = json::parse(std::ifstream(fixtures::golden_dir() / "partition_seed7.json"));
  EXPECT_EQ(p.equipped, golden["equipped"].get<std::vector<std::string>>());
  EXPECT_EQ(p.missing, golden["missing"].get<std::vector<std::string>>());
  const auto again = partition_gear(GearSet::from_items(w, ids), {2, 7});
  EXPECT_EQ(again.missing, p.missing);
}

TEST(GearSearch, AuxiliaryVacuousWithoutOtherMonsters) {
  const WorldDef w = fixtures::drop_arena(1.0);
  AuxiliaryQuery q;
  q.target = w.find_monster("warden");
  q.solution = {"maul"};
  const auto aux = auxiliary_items(w, q);
  ASSERT_TRUE(aux.has_value());
  EXPECT_TRUE(aux->empty());
  EXPECT_FALSE(oracle::wins(1, {}, q.target->stats));
}

TEST(GearSearch, AuxiliaryEmptyWhenEquippedSuffices) {
  const WorldDef w = fixtures::drop_arena(1.0);
  AuxiliaryQuery q;
  q.target = w.find_monster("warden");
  q.equipped = {"club"};
  q.solution = {"club", "maul"};
  q.scenario_monsters = {w.find_monster("scavenger")};
  const auto aux = auxiliary_items(w, q);
  ASSERT_TRUE(aux.has_value());
  EXPECT_TRUE(aux->empty());
}

TEST(GearSearch, AuxiliaryPicksTheSeparatingWeapon) {
  const WorldDef w = fixtures::drop_arena(1.0);
  AuxiliaryQuery q;
  q.target = w.find_monster("warden");
  q.solution = {"maul"};
  q.scenario_monsters = {w.find_monster("scavenger")};
  const auto aux = auxiliary_items(w, q);
  ASSERT_TRUE(aux.has_value());
  EXPECT_EQ(*aux, std::vector<std::string>{"club"});

  // Independent check: among candidate sets of size <= 2, the smallest ones that
  // separate the two monsters are exactly {club}.
  std::vector<std::vector<std::string>> separating;
  const std::vector<std::string> candidates{"axe", "club"};
  auto separates = [&](const std::vector<std::string>& ids) {
    std::vector<const Item*> items;
    for (const auto& id : ids) items.push_back(w.find_item(id));
    return oracle::wins(1, items, w.find_monster("scavenger")->stats) &&
           !oracle::wins(1, items, q.target->stats);
  };
  for (const auto& id : candidates)
    if (separates({id})) separating.push_back({id});
  EXPECT_EQ(separating, (std::vector<std::vector<std::string>>{{"club"}}));
}

TEST(GearSearch, NoiseEmptyRequest) {
  NoiseQuery q;
  q.level = 5;
  q.obtainable = [](const std::string&) { return true; };
  EXPECT_TRUE(noise_items(fixtures::toy_world(), q, 0).empty());
}

TEST(GearSearch, NoiseQuotaLimitedByEligibleItems) {
  const WorldDef& w = fixtures::toy_world();
  NoiseQuery q;
  q.level = 5;
  q.closure_items = {"copper_sword", "ore", "wood"};
  q.excluded = {"copper_sword"};
  q.obtainable = [&](const std::string& id) { return q.closure_items.count(id) != 0; };

  std::vector<std::string> eligible;
  for (const auto& [id, item] : w.items) {
    const Recipe* r = w.recipe_for(id);
    if (!item.equippable() || r == nullptr || item.level > q.level) continue;
    if (q.excluded.count(id) != 0 || q.closure_items.count(id) != 0) continue;
    bool blocked = false;
    for (const auto& ing : r->ingredients) blocked = blocked || !q.obtainable(ing.item_id);
    if (blocked) eligible.push_back(id);
  }
  ASSERT_EQ(eligible, std::vector<std::string>{"leather_helmet"});
  EXPECT_EQ(noise_items(w, q, 3), eligible);
}
