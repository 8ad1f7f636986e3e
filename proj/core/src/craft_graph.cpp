#include "gearquest/craft_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gearquest {

AcquisitionRoute preferred_route(const WorldDef& world, std::string_view item_id) {
  const Item* item = world.find_item(item_id);
  if (item == nullptr) throw CraftError(std::string(item_id), "unknown item '" + std::string(item_id) + "'");

  const ResourceNode* best_node = nullptr;
  const Monster* best_monster = nullptr;
  bool craftable = false;
  for (const auto& route : item->sources) {
    switch (route.kind) {
      case AcquisitionRoute::Kind::kGather: {
        const ResourceNode* n = world.find_node(route.source_id);
        if (n != nullptr && (best_node == nullptr || std::tie(n->skill_level, n->id) <
                                                         std::tie(best_node->skill_level, best_node->id))) {
          best_node = n;
        }
        break;
      }
      case AcquisitionRoute::Kind::kDrop: {
        const Monster* m = world.find_monster(route.source_id);
        if (m != nullptr && (best_monster == nullptr || std::tie(m->difficulty_level, m->id) <
                                                            std::tie(best_monster->difficulty_level, best_monster->id))) {
          best_monster = m;
        }
        break;
      }
      case AcquisitionRoute::Kind::kCraft:
        craftable = world.recipe_for(item_id) != nullptr;
        break;
    }
  }
  if (best_node != nullptr) return {AcquisitionRoute::Kind::kGather, best_node->id};
  if (best_monster != nullptr) return {AcquisitionRoute::Kind::kDrop, best_monster->id};
  if (craftable) return {AcquisitionRoute::Kind::kCraft, std::string(item_id)};
  throw CraftError(std::string(item_id), "item '" + std::string(item_id) + "' has no acquisition route");
}

int planned_kills(int qty, double rate, DropModel model) {
  if (model == DropModel::kDeterministic || rate >= 1.0) return qty;
  return static_cast<int>(std::ceil(static_cast<double>(qty) / rate - 1e-9));
}

int DependencyClosure::action_count() const {
  int total = static_cast<int>(craft_steps.size());
  for (const auto& g : gather_steps) total += g.qty;
  for (const auto& f : fight_steps) total += f.kills;
  return total;
}

namespace {

// Items in the closure, every consumer listed before its ingredients.
std::vector<std::string> consumers_first(const WorldDef& world, std::span<const Ingredient> roots,
                                         std::map<std::string, AcquisitionRoute, std::less<>>& routes) {
  std::vector<std::string> postorder;
  std::set<std::string, std::less<>> done;
  // Explicit stack of (item, next ingredient index); the graph is acyclic by load.
  std::vector<std::pair<std::string, std::size_t>> stack;
  for (const auto& root : roots) {
    if (done.count(root.item_id) != 0) continue;
    stack.emplace_back(root.item_id, 0);
    done.insert(root.item_id);
    while (!stack.empty()) {
      auto& [id, next] = stack.back();
      auto route_it = routes.find(id);
      if (route_it == routes.end()) route_it = routes.emplace(id, preferred_route(world, id)).first;
      const Recipe* recipe =
          route_it->second.kind == AcquisitionRoute::Kind::kCraft ? world.recipe_for(id) : nullptr;
      if (recipe != nullptr && next < recipe->ingredients.size()) {
        const std::string child = recipe->ingredients[next++].item_id;
        if (done.insert(child).second) stack.emplace_back(child, 0);
        continue;
      }
      postorder.push_back(id);
      stack.pop_back();
    }
  }
  std::reverse(postorder.begin(), postorder.end());
  return postorder;
}

}  // namespace

DependencyClosure dependency_closure(const WorldDef& world, std::span<const Ingredient> roots, DropModel model) {
  for (const auto& r : roots) {
    if (r.qty < 1) throw std::invalid_argument("dependency_closure: quantity must be >= 1 for '" + r.item_id + "'");
  }
  std::map<std::string, AcquisitionRoute, std::less<>> routes;
  const std::vector<std::string> order = consumers_first(world, roots, routes);

  DependencyClosure out;
  for (const auto& r : roots) out.required[r.item_id] += r.qty;

  std::map<std::string, int, std::less<>> gathers;
  std::map<std::string, int, std::less<>> kills;
  std::set<Coord> coords;
  auto need_level = [&](const std::string& skill, int level) {
    int& current = out.required_levels[skill];
    current = std::max(current, level);
  };
  auto touch = [&](std::string_view location_id) {
    if (auto c = world.coords_of(location_id)) coords.insert(*c);
  };

  for (const auto& id : order) {
    const int demand = out.required[id];
    const AcquisitionRoute& route = routes.at(id);
    switch (route.kind) {
      case AcquisitionRoute::Kind::kGather: {
        const ResourceNode& node = *world.find_node(route.source_id);
        gathers[node.id] += demand;
        need_level(node.skill, node.skill_level);
        touch(node.location_id);
        break;
      }
      case AcquisitionRoute::Kind::kDrop: {
        const Monster& m = *world.find_monster(route.source_id);
        double rate = 1.0;
        for (const auto& d : m.drops) {
          if (d.item_id == id) rate = d.rate;
        }
        // Every kill drops each listed item, so one batch of kills serves all of them.
        int& k = kills[m.id];
        k = std::max(k, planned_kills(demand, rate, model));
        touch(m.location_id);
        break;
      }
      case AcquisitionRoute::Kind::kCraft: {
        const Recipe& recipe = *world.recipe_for(id);
        const int runs = (demand + recipe.output_qty - 1) / recipe.output_qty;
        out.craft_steps.push_back(CraftStep{id, runs});
        for (const auto& ing : recipe.ingredients) out.required[ing.item_id] += ing.qty * runs;
        need_level(recipe.skill, recipe.skill_level);
        const auto workshops = world.workshop_coords(recipe.workshop);
        if (!workshops.empty()) coords.insert(workshops.front());
        break;
      }
    }
  }
  // Consumers were visited first; crafting runs the other way.
  std::reverse(out.craft_steps.begin(), out.craft_steps.end());

  for (const auto& [node_id, qty] : gathers) {
    out.gather_steps.push_back(GatherStep{node_id, world.find_node(node_id)->resource_item_id, qty});
  }
  for (const auto& [monster_id, k] : kills) out.fight_steps.push_back(FightStep{monster_id, k});
  out.locations_touched.assign(coords.begin(), coords.end());
  return out;
}

DependencyClosure dependency_closure(const WorldDef& world, std::string_view item_id, int qty, DropModel model) {
  const Ingredient root{std::string(item_id), qty};
  return dependency_closure(world, std::span<const Ingredient>(&root, 1), model);
}

int cost(const WorldDef& world, std::string_view item_id) { return dependency_closure(world, item_id, 1).action_count(); }

int total_difficulty(const WorldDef& world, std::span<const std::string> missing) {
  int total = static_cast<int>(missing.size());
  for (const auto& id : missing) total += cost(world, id);
  return total;
}

void add_skill_xp(int& level, int& xp, int gained, int max_level) {
  xp += gained;
  while (level < max_level && xp >= xp_threshold(level)) {
    xp -= xp_threshold(level);
    ++level;
  }
  if (level >= max_level) xp = 0;
}

std::vector<LevelingStep> leveling_schedule(const WorldDef& world, std::string_view profession, int from_level,
                                            int to_level) {
  if (from_level > to_level) {
    throw std::invalid_argument("leveling_schedule: from_level " + std::to_string(from_level) +
                                " exceeds to_level " + std::to_string(to_level));
  }
  std::vector<LevelingStep> out;
  int level = from_level;
  int xp = 0;
  while (level < to_level) {
    const ResourceNode* best = nullptr;
    for (const auto& [id, node] : world.resource_nodes) {
      if (node.skill != profession || node.skill_level > level || node.xp_reward <= 0) continue;
      if (best == nullptr || node.xp_reward > best->xp_reward) best = &node;
    }
    if (best == nullptr) {
      throw CraftError(std::string(profession), "profession '" + std::string(profession) +
                                                    "' has no xp source at level " + std::to_string(level));
    }
    const int needed = xp_threshold(level) - xp;
    const int gathers = (needed + best->xp_reward - 1) / best->xp_reward;
    if (!out.empty() && out.back().node_id == best->id) {
      out.back().gathers += gathers;
    } else {
      out.push_back(LevelingStep{best->id, gathers});
    }
    add_skill_xp(level, xp, gathers * best->xp_reward, to_level);
  }
  return out;
}

}  // namespace gearquest
