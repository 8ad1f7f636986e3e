#include "gearquest/prompt.hpp"

#include <algorithm>
#include <sstream>

#include "gearquest/combat.hpp"
#include "gearquest/hash.hpp"

namespace gearquest {

namespace {

constexpr std::string_view kTemplate = R"(You are playing a turn-based role-playing game on a rectangular grid. Your job is to write a complete plan, as a short program, that reaches the goal below. The program is run exactly once, action by action, with no feedback while it runs, so every step must be worked out in advance from the information given here.

# Goal

{{goal}}

# How the world works

The map is a grid of {{grid}} cells; coordinates are written (x, y) and start at (0, 0). Every location listed below is identified only by its coordinates. A location can hold resource nodes, workshops and monsters. Moving to any cell of the map is a single action regardless of distance.

Resource nodes produce one unit of their resource per gather action. Gathering requires the listed profession level and grants the listed experience to that profession. A profession advances from level L to level L+1 after collecting 100 * L experience; surplus experience carries over. Crafting also grants 5 * (recipe level) experience per crafted batch to the recipe's profession.

Recipes are crafted at the named workshop, which must be at your current location. One craft action with quantity q consumes q times the listed ingredients and produces q times the listed output. Crafting requires the listed profession level. Recycling q units of a craftable item gives back half (rounded down) of the ingredients used to make them.

Equipment has nine slots: weapon, shield, helmet, body_armor, leg_armor, boots, amulet, ring1 and ring2. A ring goes into ring1 if it is free, otherwise into ring2. Each slot holds one item. An item can only be equipped from the inventory, only into a free slot of its kind, and only if your character level is at least the item level. Unequipping puts the item back into the inventory.

# Combat

A fight is with the monster at your current location. You strike first, then the monster, alternating. Damage of one strike is computed per element (fire, earth, water, air) as floor(attack * (100 + damage amplification) * (100 - target resistance) / 10000), never below zero, and the four elements are summed. Your stats are your base stats plus the stats of every equipped item; your base hit points are 100 + 10 * level and your base attack, amplification and resistance are zero. The side whose hit points reach zero loses. If neither side has lost after 50 strikes in total, you lose. Losing a fight changes nothing except that the fight counts as failed. Damage you take stays with you until you rest, and a fight starts with your current hit points. Defeating a monster gives you each of its drops with the listed probability.

# Your character

{{character}}

# Locations

{{locations}}

# Items

Each item line shows its slot, required level and the stats it adds when equipped. Materials have no slot.

{{items}}

# Recipes

{{recipes}}

# Resource nodes

{{nodes}}

# Monsters

Monster stats are hit points, attack per element, damage amplification per element and resistance per element (percentages).

{{monsters}}

# Actions

Your program may call only these functions:

- move(x, y): go to the cell (x, y).
- gather(): gather once at the resource node at your location.
- fight(): fight the monster at your location once.
- craft(item_id, quantity): craft `quantity` batches of item_id at the workshop at your location.
- equip(item_id): equip an item from your inventory.
- unequip(slot): unequip the item in the named slot (weapon, shield, helmet, body_armor, leg_armor, boots, amulet, ring1, ring2).
- recycle(item_id, quantity): recycle items from your inventory.
- rest(): recover all lost hit points.

# Output format

Reply with one Python code block containing only calls to the functions above. Item ids and slot names are quoted strings; coordinates and quantities are integer literals. The only control structure allowed is a for loop over range with a positive integer literal, for example:

```python
move(2, 3)
for i in range(4):
    gather()
```

Loops may be nested at most two deep. Variables, assignments, if, while, def, import and any other Python features are not allowed, and a program using them is rejected as a whole. A failing action (wrong location, missing ingredients, too low a level, a lost fight) is skipped and the program continues with the next action. Plans longer than 10000 actions after unrolling loops are rejected.
)";

std::string stat_terms(const StatVector& s) {
  std::vector<std::string> parts;
  if (s.hp != 0) parts.push_back("hp " + std::string(s.hp > 0 ? "+" : "") + std::to_string(s.hp));
  for (Element e : kAllElements) {
    const std::string name(to_string(e));
    if (s.attack_of(e) != 0) parts.push_back(name + " attack " + std::to_string(s.attack_of(e)));
    if (s.amp_of(e) != 0) parts.push_back(name + " amplification " + std::to_string(s.amp_of(e)) + "%");
    if (s.resist_of(e) != 0) parts.push_back(name + " resistance " + std::to_string(s.resist_of(e)) + "%");
  }
  if (parts.empty()) return "no stats";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ", ";
    out += parts[i];
  }
  return out;
}

std::string coord_text(Coord c) { return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")"; }

std::string where(const WorldDef& env, const std::string& location_id) {
  const auto c = env.coords_of(location_id);
  return c ? coord_text(*c) : "(unknown)";
}

std::string goal_text(const Task& task) {
  const WorldDef& env = task.environment;
  if (task.kind == TaskKind::kCombat) {
    const Monster* m = env.find_monster(task.target);
    std::string out = "Defeat the monster " + task.target;
    if (m != nullptr) out += " (" + m->name + ") at " + where(env, m->location_id);
    out += ". Your current equipment is not enough to win this fight. Work out which additional gear wins it, obtain that gear, equip it and then fight.";
    return out;
  }
  const Item* item = env.find_item(task.target);
  return "Obtain at least one " + task.target + (item != nullptr ? " (" + item->name + ")" : "") +
         " and hold it in your inventory or equipment when the program ends.";
}

std::string character_text(const Task& task) {
  const CharacterState& c = task.character;
  std::ostringstream out;
  out << "- Level: " << c.level << "\n";
  out << "- Position: " << coord_text(c.position) << "\n";
  out << "- Base stats: " << stat_terms(c.base_stats) << "\n";
  out << "- Professions:";
  if (c.skills.empty()) out << " none";
  for (const auto& [name, p] : c.skills) out << " " << name << " level " << p.level << " (" << p.xp << " xp);";
  out << "\n- Inventory:";
  if (c.inventory.empty()) out << " empty";
  for (const auto& [id, qty] : c.inventory) out << " " << id << " x" << qty << ";";
  out << "\n- Equipment:";
  if (c.equipment.empty()) out << " nothing";
  for (std::size_t i = 0; i < kGearPositionCount; ++i) {
    const auto pos = static_cast<GearPosition>(i);
    if (const auto& id = c.equipment.at(pos)) out << " " << to_string(pos) << " = " << *id << ";";
  }
  return out.str();
}

std::string locations_text(const WorldDef& env) {
  std::vector<const Location*> locs;
  for (const auto& [id, loc] : env.locations) locs.push_back(&loc);
  std::sort(locs.begin(), locs.end(), [](const Location* a, const Location* b) { return a->coords < b->coords; });
  std::ostringstream out;
  for (const Location* loc : locs) {
    out << "- " << coord_text(loc->coords) << " " << loc->name << ":";
    for (const auto& e : loc->elements) out << " " << to_string(e.kind) << " " << e.id << ";";
    out << "\n";
  }
  std::string s = out.str();
  if (!s.empty()) s.pop_back();
  return s.empty() ? "(none)" : s;
}

std::string items_text(const WorldDef& env) {
  std::ostringstream out;
  for (const auto& [id, item] : env.items) {
    out << "- " << id << " (" << item.name << "): ";
    if (item.equippable()) {
      out << to_string(item.slot) << ", level " << item.level << ", " << stat_terms(item.bonus());
    } else {
      out << "material, level " << item.level;
    }
    out << "\n";
  }
  std::string s = out.str();
  if (!s.empty()) s.pop_back();
  return s.empty() ? "(none)" : s;
}

std::string recipes_text(const WorldDef& env) {
  std::ostringstream out;
  for (const auto& [id, r] : env.recipes) {
    out << "- " << r.output_qty << " x " << id << " <- ";
    for (std::size_t i = 0; i < r.ingredients.size(); ++i) {
      if (i > 0) out << " + ";
      out << r.ingredients[i].qty << " x " << r.ingredients[i].item_id;
    }
    out << " at a " << r.workshop << ", needs " << r.skill << " level " << r.skill_level << "\n";
  }
  std::string s = out.str();
  if (!s.empty()) s.pop_back();
  return s.empty() ? "(none)" : s;
}

std::string nodes_text(const WorldDef& env) {
  std::ostringstream out;
  for (const auto& [id, n] : env.resource_nodes) {
    out << "- " << id << " at " << where(env, n.location_id) << ": gives " << n.resource_item_id << ", needs "
        << n.skill << " level " << n.skill_level << ", grants " << n.xp_reward << " xp\n";
  }
  std::string s = out.str();
  if (!s.empty()) s.pop_back();
  return s.empty() ? "(none)" : s;
}

std::string monsters_text(const WorldDef& env) {
  std::ostringstream out;
  for (const auto& [id, m] : env.monsters) {
    out << "- " << id << " (" << m.name << ") at " << where(env, m.location_id) << ", level " << m.difficulty_level
        << ": " << stat_terms(m.stats);
    if (!m.drops.empty()) {
      out << "; drops";
      for (std::size_t i = 0; i < m.drops.size(); ++i) {
        std::ostringstream rate;
        rate << m.drops[i].rate;
        out << (i == 0 ? " " : ", ") << m.drops[i].item_id << " (probability " << rate.str() << ")";
      }
    }
    out << "\n";
  }
  std::string s = out.str();
  if (!s.empty()) s.pop_back();
  return s.empty() ? "(none)" : s;
}

void substitute(std::string& text, std::string_view key, const std::string& value) {
  const std::string marker = "{{" + std::string(key) + "}}";
  const auto pos = text.find(marker);
  if (pos != std::string::npos) text.replace(pos, marker.size(), value);
}

}  // namespace

std::string_view prompt_template() { return kTemplate; }

std::string prompt_template_hash() {
  return sha256_hex(std::string(kPromptTemplateVersion) + "\n" + std::string(kTemplate));
}

std::string render_prompt(const Task& task) {
  const WorldDef& env = task.environment;
  std::string text(kTemplate);
  substitute(text, "goal", goal_text(task));
  substitute(text, "grid", std::to_string(env.grid.width) + " by " + std::to_string(env.grid.height) + " (width by height)");
  substitute(text, "character", character_text(task));
  substitute(text, "locations", locations_text(env));
  substitute(text, "items", items_text(env));
  substitute(text, "recipes", recipes_text(env));
  substitute(text, "nodes", nodes_text(env));
  substitute(text, "monsters", monsters_text(env));
  return text;
}

std::size_t token_proxy_count(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

}  // namespace gearquest
