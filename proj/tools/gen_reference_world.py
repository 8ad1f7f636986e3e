#!/usr/bin/env python3
"""Generates the reference world bundle (data/reference_world).

Output is fully determined by the constants below; rerunning rewrites the
same bytes. Monster stats are tuned against a closed-form fight model so that
each monster needs a chosen number of gear pieces.
"""

import argparse
import itertools
import json
import math
import random
from pathlib import Path

ELEMENTS = ["fire", "earth", "water", "air"]
TIER_LEVELS = [1, 5, 10, 15, 20, 25, 30, 35]
GRID_W, GRID_H = 10, 7
TURN_CAP = 50

# (id, profession, level); 17 gatherable resource types.
RESOURCES = [
    ("copper_ore", "mining", 1), ("iron_ore", "mining", 5), ("coal", "mining", 10),
    ("gold_ore", "mining", 20), ("mithril_ore", "mining", 30), ("adamantite_ore", "mining", 35),
    ("ash_wood", "woodcutting", 1), ("spruce_wood", "woodcutting", 10),
    ("birch_wood", "woodcutting", 20), ("maple_wood", "woodcutting", 30),
    ("gudgeon", "fishing", 1), ("shrimp", "fishing", 10), ("trout", "fishing", 20), ("bass", "fishing", 30),
    ("sunflower", "alchemy", 1), ("nettle", "alchemy", 15), ("glowstem", "alchemy", 25),
]

REFINED = {
    "copper_ore": "copper_bar", "iron_ore": "iron_bar", "coal": "coke", "gold_ore": "gold_bar",
    "mithril_ore": "mithril_bar", "adamantite_ore": "adamantite_bar",
    "ash_wood": "ash_plank", "spruce_wood": "spruce_plank", "birch_wood": "birch_plank", "maple_wood": "maple_plank",
    "gudgeon": "cooked_gudgeon", "shrimp": "cooked_shrimp", "trout": "cooked_trout", "bass": "cooked_bass",
    "sunflower": "sunflower_extract", "nettle": "nettle_extract", "glowstem": "glowstem_extract",
}
WORKSHOP_OF = {"mining": "forge", "woodcutting": "workbench", "fishing": "cooking_fire", "alchemy": "alchemy_lab"}

# (id, name, level, part dropped)
MONSTERS = [
    ("chicken", "Chicken", 1, "feather"), ("slime", "Green Slime", 1, "slime_gel"),
    ("goblin", "Goblin", 2, "goblin_ear"), ("rat", "Giant Rat", 3, "rat_tail"),
    ("wolf", "Grey Wolf", 5, "wolf_pelt"), ("bandit", "Bandit", 6, "bandit_mask"),
    ("spider", "Cave Spider", 8, "spider_silk"),
    ("skeleton", "Skeleton", 10, "old_bone"), ("boar", "Wild Boar", 11, "boar_hide"),
    ("harpy", "Harpy", 13, "harpy_plume"),
    ("ogre", "Ogre", 15, "ogre_tooth"), ("naga", "Naga", 16, "naga_scale"), ("wraith", "Wraith", 18, "ectoplasm"),
    ("troll", "Troll", 20, "troll_hide"), ("golem", "Stone Golem", 21, "golem_core"),
    ("basilisk", "Basilisk", 23, "basilisk_eye"),
    ("wyvern", "Wyvern", 25, "wyvern_scale"), ("yeti", "Yeti", 26, "yeti_fur"), ("lich", "Lich", 28, "lich_dust"),
    ("minotaur", "Minotaur", 30, "minotaur_horn"), ("kraken", "Kraken", 31, "kraken_ink"),
    ("phoenix", "Phoenix", 33, "phoenix_ash"),
    ("behemoth", "Behemoth", 35, "behemoth_plate"), ("titan", "Titan", 36, "titan_shard"),
    ("dragon", "Elder Dragon", 38, "dragon_heart"),
]

# Gear dropped directly by a monster: (monster, item id, name, slot, stats).
DROP_GEAR = [
    ("goblin", "goblin_shiv", "Goblin Shiv", "weapon", {"attack": {"earth": 9}}),
    ("bandit", "bandit_hood", "Bandit Hood", "helmet", {"hp": 30, "resist": {"fire": 6, "earth": 6, "water": 6, "air": 6}}),
    ("boar", "tusk_charm", "Tusk Charm", "amulet", {"hp": 45}),
    ("naga", "naga_trident", "Naga Trident", "weapon", {"attack": {"water": 44}}),
    ("lich", "lich_ring", "Lich Ring", "ring", {"dmg_amp": {"fire": 18, "earth": 18, "water": 18, "air": 18}}),
]

ARMOR_KINDS = ["shield", "helmet", "body_armor", "leg_armor", "boots"]
TIER_NAMES = ["copper", "iron", "steel", "gilded", "golden", "runic", "mithril", "adamant"]


def tier_of_level(level):
    return max(i for i, lv in enumerate(TIER_LEVELS) if lv <= level)


def resource_for(profession, level):
    best = None
    for rid, prof, lv in RESOURCES:
        if prof == profession and lv <= level:
            best = rid
    return best


def gear_stats(kind, variant, t):
    """Stats of the tier-t item; every stat grows with t so higher tiers dominate."""
    if kind == "weapon":
        return {"attack": {variant: 10 + 7 * t}}
    if kind == "amulet":
        if variant == "power":
            return {"dmg_amp": {e: 10 + 5 * t for e in ELEMENTS}}
        return {"hp": 25 + 15 * t}
    if kind == "ring":
        if variant == "ruby":
            return {"dmg_amp": {e: 6 + 3 * t for e in ELEMENTS}}
        return {"hp": 15 + 10 * t, "resist": {e: 2 + t for e in ELEMENTS}}
    scale = 2 if kind == "body_armor" else 1
    if variant == "guard":
        return {"hp": scale * (10 + 8 * t), "resist": {e: scale * (3 + 2 * t) for e in ELEMENTS}}
    return {"hp": scale * (25 + 18 * t), "resist": {e: scale * (1 + t) for e in ELEMENTS}}


def variants_of(kind):
    if kind == "weapon":
        return ELEMENTS
    if kind == "amulet":
        return ["power", "vital"]
    if kind == "ring":
        return ["ruby", "stone"]
    return ["guard", "vital"]


def profession_of(kind):
    if kind in ("weapon", "shield", "helmet"):
        return "mining"
    if kind in ("body_armor", "leg_armor", "boots"):
        return "woodcutting"
    return "alchemy"


def secondary_profession(kind):
    return {"mining": "woodcutting", "woodcutting": "fishing", "alchemy": "mining"}[profession_of(kind)]


def gear_recipe(kind, variant, t, drop_sources):
    """Ingredient list; cost grows roughly linearly with tier."""
    level = TIER_LEVELS[t]
    main_raw = resource_for(profession_of(kind), level)
    second_raw = resource_for(secondary_profession(kind), level)
    refined_qty = [0, 0, 1, 2, 3, 4, 5, 6][t]
    raw_qty = [1, 2, 2, 2, 2, 3, 3, 4][t]
    ingredients = []
    if refined_qty > 0:
        ingredients.append((REFINED[main_raw], refined_qty))
        ingredients.append((second_raw, raw_qty))
    else:
        ingredients.append((main_raw, raw_qty))
        if t == 1:
            ingredients.append((second_raw, 1))
    if t >= 2 and kind in ("body_armor", "boots", "ring"):
        # Parts from low-level monsters keep the drop sources beatable with a few spare pieces.
        source = drop_sources[(t + (ARMOR_KINDS + ["ring"]).index(kind)) % len(drop_sources)]
        ingredients.append((source, 1))
    return ingredients


def stat_block(stats):
    out = {"hp": stats.get("hp", 0)}
    for key in ("attack", "dmg_amp", "resist"):
        out[key] = {e: v for e, v in stats.get(key, {}).items() if v != 0}
    return out


def element_damage(att, amp, res):
    return max(0, att * (100 + max(amp, -100)) * (100 - min(res, 100)) // 10000)


def player_wins(level, items, monster):
    hp = 100 + 10 * level
    att = {e: 0 for e in ELEMENTS}
    amp = {e: 0 for e in ELEMENTS}
    res = {e: 0 for e in ELEMENTS}
    for s in items:
        hp += s.get("hp", 0)
        for e, v in s.get("attack", {}).items():
            att[e] += v
        for e, v in s.get("dmg_amp", {}).items():
            amp[e] += v
        for e, v in s.get("resist", {}).items():
            res[e] += v
    p_dmg = sum(element_damage(att[e], amp[e], monster["resist"].get(e, 0)) for e in ELEMENTS)
    m_dmg = sum(element_damage(monster["attack"].get(e, 0), 0, res[e]) for e in ELEMENTS)
    if p_dmg == 0:
        return False
    n_p = math.ceil(monster["hp"] / p_dmg)
    if 2 * n_p - 1 > TURN_CAP:
        return False
    if m_dmg == 0:
        return True
    n_m = math.ceil(hp / m_dmg)
    return n_p <= n_m


SLOT_CAP = {"weapon": 1, "shield": 1, "helmet": 1, "body_armor": 1, "leg_armor": 1, "boots": 1, "amulet": 1, "ring": 2}


def min_set_size(level, pool, monster, limit):
    """Smallest winning loadout over `pool` [(slot, stats)], or None above `limit`."""
    for size in range(1, limit + 1):
        for combo in itertools.combinations(pool, size):
            used = {}
            ok = True
            for slot, _ in combo:
                used[slot] = used.get(slot, 0) + 1
                if used[slot] > SLOT_CAP[slot]:
                    ok = False
                    break
            if ok and player_wins(level, [s for _, s in combo], monster):
                return size
    return None


def tune_monster(level, weak, attack_element, pool, target_size):
    """Largest attack such that `target_size` pieces still win against a fixed hp."""
    t = tier_of_level(level)
    weapon = 10 + 7 * t
    hp = weapon * (5 + 2 * target_size)
    best = None
    lo, hi = 1, 5000
    while lo <= hi:
        mid = (lo + hi) // 2
        monster = {"hp": hp, "attack": {attack_element: mid},
                   "resist": {e: (0 if e == weak else 60) for e in ELEMENTS}}
        size = min_set_size(level, pool, monster, target_size)
        if size is not None:
            best = monster
            lo = mid + 1
        else:
            hi = mid - 1
    return best


def build(seed):
    rng = random.Random(seed)
    items, recipes, nodes, monsters, locations = [], [], [], [], []

    for rid, prof, lv in RESOURCES:
        items.append({"id": rid, "name": rid.replace("_", " ").title(), "slot": "none", "level": lv})
    for rid, prof, lv in RESOURCES:
        out = REFINED[rid]
        items.append({"id": out, "name": out.replace("_", " ").title(), "slot": "none", "level": lv})
        qty = 1 if prof == "fishing" else 2
        recipes.append({"output": out, "output_qty": 1, "skill": prof, "skill_level": lv,
                        "workshop": WORKSHOP_OF[prof], "ingredients": [{"item": rid, "qty": qty}]})
    for mid, name, lv, part in MONSTERS:
        items.append({"id": part, "name": part.replace("_", " ").title(), "slot": "none", "level": lv})

    low_parts = [part for mid, name, lv, part in MONSTERS if tier_of_level(lv) <= 1]

    gear_pool = []  # (level, slot, stats)
    for t, level in enumerate(TIER_LEVELS):
        for kind in ["weapon"] + ARMOR_KINDS + ["amulet", "ring"]:
            for variant in variants_of(kind):
                iid = f"{TIER_NAMES[t]}_{variant}_{kind}"
                stats = gear_stats(kind, variant, t)
                items.append({"id": iid, "name": iid.replace("_", " ").title(), "slot": kind, "level": level,
                              "stats": stat_block(stats)})
                gear_pool.append((level, kind, stats))
                ings = gear_recipe(kind, variant, t, low_parts)
                recipes.append({"output": iid, "output_qty": 1, "skill": profession_of(kind), "skill_level": level,
                                "workshop": WORKSHOP_OF[profession_of(kind)],
                                "ingredients": [{"item": i, "qty": q} for i, q in ings]})
    drop_gear_of = {}
    for mid, iid, name, slot, stats in DROP_GEAR:
        lv = next(m[2] for m in MONSTERS if m[0] == mid)
        items.append({"id": iid, "name": name, "slot": slot, "level": lv, "stats": stat_block(stats)})
        drop_gear_of[mid] = iid

    # Target gear-set size grows with tier.
    sizes = [1, 2, 3, 3, 4, 4, 5, 5]
    for i, (mid, name, lv, part) in enumerate(MONSTERS):
        t = tier_of_level(lv)
        pool = [(slot, s) for glv, slot, s in gear_pool if tier_of_level(glv) == t and glv <= lv]
        weak = ELEMENTS[i % 4]
        attack_element = ELEMENTS[(i * 3 + 1) % 4]
        target = sizes[t] + (1 if lv > TIER_LEVELS[t] + 1 and t < 7 else 0)
        stats = tune_monster(lv, weak, attack_element, pool, target)
        drops = [{"item": part, "rate": 1.0 if t < 2 else rng.choice([0.5, 0.75, 1.0])}]
        if mid in drop_gear_of:
            drops.append({"item": drop_gear_of[mid], "rate": 1.0})
        monsters.append({"id": mid, "name": name, "level": lv, "location": f"loc_{mid}",
                         "stats": stat_block(stats), "drops": drops})

    for rid, prof, lv in RESOURCES:
        nodes.append({"id": f"{rid}_node", "name": rid.replace("_", " ").title() + " Spot", "item": rid,
                      "skill": prof, "skill_level": lv, "xp": 20 + 10 * lv, "location": f"loc_{rid}_node"})

    cells = [(x, y) for y in range(GRID_H) for x in range(GRID_W)]
    spawn = (GRID_W // 2, GRID_H // 2)
    cells.remove(spawn)
    rng.shuffle(cells)
    placed = [("loc_town", "Town Square", spawn, [{"kind": "workshop", "id": "forge"}])]
    for mid, name, lv, part in MONSTERS:
        placed.append((f"loc_{mid}", f"{name} Lair", cells.pop(), [{"kind": "monster", "id": mid}]))
    for rid, prof, lv in RESOURCES:
        placed.append((f"loc_{rid}_node", rid.replace("_", " ").title() + " Field", cells.pop(),
                       [{"kind": "resource_node", "id": f"{rid}_node"}]))
    for ws in ["forge", "workbench", "workbench", "cooking_fire", "cooking_fire", "alchemy_lab", "alchemy_lab"]:
        c = cells.pop()
        placed.append((f"loc_{ws}_{c[0]}_{c[1]}", ws.replace("_", " ").title(), c, [{"kind": "workshop", "id": ws}]))
    while cells:
        c = cells.pop()
        placed.append((f"loc_wild_{c[0]}_{c[1]}", "Wilderness", c, []))
    for lid, name, (x, y), elements in sorted(placed):
        locations.append({"id": lid, "name": name, "x": x, "y": y, "elements": elements})

    skills = [{"id": p, "kind": "gathering", "max_level": 40} for p in ["alchemy", "fishing", "mining", "woodcutting"]]
    return {
        "items.json": {"schema_version": 1, "items": items},
        "recipes.json": {"schema_version": 1, "recipes": recipes},
        "monsters.json": {"schema_version": 1, "monsters": monsters},
        "resource_nodes.json": {"schema_version": 1, "resource_nodes": nodes},
        "locations.json": {"schema_version": 1, "grid": {"width": GRID_W, "height": GRID_H},
                           "spawn": {"x": spawn[0], "y": spawn[1]}, "locations": locations},
        "skills.json": {"schema_version": 1, "skills": skills},
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "reference_world")
    parser.add_argument("--seed", type=int, default=20250)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, doc in build(args.seed).items():
        (args.out / name).write_text(json.dumps(doc, indent=1) + "\n")
    counts = build(args.seed)
    print(f"items={len(counts['items.json']['items'])} monsters={len(counts['monsters.json']['monsters'])} "
          f"nodes={len(counts['resource_nodes.json']['resource_nodes'])} "
          f"locations={len(counts['locations.json']['locations'])}")


if __name__ == "__main__":
    main()
