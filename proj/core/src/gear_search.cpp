#include "gearquest/gear_search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <unordered_map>

#include "gearquest/rng.hpp"

namespace gearquest {

namespace {

int stat_sum(const StatVector& s) {
  int total = s.hp;
  for (std::size_t e = 0; e < kElementCount; ++e) total += s.attack[e] + s.dmg_amp[e] + s.resist[e];
  return total;
}

// Upper bound on the stats of any two distinct items: per channel, the sum of
// the two largest values.
StatVector top_two_sum(const std::vector<const Item*>& items) {
  auto top2 = [&](auto channel) {
    int best = std::numeric_limits<int>::min();
    int second = std::numeric_limits<int>::min();
    for (const Item* it : items) {
      const int v = channel(it->bonus());
      if (v > best) {
        second = best;
        best = v;
      } else if (v > second) {
        second = v;
      }
    }
    return best + second;
  };
  StatVector out;
  out.hp = top2([](const StatVector& s) { return s.hp; });
  for (std::size_t e = 0; e < kElementCount; ++e) {
    out.attack[e] = top2([e](const StatVector& s) { return s.attack[e]; });
    out.dmg_amp[e] = top2([e](const StatVector& s) { return s.dmg_amp[e]; });
    out.resist[e] = top2([e](const StatVector& s) { return s.resist[e]; });
  }
  return out;
}

struct KindGroup {
  ItemSlot slot = ItemSlot::kNone;
  std::vector<const Item*> items;             // strongest first
  std::vector<std::vector<std::size_t>> dominated_by;  // earlier indices that dominate each item
  StatVector sup_one;
  StatVector sup_two;
};

class MinimalGearSearch {
 public:
  MinimalGearSearch(const Monster& monster, std::span<const Item> pool)
      : monster_(monster.stats), base_(base_stats(monster.difficulty_level)) {
    for (ItemSlot slot : kEquipmentSlots) {
      KindGroup g;
      g.slot = slot;
      for (const Item& item : pool) {
        if (item.slot == slot) g.items.push_back(&item);
      }
      if (g.items.empty()) continue;
      std::sort(g.items.begin(), g.items.end(), [](const Item* a, const Item* b) {
        const int sa = stat_sum(a->bonus());
        const int sb = stat_sum(b->bonus());
        return sa != sb ? sa > sb : a->id < b->id;
      });
      g.dominated_by.resize(g.items.size());
      for (std::size_t i = 0; i < g.items.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (g.items[j]->bonus().dominates(g.items[i]->bonus())) g.dominated_by[i].push_back(j);
        }
      }
      g.sup_one = g.items.front()->bonus();
      for (const Item* it : g.items) g.sup_one = StatVector::sup(g.sup_one, it->bonus());
      if (g.items.size() >= 2) g.sup_two = top_two_sum(g.items);
      groups_.push_back(std::move(g));
    }
  }

  std::vector<GearSet> run() {
    std::size_t max_size = 0;
    for (const auto& g : groups_) {
      max_size += std::min<std::size_t>(g.items.size(), static_cast<std::size_t>(slot_capacity(g.slot)));
    }
    for (std::size_t k = 0; k <= max_size; ++k) {
      std::vector<std::pair<std::size_t, int>> composition;
      compose(0, static_cast<int>(k), composition);
      if (!winners_.empty()) break;
    }
    std::vector<GearSet> out;
    out.reserve(winners_.size());
    for (const auto& w : winners_) out.push_back(GearSet::from_items(w));
    std::sort(out.begin(), out.end(), gear_less);
    return out;
  }

 private:
  bool wins(const StatVector& s) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    const bool w = s.hp > 0 && player_wins(s, monster_);
    memo_.emplace(s, w);
    return w;
  }

  StatVector sup_for(const std::pair<std::size_t, int>& part) const {
    const KindGroup& g = groups_[part.first];
    return part.second == 2 ? g.sup_two : g.sup_one;
  }

  // Chooses how many items of each kind the set holds, summing to `remaining`.
  void compose(std::size_t group, int remaining, std::vector<std::pair<std::size_t, int>>& composition) {
    if (remaining == 0) {
      search(composition);
      return;
    }
    if (group == groups_.size()) return;
    const KindGroup& g = groups_[group];
    const int cap = std::min(slot_capacity(g.slot), static_cast<int>(g.items.size()));
    for (int take = std::min(cap, remaining); take >= 0; --take) {
      if (take > 0) composition.emplace_back(group, take);
      compose(group + 1, remaining - take, composition);
      if (take > 0) composition.pop_back();
    }
  }

  void search(const std::vector<std::pair<std::size_t, int>>& composition) {
    plan_ = composition;
    suffix_sup_.assign(plan_.size() + 1, StatVector{});
    for (std::size_t i = plan_.size(); i-- > 0;) suffix_sup_[i] = suffix_sup_[i + 1] + sup_for(plan_[i]);
    if (!wins(base_ + suffix_sup_[0])) return;
    chosen_.clear();
    descend(0, base_);
  }

  // Returns true when some completion of the current prefix wins.
  bool descend(std::size_t depth, const StatVector& partial) {
    if (depth == plan_.size()) {
      if (!wins(partial)) return false;
      winners_.push_back(chosen_);
      return true;
    }
    const KindGroup& g = groups_[plan_[depth].first];
    const StatVector& rest = suffix_sup_[depth + 1];
    bool any = false;
    if (plan_[depth].second == 1) {
      // If a dominating item of this kind had no winning completion, neither does a dominated one.
      std::vector<char> failed(g.items.size(), 0);
      for (std::size_t i = 0; i < g.items.size(); ++i) {
        const bool pruned = std::any_of(g.dominated_by[i].begin(), g.dominated_by[i].end(),
                                        [&](std::size_t j) { return failed[j] != 0; });
        if (pruned) {
          failed[i] = 1;
          continue;
        }
        const StatVector next = partial + g.items[i]->bonus();
        if (!wins(next + rest)) {
          failed[i] = 1;
          continue;
        }
        chosen_.push_back(g.items[i]);
        const bool found = descend(depth + 1, next);
        chosen_.pop_back();
        if (found) {
          any = true;
        } else {
          failed[i] = 1;
        }
      }
      return any;
    }
    for (std::size_t i = 0; i < g.items.size(); ++i) {
      const StatVector first = partial + g.items[i]->bonus();
      if (!wins(first + g.sup_one + rest)) continue;
      for (std::size_t j = i + 1; j < g.items.size(); ++j) {
        const StatVector next = first + g.items[j]->bonus();
        if (!wins(next + rest)) continue;
        chosen_.push_back(g.items[i]);
        chosen_.push_back(g.items[j]);
        any = descend(depth + 1, next) || any;
        chosen_.pop_back();
        chosen_.pop_back();
      }
    }
    return any;
  }

  StatVector monster_;
  StatVector base_;
  std::vector<KindGroup> groups_;
  std::vector<std::pair<std::size_t, int>> plan_;
  std::vector<StatVector> suffix_sup_;
  std::vector<const Item*> chosen_;
  std::vector<std::vector<const Item*>> winners_;
  std::unordered_map<StatVector, bool, StatVectorHash> memo_;
};

}  // namespace

std::vector<GearSet> minimal_winning_gear(const Monster& monster, std::span<const Item> pool) {
  return MinimalGearSearch(monster, pool).run();
}

std::vector<GearSet> minimal_winning_gear(const WorldDef& world, const Monster& monster) {
  const std::vector<Item> pool = items_at_or_below_level(world, monster.difficulty_level);
  return minimal_winning_gear(monster, pool);
}

std::vector<GearSet> exhaustive_minimal_gear(const Monster& monster, std::span<const Item> pool) {
  if (pool.size() > kExhaustivePoolLimit) {
    throw std::invalid_argument("exhaustive_minimal_gear: pool of " + std::to_string(pool.size()) +
                                " items exceeds the enumeration limit of " +
                                std::to_string(kExhaustivePoolLimit));
  }
  const StatVector base = base_stats(monster.difficulty_level);
  const std::uint32_t n = static_cast<std::uint32_t>(pool.size());
  std::vector<std::uint32_t> winning_masks;
  int best = std::numeric_limits<int>::max();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int size = std::popcount(mask);
    if (size > best) continue;
    std::array<int, kEquipmentSlots.size() + 1> per_slot{};
    StatVector stats = base;
    bool feasible = true;
    for (std::uint32_t i = 0; i < n && feasible; ++i) {
      if ((mask >> i & 1u) == 0) continue;
      const Item& item = pool[i];
      const auto slot = static_cast<std::size_t>(item.slot);
      feasible = item.equippable() && ++per_slot[slot] <= slot_capacity(item.slot);
      stats += item.bonus();
    }
    if (!feasible || stats.hp <= 0) continue;
    if (!simulate(stats, monster.stats).player_won()) continue;
    if (size < best) {
      best = size;
      winning_masks.clear();
    }
    winning_masks.push_back(mask);
  }
  std::vector<GearSet> out;
  for (std::uint32_t mask : winning_masks) {
    std::vector<const Item*> items;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) items.push_back(&pool[i]);
    }
    out.push_back(GearSet::from_items(items));
  }
  std::sort(out.begin(), out.end(), gear_less);
  return out;
}

GearPartition partition_gear(const GearSet& gear, const PartitionPolicy& policy) {
  std::vector<std::string> ids = gear.item_ids();
  const auto n = static_cast<int>(ids.size());
  if (policy.missing_count > n) {
    throw std::invalid_argument("partition_gear: cannot mark " + std::to_string(policy.missing_count) +
                                " of " + std::to_string(n) + " items missing");
  }
  if (policy.missing_count < 0 || (n > 0 && policy.missing_count == 0)) {
    throw std::invalid_argument("partition_gear: a task needs at least one missing item");
  }
  seeded_shuffle(ids, policy.seed);
  GearPartition out;
  out.missing.assign(ids.begin(), ids.begin() + policy.missing_count);
  out.equipped.assign(ids.begin() + policy.missing_count, ids.end());
  std::sort(out.missing.begin(), out.missing.end());
  std::sort(out.equipped.begin(), out.equipped.end());
  return out;
}

namespace {

class AuxiliarySearch {
 public:
  AuxiliarySearch(const WorldDef& world, const AuxiliaryQuery& q) : q_(q) {
    base_ = base_stats(q.level);
    for (const auto& id : q.equipped) {
      const Item* item = world.find_item(id);
      if (item == nullptr) throw std::invalid_argument("auxiliary_items: unknown equipped item '" + id + "'");
      base_ += item->bonus();
      ++used_[static_cast<std::size_t>(item->slot)];
    }
    for (const Monster* m : q.scenario_monsters) {
      if (m != nullptr && m != q.target &&
          std::find(others_.begin(), others_.end(), m) == others_.end()) {
        others_.push_back(m);
      }
    }
    const std::set<std::string, std::less<>> excluded(q.solution.begin(), q.solution.end());
    for (const auto& [id, item] : world.items) {
      if (!item.equippable() || item.level > q.level || excluded.count(id) != 0) continue;
      if (std::find(q.equipped.begin(), q.equipped.end(), id) != q.equipped.end()) continue;
      if (used_[static_cast<std::size_t>(item.slot)] >= slot_capacity(item.slot)) continue;
      // Adding items never weakens the character, so an item that alone beats the target is useless.
      if (beats(base_ + item.bonus(), *q.target)) continue;
      candidates_.push_back(&item);
    }
    std::stable_sort(candidates_.begin(), candidates_.end(), [](const Item* a, const Item* b) {
      return a->level != b->level ? a->level < b->level : a->id < b->id;
    });
  }

  std::optional<std::vector<std::string>> run() {
    for (int size = 0; size <= q_.max_size; ++size) {
      if (extend(0, size, base_)) {
        std::vector<std::string> out;
        for (const Item* it : chosen_) out.push_back(it->id);
        std::sort(out.begin(), out.end());
        return out;
      }
    }
    return std::nullopt;
  }

 private:
  bool beats(const StatVector& s, const Monster& m) {
    auto& memo = memo_[&m];
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    const bool w = s.hp > 0 && player_wins(s, m.stats);
    memo.emplace(s, w);
    return w;
  }

  bool accepts(const StatVector& s) {
    if (beats(s, *q_.target)) return false;
    return std::all_of(others_.begin(), others_.end(), [&](const Monster* m) { return beats(s, *m); });
  }

  bool extend(std::size_t from, int remaining, const StatVector& stats) {
    if (remaining == 0) return accepts(stats);
    for (std::size_t i = from; i < candidates_.size(); ++i) {
      const Item* item = candidates_[i];
      auto& used = used_[static_cast<std::size_t>(item->slot)];
      if (used >= slot_capacity(item->slot)) continue;
      const StatVector next = stats + item->bonus();
      if (beats(next, *q_.target)) continue;
      ++used;
      chosen_.push_back(item);
      if (extend(i + 1, remaining - 1, next)) return true;
      chosen_.pop_back();
      --used;
    }
    return false;
  }

  const AuxiliaryQuery& q_;
  StatVector base_;
  std::array<int, kEquipmentSlots.size() + 1> used_{};
  std::vector<const Monster*> others_;
  std::vector<const Item*> candidates_;
  std::vector<const Item*> chosen_;
  std::unordered_map<const Monster*, std::unordered_map<StatVector, bool, StatVectorHash>> memo_;
};

}  // namespace

std::optional<std::vector<std::string>> auxiliary_items(const WorldDef& world, const AuxiliaryQuery& query) {
  if (query.target == nullptr) throw std::invalid_argument("auxiliary_items: target monster required");
  return AuxiliarySearch(world, query).run();
}

std::vector<std::string> noise_items(const WorldDef& world, const NoiseQuery& query, int k) {
  if (k <= 0) return {};
  std::vector<const Item*> eligible;
  for (const auto& [id, item] : world.items) {
    if (!item.equippable() || item.level > query.level) continue;
    if (query.excluded.count(id) != 0 || query.closure_items.count(id) != 0) continue;
    const Recipe* recipe = world.recipe_for(id);
    if (recipe == nullptr) continue;
    const bool blocked = std::any_of(recipe->ingredients.begin(), recipe->ingredients.end(), [&](const Ingredient& ing) {
      return query.closure_items.count(ing.item_id) == 0 && !(query.obtainable && query.obtainable(ing.item_id));
    });
    if (blocked) eligible.push_back(&item);
  }
  std::sort(eligible.begin(), eligible.end(), [](const Item* a, const Item* b) {
    return a->level != b->level ? a->level > b->level : a->id < b->id;
  });
  std::vector<std::string> out;
  for (const Item* item : eligible) {
    if (static_cast<int>(out.size()) == k) break;
    out.push_back(item->id);
  }
  return out;
}

}  // namespace gearquest
