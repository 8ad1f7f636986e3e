#include "gearquest/stats.hpp"

#include <algorithm>

namespace gearquest {

std::string_view to_string(Element e) {
  switch (e) {
    case Element::kFire:
      return "fire";
    case Element::kEarth:
      return "earth";
    case Element::kWater:
      return "water";
    case Element::kAir:
      return "air";
  }
  return "?";
}

std::optional<Element> element_from_string(std::string_view name) {
  for (Element e : kAllElements) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

StatVector& StatVector::operator+=(const StatVector& other) {
  hp += other.hp;
  for (std::size_t i = 0; i < kElementCount; ++i) {
    attack[i] += other.attack[i];
    dmg_amp[i] += other.dmg_amp[i];
    resist[i] += other.resist[i];
  }
  return *this;
}

bool StatVector::dominates(const StatVector& other) const {
  if (hp < other.hp) return false;
  for (std::size_t i = 0; i < kElementCount; ++i) {
    if (attack[i] < other.attack[i] || dmg_amp[i] < other.dmg_amp[i] ||
        resist[i] < other.resist[i]) {
      return false;
    }
  }
  return true;
}

StatVector StatVector::sup(const StatVector& a, const StatVector& b) {
  StatVector out;
  out.hp = std::max(a.hp, b.hp);
  for (std::size_t i = 0; i < kElementCount; ++i) {
    out.attack[i] = std::max(a.attack[i], b.attack[i]);
    out.dmg_amp[i] = std::max(a.dmg_amp[i], b.dmg_amp[i]);
    out.resist[i] = std::max(a.resist[i], b.resist[i]);
  }
  return out;
}

bool StatVector::all_non_negative() const { return dominates(StatVector{}); }

std::size_t StatVectorHash::operator()(const StatVector& s) const noexcept {
  std::size_t h = static_cast<std::size_t>(s.hp) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](int v) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (std::size_t i = 0; i < kElementCount; ++i) {
    mix(s.attack[i]);
    mix(s.dmg_amp[i]);
    mix(s.resist[i]);
  }
  return h;
}

}  // namespace gearquest
