#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

namespace gearquest {

enum class Element : std::uint8_t { kFire = 0, kEarth = 1, kWater = 2, kAir = 3 };

inline constexpr std::size_t kElementCount = 4;
inline constexpr std::array<Element, kElementCount> kAllElements{
    Element::kFire, Element::kEarth, Element::kWater, Element::kAir};

std::string_view to_string(Element e);
std::optional<Element> element_from_string(std::string_view name);

using ElementArray = std::array<int, kElementCount>;

// Combat-relevant numbers of a character, a monster, or one item's bonus.
// Amplification and resistance are integer percentages.
struct StatVector {
  int hp = 0;
  ElementArray attack{};
  ElementArray dmg_amp{};
  ElementArray resist{};

  int& attack_of(Element e) { return attack[static_cast<std::size_t>(e)]; }
  int& amp_of(Element e) { return dmg_amp[static_cast<std::size_t>(e)]; }
  int& resist_of(Element e) { return resist[static_cast<std::size_t>(e)]; }
  int attack_of(Element e) const { return attack[static_cast<std::size_t>(e)]; }
  int amp_of(Element e) const { return dmg_amp[static_cast<std::size_t>(e)]; }
  int resist_of(Element e) const { return resist[static_cast<std::size_t>(e)]; }

  StatVector& operator+=(const StatVector& other);
  friend StatVector operator+(StatVector lhs, const StatVector& rhs) {
    lhs += rhs;
    return lhs;
  }
  bool operator==(const StatVector&) const = default;

  // Componentwise >= on every channel.
  bool dominates(const StatVector& other) const;
  // Componentwise maximum.
  static StatVector sup(const StatVector& a, const StatVector& b);
  bool all_non_negative() const;
};

struct StatVectorHash {
  std::size_t operator()(const StatVector& s) const noexcept;
};

}  // namespace gearquest
