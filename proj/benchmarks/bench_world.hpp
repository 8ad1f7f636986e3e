#pragma once

#include "gearquest/world.hpp"

inline const gearquest::WorldDef& bench_world() {
  static const gearquest::WorldDef world =
      gearquest::load_world_dir(std::filesystem::path(GEARQUEST_DATA_DIR) / "reference_world");
  return world;
}
