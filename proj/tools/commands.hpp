#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "gearquest/executor.hpp"

namespace gearquest::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsage = 2 };

struct GenerateArgs {
  std::filesystem::path world;
  std::filesystem::path spec;
  std::filesystem::path out;
  bool with_solutions = false;
};

struct ExecArgs {
  // Single mode: task + plan. Batch mode: suite + plans.
  std::optional<std::filesystem::path> task;
  std::optional<std::filesystem::path> plan;
  std::optional<std::filesystem::path> suite;
  std::optional<std::filesystem::path> plans;
  std::optional<std::filesystem::path> world;
  std::filesystem::path out;
  ExecMode mode = ExecMode::kDeterministic;
  std::uint64_t seed = 0;
  int jobs = 1;
};

int validate(const std::filesystem::path& world_dir, std::ostream& out, std::ostream& err);
int generate(const GenerateArgs& args, std::ostream& out, std::ostream& err);
int exec(const ExecArgs& args, std::ostream& out, std::ostream& err);
int score(const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err);
int analyze(const std::filesystem::path& run_dir, bool as_json, std::ostream& out, std::ostream& err);

}  // namespace gearquest::cli
