#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gearquest/executor.hpp"
#include "gearquest/plan_dsl.hpp"
#include "gearquest/task.hpp"

namespace gearquest {

enum class FailureType : std::uint8_t { kNone, kOnlyGear, kGearPlusExec, kOnlyExec, kInvalidCode };
inline constexpr std::array<FailureType, 5> kAllFailureTypes{
    FailureType::kNone, FailureType::kOnlyGear, FailureType::kGearPlusExec, FailureType::kOnlyExec,
    FailureType::kInvalidCode};
std::string_view to_string(FailureType type);
std::optional<FailureType> failure_type_from_string(std::string_view name);

enum class MilestoneKind : std::uint8_t { kGather, kCraft, kDefeat, kEquip, kRecycle };
std::string_view to_string(MilestoneKind kind);

// A unit of required progress: at least `quantity` successful events of `kind` on `subject`.
struct Milestone {
  MilestoneKind kind = MilestoneKind::kGather;
  std::string subject;  // resource item, crafted item, monster, or equipped item
  int quantity = 1;
  bool operator==(const Milestone&) const = default;
};

// Derived by executing the canonical solution in deterministic mode.
std::vector<Milestone> canonical_milestones(const Task& task);

// Successful-event tallies of a log, keyed like milestones.
std::map<std::pair<MilestoneKind, std::string>, int> milestone_tally(const Task& task, const ExecutionLog& log);

bool success(const ExecutionLog& log, const Task& task);
double progress_score(const ExecutionLog& log, const Task& task);
double progress_score(const ExecutionLog& log, const std::vector<Milestone>& milestones, const Task& task);

struct ErrorBreakdown {
  int high_level_missing = 0;
  int execution_errors = 0;
  FailureType failure_type = FailureType::kNone;
  int redundant_steps = 0;  // diagnostic only
  bool operator==(const ErrorBreakdown&) const = default;
};

// `program` is the flattened plan, or nullopt when parsing failed; `log` is
// then ignored and the result is (0, 0, invalid_code).
ErrorBreakdown classify_errors(const Task& task, const std::optional<std::vector<Action>>& program,
                               const ExecutionLog* log);

struct TokenUsage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
  bool operator==(const TokenUsage&) const = default;
};

struct EvalReport {
  std::string task_id;
  int bracket = 0;
  int difficulty = 0;
  bool success = false;
  double progress = 0.0;
  ErrorBreakdown errors;
  std::optional<TokenUsage> token_usage;
  std::optional<Diagnostic> parse_error;
  std::string model;
  bool operator==(const EvalReport&) const = default;
};

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

struct PlanOutcome {
  EvalReport report;
  std::optional<ExecutionLog> log;  // absent for invalid code
};

// Extracts, parses, flattens, executes and scores one model reply.
PlanOutcome evaluate_plan_text(const Task& task, std::string_view reply, ExecOptions options = {});
// Scores an already executed plan.
EvalReport evaluate(const Task& task, const std::vector<Action>& actions, const ExecutionLog& log);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

struct GroupSummary {
  int tasks = 0;
  double success_rate = 0.0;  // percent
  MeanSd progress;
  std::optional<MeanSd> prompt_tokens;
  std::optional<MeanSd> completion_tokens;
  std::map<FailureType, double> failure_share;  // percent of tasks in the group
  double mean_high_level = 0.0;
  double mean_execution = 0.0;
};

struct SuiteSummary {
  std::map<int, GroupSummary> brackets;
  // Means are the average of per-bracket means; SD is taken across those bracket means.
  GroupSummary overall;
};

SuiteSummary aggregate(std::vector<EvalReport> reports);
nlohmann::json summary_to_json(const SuiteSummary& summary);
// Text tables: success and progress per bracket, then the failure breakdown.
std::string summary_table(const SuiteSummary& summary);

}  // namespace gearquest
