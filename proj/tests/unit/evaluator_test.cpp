#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gearquest/evaluator.hpp"
#include "gearquest/task_gen.hpp"
#include "partition_cases.hpp"

using namespace gearquest;

namespace {

EvalReport report(std::string id, int bracket, bool ok, double progress, FailureType type, int high = 0, int exec = 0) {
  EvalReport r;
  r.task_id = std::move(id);
  r.bracket = bracket;
  r.success = ok;
  r.progress = progress;
  r.errors = {high, exec, type, 0};
  return r;
}

// Hand-built three-bracket fixture. Progress by bracket: {100, 50}, {0, 100, 50}, {25}.
std::vector<EvalReport> three_brackets() {
  return {report("a1", 1, true, 100, FailureType::kNone), report("a2", 1, false, 50, FailureType::kOnlyGear, 1, 0),
          report("b1", 2, false, 0, FailureType::kInvalidCode), report("b2", 2, true, 100, FailureType::kNone),
          report("b3", 2, false, 50, FailureType::kOnlyExec, 0, 3),
          report("c1", 3, false, 25, FailureType::kGearPlusExec, 2, 4)};
}

const Task& steel_blade_task() {
  static const Task t = fixtures::toy_task("golem", 1);
  return t;
}

}  // namespace

TEST(Evaluator, CanonicalRunSucceedsFully) {
  const Task& t = steel_blade_task();
  const ExecutionLog log = run(t, canonical_solution(t));
  EXPECT_TRUE(success(log, t));
  EXPECT_DOUBLE_EQ(progress_score(log, t), 100.0);
}

TEST(Evaluator, EmptyLogScoresZero) {
  const Task& t = steel_blade_task();
  const ExecutionLog log = run(t, std::vector<Action>{});
  EXPECT_FALSE(success(log, t));
  EXPECT_DOUBLE_EQ(progress_score(log, t), 0.0);
}

TEST(Evaluator, DefeatingTheWrongMonsterIsNotSuccess) {
  const Task t = fixtures::toy_task("slime", 1);
  Task wolf_goal = fixtures::toy_task("wolf", 1);
  const ExecutionLog log = run(t, canonical_solution(t));
  ASSERT_TRUE(success(log, t));
  EXPECT_FALSE(goal_reached(wolf_goal, replay(t, log)));
}

TEST(Evaluator, SteelBladeMilestones) {
  const Task& t = steel_blade_task();
  ASSERT_EQ(t.missing, std::vector<std::string>{"steel_blade"});
  const std::vector<Milestone> expected{{MilestoneKind::kGather, "ore", 4},     {MilestoneKind::kGather, "wood", 1},
                                        {MilestoneKind::kCraft, "copper_sword", 1}, {MilestoneKind::kCraft, "steel_blade", 1},
                                        {MilestoneKind::kDefeat, "golem", 1},   {MilestoneKind::kEquip, "steel_blade", 1}};
  auto got = canonical_milestones(t);
  auto want = expected;
  auto key = [](const Milestone& a, const Milestone& b) {
    return std::tie(a.kind, a.subject) < std::tie(b.kind, b.subject);
  };
  std::sort(got.begin(), got.end(), key);
  std::sort(want.begin(), want.end(), key);
  EXPECT_EQ(got, want);
}

TEST(Evaluator, HalfTheMilestones) {
  const Task& t = steel_blade_task();
  const std::vector<Action> plan{Action::move(1, 0), Action::gather(), Action::gather(), Action::gather(),
                                 Action::gather(),   Action::move(2, 0), Action::gather(), Action::move(0, 0),
                                 Action::craft("copper_sword", 1)};
  const ExecutionLog log = run(t, plan);
  EXPECT_DOUBLE_EQ(progress_score(log, t), 50.0);
  EXPECT_FALSE(success(log, t));
}

TEST(Evaluator, PartialQuantityDoesNotCount) {
  const Task& t = steel_blade_task();
  const std::vector<Action> plan{Action::move(1, 0), Action::gather(), Action::gather(), Action::gather()};
  EXPECT_DOUBLE_EQ(progress_score(run(t, plan), t), 0.0);
}

TEST(Evaluator, PartitionCases) {
  for (const auto& c : partition_cases::all()) {
    const PlanOutcome out = evaluate_plan_text(c.task, c.reply);
    ErrorBreakdown got = out.report.errors;
    got.redundant_steps = 0;
    EXPECT_EQ(got, c.expected) << c.name << ": (" << got.high_level_missing << ", " << got.execution_errors << ", "
                               << to_string(got.failure_type) << ")";
  }
}

TEST(Evaluator, InvalidCodeCarriesDiagnostic) {
  const PlanOutcome out = evaluate_plan_text(steel_blade_task(), "fight(\n");
  EXPECT_EQ(out.report.errors.failure_type, FailureType::kInvalidCode);
  ASSERT_TRUE(out.report.parse_error.has_value());
  EXPECT_EQ(out.report.parse_error->category, diag::kSyntax);
  EXPECT_FALSE(out.log.has_value());
  EXPECT_DOUBLE_EQ(out.report.progress, 0.0);
}

TEST(Evaluator, EmptyReplyIsInvalidCode) {
  EXPECT_EQ(evaluate_plan_text(steel_blade_task(), "```\n\n```").report.errors.failure_type,
            FailureType::kInvalidCode);
}

TEST(Evaluator, OverlongPlanIsInvalidCode) {
  const PlanOutcome out = evaluate_plan_text(steel_blade_task(), "for _ in range(200):\n    for _ in range(200):\n        rest()");
  EXPECT_EQ(out.report.errors.failure_type, FailureType::kInvalidCode);
  ASSERT_TRUE(out.report.parse_error.has_value());
  EXPECT_EQ(out.report.parse_error->category, diag::kTooLong);
}

TEST(Evaluator, ClassifyWithoutProgram) {
  EXPECT_EQ(classify_errors(steel_blade_task(), std::nullopt, nullptr),
            (ErrorBreakdown{0, 0, FailureType::kInvalidCode, 0}));
}

TEST(Evaluator, ReportJsonRoundTrip) {
  EvalReport r = report("x", 4, false, 33.5, FailureType::kGearPlusExec, 1, 2);
  r.token_usage = TokenUsage{1200, 340};
  r.parse_error = Diagnostic{3, 4, "syntax", "bad"};
  r.model = "m";
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
}

TEST(Evaluator, TwoReportsHalfSuccess) {
  const auto s = aggregate({report("a", 1, true, 100, FailureType::kNone),
                            report("b", 1, false, 0, FailureType::kOnlyGear, 1)});
  EXPECT_DOUBLE_EQ(s.brackets.at(1).success_rate, 50.0);
  EXPECT_DOUBLE_EQ(s.overall.success_rate, 50.0);
}

TEST(Evaluator, AllPerfectHasZeroSd) {
  const auto s = aggregate({report("a", 1, true, 100, FailureType::kNone), report("b", 2, true, 100, FailureType::kNone),
                            report("c", 2, true, 100, FailureType::kNone)});
  EXPECT_DOUBLE_EQ(s.overall.progress.sd, 0.0);
  EXPECT_DOUBLE_EQ(s.brackets.at(2).progress.sd, 0.0);
}

TEST(Evaluator, ThreeBracketFixtureByHand) {
  const auto s = aggregate(three_brackets());
  ASSERT_EQ(s.brackets.size(), 3u);
  EXPECT_DOUBLE_EQ(s.brackets.at(1).progress.mean, 75.0);
  EXPECT_NEAR(s.brackets.at(1).progress.sd, 35.355339, 1e-6);  // sqrt(1250)
  EXPECT_DOUBLE_EQ(s.brackets.at(2).progress.mean, 50.0);
  EXPECT_DOUBLE_EQ(s.brackets.at(2).progress.sd, 50.0);
  EXPECT_DOUBLE_EQ(s.brackets.at(3).progress.sd, 0.0);
  EXPECT_NEAR(s.brackets.at(2).success_rate, 100.0 / 3.0, 1e-9);
  // Overall: mean and sample SD of the bracket means {75, 50, 25}.
  EXPECT_DOUBLE_EQ(s.overall.progress.mean, 50.0);
  EXPECT_DOUBLE_EQ(s.overall.progress.sd, 25.0);
  EXPECT_NEAR(s.overall.success_rate, (50.0 + 100.0 / 3.0 + 0.0) / 3.0, 1e-9);
  EXPECT_EQ(s.overall.tasks, 6);
  // Failure shares are pooled over all six tasks.
  EXPECT_NEAR(s.overall.failure_share.at(FailureType::kNone), 100.0 * 2 / 6, 1e-9);
  EXPECT_NEAR(s.brackets.at(2).failure_share.at(FailureType::kInvalidCode), 100.0 / 3, 1e-9);
  EXPECT_DOUBLE_EQ(s.brackets.at(3).mean_execution, 4.0);
  EXPECT_DOUBLE_EQ(s.overall.mean_high_level, (0.5 + 0.0 + 2.0) / 3.0);
}

TEST(Evaluator, AggregateIgnoresInputOrder) {
  auto reports = three_brackets();
  const std::string expected = summary_to_json(aggregate(reports)).dump();
  std::mt19937 gen(4);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(reports.begin(), reports.end(), gen);
    EXPECT_EQ(summary_to_json(aggregate(reports)).dump(), expected);
  }
}

TEST(Evaluator, SummaryTableRows) {
  const std::string table = summary_table(aggregate(three_brackets()));
  EXPECT_NE(table.find("overall"), std::string::npos);
  EXPECT_NE(table.find("only_gear%"), std::string::npos);
  EXPECT_EQ(table.find(" \n"), std::string::npos);
}

TEST(Evaluator, FailureTypeNames) {
  for (FailureType t : kAllFailureTypes) EXPECT_EQ(failure_type_from_string(to_string(t)), t);
  EXPECT_EQ(to_string(FailureType::kGearPlusExec), "gear_plus_exec");
}
