#include <gtest/gtest.h>

#include "gearquest/plan_dsl.hpp"
#include "random_plans.hpp"

using namespace gearquest;

namespace {

PlanProgram parsed(std::string_view src) {
  auto r = parse(src);
  if (auto* d = std::get_if<Diagnostic>(&r)) {
    ADD_FAILURE() << d->line << ":" << d->col << " " << d->category << " " << d->message;
    return {};
  }
  return std::get<PlanProgram>(r);
}

Diagnostic diagnosed(std::string_view src) {
  auto r = parse(src);
  if (auto* d = std::get_if<Diagnostic>(&r)) return *d;
  ADD_FAILURE() << "expected a diagnostic for: " << src;
  return {};
}

Statement stmt(Action a) { return Statement{std::move(a), 0, 0}; }
Statement loop(int n, std::vector<Statement> body) { return Statement{ForLoop{n, std::move(body)}, 0, 0}; }

}  // namespace

TEST(PlanDsl, ExtractSingleFence) {
  EXPECT_EQ(extract_code("Here:\n```python\nfight()\n```\nDone."), "fight()");
}

TEST(PlanDsl, ExtractLastOfTwoFences) {
  EXPECT_EQ(extract_code("```\ngather()\n```\nthen\n```python\nrest()\n```"), "rest()");
}

TEST(PlanDsl, ExtractWithoutFences) { EXPECT_EQ(extract_code("  gather()\n"), "gather()"); }

TEST(PlanDsl, ExtractUnterminatedFence) { EXPECT_EQ(extract_code("```python\nfight()\nrest()"), "fight()\nrest()"); }

TEST(PlanDsl, ForRangeLoop) {
  const PlanProgram p = parsed("for i in range(3):\n    gather()");
  EXPECT_EQ(p, (PlanProgram{{loop(3, {stmt(Action::gather())})}}));
}

TEST(PlanDsl, WhileIsForbidden) {
  EXPECT_EQ(diagnosed("while True: gather()").category, diag::kForbiddenConstruct);
}

TEST(PlanDsl, TwoCallsInOrder) {
  const PlanProgram p = parsed("craft('sword', 2)\nequip('sword')");
  EXPECT_EQ(p, (PlanProgram{{stmt(Action::craft("sword", 2)), stmt(Action::equip("sword"))}}));
  EXPECT_EQ(p.statements[1].line, 2);
}

TEST(PlanDsl, KeywordArgumentsAndDoubleQuotes) {
  EXPECT_EQ(parsed("craft(item_id=\"sword\", qty=2)"), parsed("craft('sword', 2)"));
}

TEST(PlanDsl, CommentsAndBlankLines) {
  EXPECT_EQ(parsed("# plan\n\nmove(1, 2)  # go\n\nfight()\n"),
            (PlanProgram{{stmt(Action::move(1, 2)), stmt(Action::fight())}}));
}

TEST(PlanDsl, Diagnostics) {
  EXPECT_EQ(diagnosed("print('hi')").category, diag::kUnknownAction);
  EXPECT_EQ(diagnosed("craft('sword')").category, diag::kArity);
  EXPECT_EQ(diagnosed("craft('sword', 0)").category, diag::kArity);
  EXPECT_EQ(diagnosed("x = 3").category, diag::kForbiddenConstruct);
  EXPECT_EQ(diagnosed("for i in range(n):\n    gather()").category, diag::kForbiddenConstruct);
  EXPECT_EQ(diagnosed("import os").category, diag::kForbiddenConstruct);
  EXPECT_EQ(diagnosed("gather(").category, diag::kSyntax);
  EXPECT_EQ(diagnosed("for a in range(2):\n    for b in range(2):\n        for c in range(2):\n            gather()")
                .category,
            diag::kNesting);
}

TEST(PlanDsl, DiagnosticPosition) {
  const Diagnostic d = diagnosed("gather()\n  fight(1)");
  EXPECT_EQ(d.line, 2);
  EXPECT_GE(d.col, 1);
}

TEST(PlanDsl, FlattenLoop) {
  EXPECT_EQ(flatten(parsed("for _ in range(3):\n    gather()")),
            (std::vector<Action>{Action::gather(), Action::gather(), Action::gather()}));
}

TEST(PlanDsl, FlattenEmpty) { EXPECT_TRUE(flatten(PlanProgram{}).empty()); }

TEST(PlanDsl, FlattenNestedOrder) {
  const PlanProgram p{{loop(2, {stmt(Action::move(1, 2)), loop(2, {stmt(Action::gather())})})}};
  const Action m = Action::move(1, 2);
  const Action g = Action::gather();
  EXPECT_EQ(flatten(p), (std::vector<Action>{m, g, g, m, g, g}));
  EXPECT_EQ(flattened_length(p), 6u);
}

TEST(PlanDsl, FlattenCap) {
  const PlanProgram p = parsed("for _ in range(100000):\n    gather()");
  EXPECT_EQ(flattened_length(p), 100000u);
  EXPECT_THROW(flatten(p), PlanTooLongError);
  EXPECT_EQ(flatten(p, 100000).size(), 100000u);
}

TEST(PlanDsl, UnparseFormatting) {
  const PlanProgram p{{loop(2, {stmt(Action::craft("sword", 2))}), stmt(Action::equip("sword"))}};
  EXPECT_EQ(unparse(p), "for _ in range(2):\n    craft('sword', 2)\nequip('sword')\n");
}

TEST(PlanDsl, RoundTripExamples) {
  for (std::string_view src : {"for i in range(3):\n    gather()", "craft('sword', 2)\nequip('sword')",
                               "move(1, 2)\nfight()"}) {
    const PlanProgram p = parsed(src);
    EXPECT_EQ(parsed(unparse(p)), p) << src;
  }
}

TEST(PlanDsl, RoundTripRandomPrograms) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 300; ++i) {
    const PlanProgram p = random_plans::random_program(gen);
    const std::string text = unparse(p);
    ASSERT_EQ(parsed(text), p) << text;
  }
}

TEST(PlanDsl, MutatedPlansNeverCrash) {
  std::mt19937_64 gen(12);
  for (int i = 0; i < 2000; ++i) {
    const std::string text = random_plans::mutate(unparse(random_plans::random_program(gen)), gen);
    auto r = parse(text);
    if (auto* d = std::get_if<Diagnostic>(&r)) {
      EXPECT_GE(d->line, 1);
      EXPECT_FALSE(d->category.empty());
    }
  }
}

TEST(PlanDsl, ActionToString) {
  EXPECT_EQ(to_string(Action::craft("copper_sword", 2)), "craft('copper_sword', 2)");
  EXPECT_EQ(to_string(Action::move(3, 4)), "move(3, 4)");
  EXPECT_EQ(action_kind_from_string("recycle"), ActionKind::kRecycle);
  EXPECT_FALSE(action_kind_from_string("dance").has_value());
}
