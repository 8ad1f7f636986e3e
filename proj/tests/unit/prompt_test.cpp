#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>

#include "fixtures.hpp"
#include "gearquest/prompt.hpp"
#include "gearquest/task_gen.hpp"

using namespace gearquest;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

Task reference_bracket_one_task() {
  const WorldDef& w = fixtures::reference_world();
  for (const auto& [id, m] : w.monsters) {
    try {
      Task t = generate_combat_task(w, id, {1, false, 0, 1});
      if (t.bracket == 1) return t;
    } catch (const TaskError&) {
    }
  }
  throw std::runtime_error("no bracket-1 task");
}

}  // namespace

TEST(Prompt, TokenProxy) {
  EXPECT_EQ(token_proxy_count(""), 0u);
  EXPECT_EQ(token_proxy_count("  a b\n\tc  "), 3u);
}

TEST(Prompt, BracketOneLength) {
  const std::size_t n = token_proxy_count(render_prompt(reference_bracket_one_task()));
  EXPECT_GE(n, 800u);
  EXPECT_LE(n, 3000u);
}

TEST(Prompt, Deterministic) {
  const Task t = fixtures::toy_task("golem", 2, true, 2);
  EXPECT_EQ(render_prompt(t), render_prompt(t));
}

TEST(Prompt, MentionsTargetAndMissingContext) {
  const Task t = fixtures::toy_task("wolf", 1);
  const std::string p = render_prompt(t);
  EXPECT_NE(p.find("wolf"), std::string::npos);
  EXPECT_NE(p.find("copper_sword"), std::string::npos);
  EXPECT_EQ(p.find("{{"), std::string::npos);
}

TEST(Prompt, NoiseRenderedLikeRealRecipes) {
  const Task t = fixtures::toy_task("slime", 1, false, 2);
  ASSERT_FALSE(t.noise.empty());
  const std::string p = lower(render_prompt(t));
  for (const char* marker : {"noise", "distractor", "decoy", "unobtainable", "uncraftable"})
    EXPECT_EQ(p.find(marker), std::string::npos) << marker;
  for (const auto& id : t.noise) EXPECT_NE(p.find(id), std::string::npos) << id;
}

TEST(Prompt, TemplateHashIsStable) {
  EXPECT_EQ(prompt_template_hash(), prompt_template_hash());
  EXPECT_EQ(prompt_template_hash().size(), 64u);
  EXPECT_EQ(fixtures::toy_task("wolf", 1).template_hash, prompt_template_hash());
}
