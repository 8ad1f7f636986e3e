#include <benchmark/benchmark.h>

#include <fstream>

#include "bench_world.hpp"
#include "gearquest/prompt.hpp"
#include "gearquest/task_gen.hpp"

using namespace gearquest;

namespace {

SuiteSpec bench_spec(int per_bracket) {
  std::ifstream in(std::filesystem::path(GEARQUEST_CONFIG_DIR) / "suite.json");
  SuiteSpec spec = suite_spec_from_json(nlohmann::json::parse(in));
  spec.per_bracket_count = per_bracket;
  return spec;
}

void BM_GenerateSuite(benchmark::State& state) {
  const SuiteSpec spec = bench_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate_suite(bench_world(), spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * kBracketCount);
}
BENCHMARK(BM_GenerateSuite)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_RenderPrompt(benchmark::State& state) {
  const Suite suite = generate_suite(bench_world(), bench_spec(2));
  const Task& t = suite.tasks.back();
  for (auto _ : state) benchmark::DoNotOptimize(render_prompt(t));
}
BENCHMARK(BM_RenderPrompt)->Unit(benchmark::kMicrosecond);

}  // namespace
