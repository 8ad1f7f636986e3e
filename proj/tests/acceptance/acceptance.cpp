// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "fixtures.hpp"
#include "gearquest/evaluator.hpp"
#include "gearquest/gear_search.hpp"
#include "gearquest/prompt.hpp"
#include "gearquest/task_gen.hpp"
#include "oracles.hpp"
#include "partition_cases.hpp"
#include "random_plans.hpp"

using namespace gearquest;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Verdict {
  bool ok = true;
  std::string detail;
  std::vector<std::string> problems;
  void fail(const std::string& what) {
    ok = false;
    if (problems.size() < 5) problems.push_back(what);
  }
};

int failures = 0;

void report(const std::string& name, const std::function<Verdict()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream line;
  line << (v.ok ? "PASS " : "FAIL ") << name << ": " << v.detail;
  line.precision(2);
  line << std::fixed << " (" << secs << " s)";
  for (const auto& p : v.problems) line << "\n    " << p;
  std::cout << line.str() << std::endl;
  if (!v.ok) ++failures;
}

struct GeneratedSuite {
  fs::path dir;
  std::vector<Task> tasks;
  json manifest;
  int code = -1;
  std::string err;
};

GeneratedSuite generate_into(const fs::path& dir) {
  GeneratedSuite g;
  g.dir = dir;
  std::ostringstream out;
  std::ostringstream err;
  cli::GenerateArgs args{fixtures::data_dir() / "reference_world", fixtures::config_dir() / "suite.json", dir, true};
  g.code = cli::generate(args, out, err);
  g.err = err.str();
  g.manifest = json::parse(slurp(dir / "manifest.json"));
  for (const auto& entry : g.manifest["tasks"]) g.tasks.push_back(load_task((dir / entry["task"].get<std::string>()).string()));
  return g;
}

const GeneratedSuite& suite() {
  static const GeneratedSuite s = generate_into(fixtures::fresh_dir("acceptance_suite_a"));
  return s;
}

std::vector<const Item*> items_of(const Task& t, const std::vector<std::string>& ids) {
  std::vector<const Item*> out;
  for (const auto& id : ids) out.push_back(t.environment.find_item(id));
  return out;
}

std::string ids_text(const std::vector<std::string>& ids) {
  std::string s = "{";
  for (const auto& id : ids) s += (s.size() > 1 ? "," : "") + id;
  return s + "}";
}

Verdict gear_minimality() {
  Verdict v;
  int checked = 0;
  for (const Task& t : suite().tasks) {
    if (t.kind != TaskKind::kCombat) continue;
    ++checked;
    std::vector<std::string> gear = t.equipped;
    gear.insert(gear.end(), t.missing.begin(), t.missing.end());
    const StatVector& monster = t.environment.find_monster(t.target)->stats;
    const int level = t.character.level;
    if (!oracle::wins(level, items_of(t, gear), monster)) v.fail(t.id + ": G* " + ids_text(gear) + " loses");
    for (std::size_t i = 0; i < gear.size(); ++i) {
      std::vector<std::string> fewer = gear;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
      if (oracle::wins(level, items_of(t, fewer), monster)) v.fail(t.id + ": " + ids_text(fewer) + " still wins");
    }
  }
  v.detail = std::to_string(checked) + " combat tasks, win with G* and loss on every single removal";
  if (checked == 0) v.fail("no combat tasks generated");
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  std::mt19937_64 gen(77);
  int pools = 0;
  auto compare = [&](const Monster& m, const std::vector<Item>& pool, const std::string& label) {
    ++pools;
    const auto expected = oracle::minimal_sets(m.stats, m.difficulty_level, pool);
    std::vector<std::vector<std::string>> fast;
    std::vector<std::vector<std::string>> full;
    for (const auto& s : minimal_winning_gear(m, pool)) fast.push_back(s.item_ids());
    for (const auto& s : exhaustive_minimal_gear(m, pool)) full.push_back(s.item_ids());
    if (fast != expected) v.fail(label + ": minimal_winning_gear differs from brute force");
    if (full != expected) v.fail(label + ": exhaustive_minimal_gear differs from brute force");
  };

  // Toy world: random sub-pools of every equippable item against every monster.
  const WorldDef& toy = fixtures::toy_world();
  const auto toy_items = items_at_or_below_level(toy, 5);
  for (int i = 0; i < 30; ++i) {
    std::vector<Item> pool;
    for (const Item& it : toy_items)
      if (gen() % 3 != 0) pool.push_back(it);
    for (const auto& [id, m] : toy.monsters) compare(m, pool, "toy pool " + std::to_string(i) + " vs " + id);
  }
  // Reference world: 12-item samples from the monster's level-feasible items.
  const WorldDef& ref = fixtures::reference_world();
  for (const auto& [id, m] : ref.monsters) {
    auto candidates = items_at_or_below_level(ref, m.difficulty_level);
    for (int i = 0; i < 2; ++i) {
      std::shuffle(candidates.begin(), candidates.end(), gen);
      std::vector<Item> pool(candidates.begin(), candidates.begin() + std::min<std::ptrdiff_t>(12, std::ssize(candidates)));
      compare(m, pool, "reference pool vs " + id);
    }
  }
  v.detail = std::to_string(pools) + " pools of <= 12 items, zero mismatches";
  if (pools < 50) v.fail("fewer than 50 pools");
  return v;
}

Verdict auxiliary_indicator() {
  Verdict v;
  int pairs = 0;
  int with_aux = 0;
  for (const Task& t : suite().tasks) {
    if (t.kind != TaskKind::kCombat) continue;
    if (!t.auxiliary.empty()) ++with_aux;
    std::vector<std::string> gear = t.equipped;
    gear.insert(gear.end(), t.auxiliary.begin(), t.auxiliary.end());
    for (const auto& [id, m] : t.environment.monsters) {
      ++pairs;
      const bool won = oracle::wins(t.character.level, items_of(t, gear), m.stats);
      if (won != (id != t.target)) v.fail(t.id + ": equipped+aux vs " + id + (won ? " wins" : " loses"));
    }
  }
  v.detail = std::to_string(pairs) + " (task, scenario monster) pairs; " + std::to_string(with_aux) +
             " tasks carry auxiliary items";
  return v;
}

Verdict difficulty_formula() {
  Verdict v;
  const WorldDef& ref = fixtures::reference_world();
  int lo = 1 << 30;
  int hi = 0;
  for (const Task& t : suite().tasks) {
    const int expected = t.kind == TaskKind::kCombat ? oracle::difficulty(ref, t.missing) : 1 + oracle::cost(ref, t.target);
    if (expected != t.difficulty)
      v.fail(t.id + ": stored " + std::to_string(t.difficulty) + ", recomputed " + std::to_string(expected));
    lo = std::min(lo, t.difficulty);
    hi = std::max(hi, t.difficulty);
    if (t.difficulty < 2 || t.difficulty > 97) v.fail(t.id + ": difficulty " + std::to_string(t.difficulty) + " outside [2, 97]");
  }
  v.detail = std::to_string(suite().tasks.size()) + " tasks match the recomputed formula; observed range [" +
             std::to_string(lo) + ", " + std::to_string(hi) + "]";
  return v;
}

Verdict suite_shape() {
  Verdict v;
  const GeneratedSuite& s = suite();
  if (s.code != cli::kOk) v.fail("generate exited " + std::to_string(s.code) + ": " + s.err);
  std::map<int, int> per_bracket;
  std::size_t lo = SIZE_MAX;
  std::size_t hi = 0;
  for (const auto& entry : s.manifest["tasks"]) {
    ++per_bracket[entry["bracket"].get<int>()];
    const std::string prompt = slurp(s.dir / entry["prompt"].get<std::string>());
    const std::size_t n = token_proxy_count(prompt);
    if (n != entry["prompt_tokens"].get<std::size_t>()) v.fail(entry["id"].get<std::string>() + ": token count mismatch");
    lo = std::min(lo, n);
    hi = std::max(hi, n);
    if (n < 800 || n > 13200) v.fail(entry["id"].get<std::string>() + ": " + std::to_string(n) + " tokens");
  }
  const std::size_t files = static_cast<std::size_t>(std::distance(fs::directory_iterator(s.dir / "tasks"), fs::directory_iterator{}));
  if (s.tasks.size() != 180 || files != 180) v.fail("expected 180 tasks, got " + std::to_string(files));
  if (per_bracket.size() != 9) v.fail("expected 9 non-empty brackets, got " + std::to_string(per_bracket.size()));
  for (const auto& [b, n] : per_bracket)
    if (n != 20) v.fail("bracket " + std::to_string(b) + " has " + std::to_string(n) + " tasks");
  v.detail = std::to_string(files) + " task files in " + std::to_string(per_bracket.size()) +
             " brackets; prompt tokens [" + std::to_string(lo) + ", " + std::to_string(hi) + "] within [800, 13200]";
  return v;
}

Verdict canonical_solvability() {
  Verdict v;
  std::vector<Task> tasks = suite().tasks;
  for (const auto& [id, m] : fixtures::toy_world().monsters) {
    for (int k = 1; k <= 3; ++k)
      for (int variant = 0; variant < 4; ++variant) {
        try {
          tasks.push_back(fixtures::toy_task(id, k, variant % 2 == 1, variant >= 2 ? 2 : 0));
        } catch (const TaskError&) {
        }
      }
  }
  int leveling = 0;
  int noise_checked = 0;
  for (const Task& t : tasks) {
    if (t.mechanics.leveling) ++leveling;
    const PlanOutcome out = evaluate_plan_text(t, unparse(canonical_solution(t)));
    if (!out.report.success || out.report.progress != 100.0)
      v.fail(t.id + ": success=" + std::to_string(out.report.success) + " progress=" + std::to_string(out.report.progress));
    for (const auto& noise : t.noise) {
      Simulator sim(t, {});
      for (const Action& a : flatten(canonical_solution(t))) sim.step(a);
      const Recipe* r = t.environment.recipe_for(noise);
      const auto shops = r == nullptr ? std::vector<Coord>{} : t.environment.workshop_coords(r->workshop);
      if (shops.empty()) {
        v.fail(t.id + ": noise item " + noise + " has no reachable workshop");
        continue;
      }
      sim.step(Action::move(shops.front().x, shops.front().y));
      const Event e = sim.step(Action::craft(noise, 1));
      ++noise_checked;
      if (e.failure != FailReason::kMissingIngredients)
        v.fail(t.id + ": craft(" + noise + ") gave " + (e.failure ? std::string(to_string(*e.failure)) : "success"));
    }
  }

  // The same check through the command line on the written solutions.
  const fs::path run_dir = fixtures::fresh_dir("acceptance_exec");
  cli::ExecArgs args;
  args.suite = suite().dir;
  args.plans = suite().dir / "solutions";
  args.out = run_dir;
  args.jobs = 4;
  std::ostringstream out;
  std::ostringstream err;
  if (cli::exec(args, out, err) != cli::kOk) v.fail("exec exited non-zero: " + err.str());
  for (const Task& t : suite().tasks) {
    const json r = json::parse(slurp(run_dir / (t.id + ".report.json")));
    if (!r["success"].get<bool>()) v.fail(t.id + ": cli exec report not successful");
  }
  v.detail = std::to_string(tasks.size()) + " tasks (" + std::to_string(leveling) + " leveling) succeed with progress 100; " +
             std::to_string(noise_checked) + " noise crafts fail with missing_ingredients";
  if (noise_checked == 0) v.fail("no noise items exercised");
  return v;
}

Verdict determinism() {
  Verdict v;
  const GeneratedSuite again = generate_into(fixtures::fresh_dir("acceptance_suite_b"));
  int files = 0;
  for (const char* sub : {"tasks", "prompts", "solutions"}) {
    for (const auto& entry : fs::directory_iterator(suite().dir / sub)) {
      ++files;
      const fs::path other = again.dir / sub / entry.path().filename();
      if (slurp(entry.path()) != slurp(other)) v.fail(std::string(sub) + "/" + entry.path().filename().string() + " differs");
    }
  }
  if (slurp(suite().dir / "manifest.json") != slurp(again.dir / "manifest.json")) v.fail("manifest differs");

  int logs = 0;
  for (const Task& t : suite().tasks) {
    const PlanProgram plan = canonical_solution(t);
    for (ExecMode mode : {ExecMode::kDeterministic, ExecMode::kStochastic}) {
      ++logs;
      if (log_to_jsonl(run(t, plan, {mode, 11})) != log_to_jsonl(run(t, plan, {mode, 11})))
        v.fail(t.id + ": " + std::string(to_string(mode)) + " log differs on rerun");
    }
  }

  const Task fixture = generate_combat_task(fixtures::drop_arena(0.5), "warden", {1, false, 0, 3});
  std::vector<Action> hunt{Action::equip("club"), Action::move(0, 1)};
  for (int i = 0; i < 20; ++i) {
    hunt.push_back(Action::fight());
    hunt.push_back(Action::rest());
  }
  auto drops = [&](std::uint64_t seed) {
    std::vector<int> out;
    for (const auto& e : run(fixture, hunt, {ExecMode::kStochastic, seed}).events)
      if (e.combat) out.push_back(e.delta.inventory.count("fang") != 0 ? 1 : 0);
    return out;
  };
  if (log_to_jsonl(run(fixture, hunt, {ExecMode::kStochastic, 1})) != log_to_jsonl(run(fixture, hunt, {ExecMode::kStochastic, 1})))
    v.fail("stochastic fixture log differs for equal seeds");
  if (drops(1) == drops(2)) v.fail("seeds 1 and 2 produce identical drop events at rate 0.5");
  v.detail = std::to_string(files) + " generated files identical across runs; " + std::to_string(logs) +
             " logs identical on rerun; seeds 1 and 2 differ on the rate-0.5 fixture";
  return v;
}

Verdict dsl_robustness() {
  Verdict v;
  std::mt19937_64 gen(2025);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> len(0, 200);
  int diagnostics = 0;
  auto survive = [&](const std::string& text) {
    try {
      const ParseResult r = parse(text);
      if (const auto* d = std::get_if<Diagnostic>(&r)) {
        ++diagnostics;
        if (d->line < 1 || d->col < 1 || d->category.empty()) v.fail("malformed diagnostic");
      } else {
        flatten(std::get<PlanProgram>(r), SIZE_MAX);
      }
    } catch (const PlanTooLongError&) {
    } catch (const std::exception& e) {
      v.fail(std::string("parser threw: ") + e.what());
    }
  };
  // Biased alphabet so random strings reach deeper parser states.
  static constexpr std::string_view kPlanBytes = "for_in range():\n    gather()fight()craft('x', 2)move(1, 2)#\"\\";
  std::uniform_int_distribution<std::size_t> plan_byte(0, kPlanBytes.size() - 1);
  for (int i = 0; i < 100000; ++i) {
    std::string s(static_cast<std::size_t>(len(gen)), '\0');
    const bool biased = i % 2 == 1;
    for (char& c : s) c = biased ? kPlanBytes[plan_byte(gen)] : static_cast<char>(byte(gen));
    survive(s);
  }
  for (int i = 0; i < 1000; ++i) survive(random_plans::mutate(unparse(random_plans::random_program(gen)), gen));
  int round_trips = 0;
  for (int i = 0; i < 1000; ++i) {
    const PlanProgram p = random_plans::random_program(gen);
    const ParseResult r = parse(unparse(p));
    const auto* back = std::get_if<PlanProgram>(&r);
    if (back == nullptr || !(*back == p)) {
      v.fail("round trip failed for:\n" + unparse(p));
    } else {
      ++round_trips;
    }
  }
  v.detail = "101000 fuzz inputs without a crash (" + std::to_string(diagnostics) + " diagnostics); " +
             std::to_string(round_trips) + "/1000 random programs round-trip";
  return v;
}

Verdict evaluator_partition() {
  Verdict v;
  std::set<FailureType> covered;
  const auto cases = partition_cases::all();
  for (const auto& c : cases) {
    ErrorBreakdown got = evaluate_plan_text(c.task, c.reply).report.errors;
    got.redundant_steps = 0;
    covered.insert(got.failure_type);
    if (!(got == c.expected)) {
      v.fail(c.name + ": got (" + std::to_string(got.high_level_missing) + ", " + std::to_string(got.execution_errors) +
             ", " + std::string(to_string(got.failure_type)) + ")");
    }
  }
  if (covered.size() != kAllFailureTypes.size()) v.fail("fixture does not cover all five failure types");
  v.detail = std::to_string(cases.size()) + " fixture cases reproduce their (high_level, execution, type) triples";
  return v;
}

}  // namespace

int main() {
  report("gear minimality", gear_minimality);
  report("oracle equivalence", oracle_equivalence);
  report("auxiliary indicator", auxiliary_indicator);
  report("difficulty formula", difficulty_formula);
  report("suite shape", suite_shape);
  report("canonical solvability", canonical_solvability);
  report("determinism", determinism);
  report("dsl robustness", dsl_robustness);
  report("evaluator partition", evaluator_partition);
  return failures == 0 ? 0 : 1;
}
