#include "gearquest/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "gearquest/craft_graph.hpp"
#include "gearquest/task_gen.hpp"

namespace gearquest {

namespace {

using Tally = std::map<std::pair<MilestoneKind, std::string>, int>;

constexpr std::array<std::string_view, 5> kFailureNames{"none", "only_gear", "gear_plus_exec", "only_exec",
                                                       "invalid_code"};
constexpr std::array<std::string_view, 5> kMilestoneNames{"gather", "craft", "defeat", "equip", "recycle"};

int positive_gain(const StateDelta& delta) {
  for (const auto& [id, change] : delta.inventory) {
    if (change > 0) return change;
  }
  return 0;
}

std::string gained_item(const StateDelta& delta) {
  for (const auto& [id, change] : delta.inventory) {
    if (change > 0) return id;
  }
  return {};
}

int tally_of(const Tally& tally, MilestoneKind kind, const std::string& subject) {
  const auto it = tally.find({kind, subject});
  return it == tally.end() ? 0 : it->second;
}

std::vector<std::vector<std::string>> alternatives_of(const Task& task) {
  if (!task.alternatives.empty()) return task.alternatives;
  return {task.missing};
}

// Closure of `items`, dropping any the environment cannot produce.
DependencyClosure planned_closure(const WorldDef& env, const std::vector<std::string>& items) {
  std::vector<Ingredient> roots;
  for (const auto& id : items) {
    try {
      const Ingredient one{id, 1};
      dependency_closure(env, std::span<const Ingredient>(&one, 1));
      roots.push_back(one);
    } catch (const CraftError&) {
    }
  }
  if (roots.empty()) return {};
  return dependency_closure(env, roots);
}

int shortfalls(const DependencyClosure& closure, const Tally& tally) {
  int count = 0;
  std::map<std::string, int> gathered;
  for (const auto& g : closure.gather_steps) gathered[g.item_id] += g.qty;
  for (const auto& [item, qty] : gathered) {
    if (tally_of(tally, MilestoneKind::kGather, item) < qty) ++count;
  }
  for (const auto& f : closure.fight_steps) {
    if (tally_of(tally, MilestoneKind::kDefeat, f.monster_id) < f.kills) ++count;
  }
  for (const auto& c : closure.craft_steps) {
    if (tally_of(tally, MilestoneKind::kCraft, c.item_id) < closure.required.at(c.item_id)) ++count;
  }
  return count;
}

// Successful resource-changing events beyond what the milestones ask for.
int redundant_steps(const Task& task, const ExecutionLog& log, const std::vector<Milestone>& milestones) {
  std::map<std::pair<MilestoneKind, std::string>, int> quota;
  for (const auto& m : milestones) quota[{m.kind, m.subject}] = m.quantity;
  Tally seen;
  int redundant = 0;
  auto count = [&](MilestoneKind kind, const std::string& subject, int units) {
    const auto key = std::make_pair(kind, subject);
    const int before = seen[key];
    seen[key] += units;
    const auto it = quota.find(key);
    if (it == quota.end() || before >= it->second) ++redundant;
  };
  for (const auto& e : log.events) {
    if (!e.ok()) continue;
    switch (e.action.kind) {
      case ActionKind::kGather: count(MilestoneKind::kGather, gained_item(e.delta), 1); break;
      case ActionKind::kCraft: count(MilestoneKind::kCraft, e.action.id, positive_gain(e.delta)); break;
      case ActionKind::kRecycle: count(MilestoneKind::kRecycle, e.action.id, e.action.qty); break;
      case ActionKind::kFight:
        if (e.combat && e.combat->monster_id != task.target) count(MilestoneKind::kDefeat, e.combat->monster_id, 1);
        break;
      default: break;
    }
  }
  return redundant;
}

MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd out;
  if (xs.empty()) return out;
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return out;
}

GroupSummary summarize(const std::vector<const EvalReport*>& reports) {
  GroupSummary g;
  g.tasks = static_cast<int>(reports.size());
  if (reports.empty()) return g;
  std::vector<double> progress, prompt, completion;
  int successes = 0;
  std::map<FailureType, int> failures;
  double high = 0.0, exec = 0.0;
  int valid_code = 0;
  for (const EvalReport* r : reports) {
    if (r->success) ++successes;
    progress.push_back(r->progress);
    if (r->token_usage) {
      prompt.push_back(r->token_usage->prompt_tokens);
      completion.push_back(r->token_usage->completion_tokens);
    }
    ++failures[r->errors.failure_type];
    if (r->errors.failure_type != FailureType::kInvalidCode) {
      ++valid_code;
      high += r->errors.high_level_missing;
      exec += r->errors.execution_errors;
    }
  }
  const double n = static_cast<double>(reports.size());
  g.success_rate = 100.0 * successes / n;
  g.progress = mean_sd(progress);
  if (!prompt.empty()) g.prompt_tokens = mean_sd(prompt);
  if (!completion.empty()) g.completion_tokens = mean_sd(completion);
  for (FailureType t : kAllFailureTypes) g.failure_share[t] = 100.0 * failures[t] / n;
  if (valid_code > 0) {
    g.mean_high_level = high / valid_code;
    g.mean_execution = exec / valid_code;
  }
  return g;
}

nlohmann::json mean_sd_json(const MeanSd& m) { return {{"mean", m.mean}, {"sd", m.sd}}; }

nlohmann::json group_json(const GroupSummary& g) {
  nlohmann::json j{{"tasks", g.tasks},
                   {"success_rate", g.success_rate},
                   {"progress", mean_sd_json(g.progress)},
                   {"mean_high_level_missing", g.mean_high_level},
                   {"mean_execution_errors", g.mean_execution}};
  if (g.prompt_tokens) j["prompt_tokens"] = mean_sd_json(*g.prompt_tokens);
  if (g.completion_tokens) j["completion_tokens"] = mean_sd_json(*g.completion_tokens);
  nlohmann::json shares = nlohmann::json::object();
  for (const auto& [t, share] : g.failure_share) shares[std::string(to_string(t))] = share;
  j["failure_share"] = shares;
  return j;
}

std::string fixed(double v, int digits = 1) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::string pm(const MeanSd& m, int digits = 1) { return fixed(m.mean, digits) + " ± " + fixed(m.sd, digits); }

std::string pad(const std::string& s, std::size_t width) {
  // "±" is two bytes but one column.
  std::size_t cols = 0;
  for (unsigned char c : s) cols += (c & 0xC0) != 0x80 ? 1 : 0;
  return cols >= width ? s : s + std::string(width - cols, ' ');
}

}  // namespace

std::string_view to_string(FailureType type) { return kFailureNames.at(static_cast<std::size_t>(type)); }

std::optional<FailureType> failure_type_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kFailureNames.size(); ++i) {
    if (kFailureNames[i] == name) return static_cast<FailureType>(i);
  }
  return std::nullopt;
}

std::string_view to_string(MilestoneKind kind) { return kMilestoneNames.at(static_cast<std::size_t>(kind)); }

Tally milestone_tally(const Task& task, const ExecutionLog& log) {
  Tally tally;
  for (const auto& e : log.events) {
    if (!e.ok()) continue;
    switch (e.action.kind) {
      case ActionKind::kGather: tally[{MilestoneKind::kGather, gained_item(e.delta)}] += 1; break;
      case ActionKind::kCraft: tally[{MilestoneKind::kCraft, e.action.id}] += positive_gain(e.delta); break;
      case ActionKind::kRecycle: tally[{MilestoneKind::kRecycle, e.action.id}] += e.action.qty; break;
      case ActionKind::kFight:
        if (e.combat) tally[{MilestoneKind::kDefeat, e.combat->monster_id}] += 1;
        break;
      case ActionKind::kEquip:
        if (std::find(task.missing.begin(), task.missing.end(), e.action.id) != task.missing.end()) {
          tally[{MilestoneKind::kEquip, e.action.id}] += 1;
        }
        break;
      default: break;
    }
  }
  return tally;
}

std::vector<Milestone> canonical_milestones(const Task& task) {
  const ExecutionLog log = run(task, canonical_solution(task));
  std::vector<Milestone> out;
  for (const auto& [key, qty] : milestone_tally(task, log)) {
    if (qty > 0) out.push_back(Milestone{key.first, key.second, qty});
  }
  return out;
}

bool success(const ExecutionLog& log, const Task& task) {
  if (!log.summary.success) return false;
  return goal_reached(task, replay(task, log));
}

double progress_score(const ExecutionLog& log, const std::vector<Milestone>& milestones, const Task& task) {
  if (milestones.empty()) return success(log, task) ? 100.0 : 0.0;
  const Tally tally = milestone_tally(task, log);
  int achieved = 0;
  for (const auto& m : milestones) {
    if (tally_of(tally, m.kind, m.subject) >= m.quantity) ++achieved;
  }
  return 100.0 * achieved / static_cast<double>(milestones.size());
}

double progress_score(const ExecutionLog& log, const Task& task) {
  return progress_score(log, canonical_milestones(task), task);
}

ErrorBreakdown classify_errors(const Task& task, const std::optional<std::vector<Action>>& program,
                               const ExecutionLog* log) {
  ErrorBreakdown out;
  if (!program || log == nullptr) {
    out.failure_type = FailureType::kInvalidCode;
    return out;
  }

  std::set<std::string> attempted;
  for (const auto& a : *program) {
    if (a.kind == ActionKind::kEquip) attempted.insert(a.id);
  }

  std::vector<std::string> planned;
  if (task.kind == TaskKind::kCombat) {
    std::size_t best = 0;
    int best_missing = -1;
    const auto alternatives = alternatives_of(task);
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
      int missing = 0;
      for (const auto& id : alternatives[i]) missing += attempted.count(id) == 0 ? 1 : 0;
      if (best_missing < 0 || missing < best_missing) {
        best_missing = missing;
        best = i;
      }
    }
    out.high_level_missing = std::max(best_missing, 0);
    if (!alternatives.empty()) {
      for (const auto& id : alternatives[best]) {
        if (attempted.count(id) != 0) planned.push_back(id);
      }
    }
  } else {
    planned.push_back(task.target);
  }

  for (const auto& e : log->events) {
    if (e.ok()) continue;
    const bool target_loss = *e.failure == FailReason::kCombatLoss && e.combat && e.combat->monster_id == task.target;
    if (target_loss && out.high_level_missing > 0) continue;
    ++out.execution_errors;
  }
  out.execution_errors += shortfalls(planned_closure(task.environment, planned), milestone_tally(task, *log));

  const bool won = success(*log, task);
  if (!won && out.high_level_missing == 0 && out.execution_errors == 0) out.execution_errors = 1;

  if (won) {
    out.failure_type = FailureType::kNone;
  } else if (out.high_level_missing > 0) {
    out.failure_type = out.execution_errors > 0 ? FailureType::kGearPlusExec : FailureType::kOnlyGear;
  } else {
    out.failure_type = FailureType::kOnlyExec;
  }
  out.redundant_steps = redundant_steps(task, *log, canonical_milestones(task));
  return out;
}

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json j{{"task_id", r.task_id},
                   {"bracket", r.bracket},
                   {"difficulty", r.difficulty},
                   {"success", r.success},
                   {"progress", r.progress},
                   {"high_level_missing", r.errors.high_level_missing},
                   {"execution_errors", r.errors.execution_errors},
                   {"failure_type", std::string(to_string(r.errors.failure_type))},
                   {"redundant_steps", r.errors.redundant_steps},
                   {"model", r.model}};
  if (r.token_usage) {
    j["token_usage"] = {{"prompt_tokens", r.token_usage->prompt_tokens},
                        {"completion_tokens", r.token_usage->completion_tokens}};
  }
  if (r.parse_error) {
    j["parse_error"] = {{"line", r.parse_error->line},
                        {"col", r.parse_error->col},
                        {"category", r.parse_error->category},
                        {"message", r.parse_error->message}};
  }
  return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.task_id = j.at("task_id").get<std::string>();
  r.bracket = j.at("bracket").get<int>();
  r.difficulty = j.at("difficulty").get<int>();
  r.success = j.at("success").get<bool>();
  r.progress = j.at("progress").get<double>();
  r.errors.high_level_missing = j.at("high_level_missing").get<int>();
  r.errors.execution_errors = j.at("execution_errors").get<int>();
  const auto type = failure_type_from_string(j.at("failure_type").get<std::string>());
  if (!type) throw std::invalid_argument("unknown failure_type " + j.at("failure_type").get<std::string>());
  r.errors.failure_type = *type;
  r.errors.redundant_steps = j.value("redundant_steps", 0);
  r.model = j.value("model", std::string());
  if (j.contains("token_usage")) {
    const auto& u = j.at("token_usage");
    r.token_usage = TokenUsage{u.at("prompt_tokens").get<int>(), u.at("completion_tokens").get<int>()};
  }
  if (j.contains("parse_error")) {
    const auto& p = j.at("parse_error");
    r.parse_error = Diagnostic{p.at("line").get<int>(), p.at("col").get<int>(), p.at("category").get<std::string>(),
                               p.at("message").get<std::string>()};
  }
  return r;
}

EvalReport evaluate(const Task& task, const std::vector<Action>& actions, const ExecutionLog& log) {
  EvalReport r;
  r.task_id = task.id;
  r.bracket = task.bracket;
  r.difficulty = task.difficulty;
  r.success = success(log, task);
  const auto milestones = canonical_milestones(task);
  r.progress = progress_score(log, milestones, task);
  r.errors = classify_errors(task, actions, &log);
  return r;
}

PlanOutcome evaluate_plan_text(const Task& task, std::string_view reply, ExecOptions options) {
  PlanOutcome out;
  auto invalid = [&](Diagnostic d) {
    out.report.task_id = task.id;
    out.report.bracket = task.bracket;
    out.report.difficulty = task.difficulty;
    out.report.errors.failure_type = FailureType::kInvalidCode;
    out.report.parse_error = std::move(d);
    return out;
  };
  const std::string code = extract_code(reply);
  if (code.find_first_not_of(" \t\r\n") == std::string::npos) {
    return invalid(Diagnostic{1, 1, std::string(diag::kSyntax), "empty plan"});
  }
  ParseResult parsed = parse(code);
  if (auto* d = std::get_if<Diagnostic>(&parsed)) return invalid(*d);
  std::vector<Action> actions;
  try {
    actions = flatten(std::get<PlanProgram>(parsed));
  } catch (const PlanTooLongError& e) {
    return invalid(Diagnostic{1, 1, std::string(diag::kTooLong), e.what()});
  }
  ExecutionLog log = run(task, actions, options);
  log.task_id = task.id;
  out.report = evaluate(task, actions, log);
  out.log = std::move(log);
  return out;
}

SuiteSummary aggregate(std::vector<EvalReport> reports) {
  std::sort(reports.begin(), reports.end(), [](const EvalReport& a, const EvalReport& b) {
    return a.bracket != b.bracket ? a.bracket < b.bracket : a.task_id < b.task_id;
  });
  SuiteSummary s;
  std::map<int, std::vector<const EvalReport*>> groups;
  for (const auto& r : reports) groups[r.bracket].push_back(&r);
  for (const auto& [bracket, members] : groups) s.brackets[bracket] = summarize(members);

  std::vector<const EvalReport*> all;
  for (const auto& r : reports) all.push_back(&r);
  s.overall = summarize(all);
  if (s.brackets.empty()) return s;

  std::vector<double> success_rates, progress, prompt, completion, high, exec;
  for (const auto& [bracket, g] : s.brackets) {
    success_rates.push_back(g.success_rate);
    progress.push_back(g.progress.mean);
    if (g.prompt_tokens) prompt.push_back(g.prompt_tokens->mean);
    if (g.completion_tokens) completion.push_back(g.completion_tokens->mean);
    high.push_back(g.mean_high_level);
    exec.push_back(g.mean_execution);
  }
  s.overall.success_rate = mean_sd(success_rates).mean;
  s.overall.progress = mean_sd(progress);
  if (!prompt.empty()) s.overall.prompt_tokens = mean_sd(prompt);
  if (!completion.empty()) s.overall.completion_tokens = mean_sd(completion);
  s.overall.mean_high_level = mean_sd(high).mean;
  s.overall.mean_execution = mean_sd(exec).mean;
  return s;
}

nlohmann::json summary_to_json(const SuiteSummary& summary) {
  nlohmann::json brackets = nlohmann::json::object();
  for (const auto& [b, g] : summary.brackets) brackets[std::to_string(b)] = group_json(g);
  return {{"brackets", brackets}, {"overall", group_json(summary.overall)}};
}

std::string summary_table(const SuiteSummary& summary) {
  std::ostringstream out;
  auto row = [&](const std::vector<std::string>& cells, const std::vector<std::size_t>& widths) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += pad(cells[i], widths[i]) + (i + 1 < cells.size() ? "  " : "");
    line.erase(line.find_last_not_of(' ') + 1);
    out << line << "\n";
  };
  auto tokens = [](const std::optional<MeanSd>& m) { return m ? pm(*m, 0) : std::string("-"); };

  const std::vector<std::size_t> w1{8, 6, 10, 16, 16, 16};
  row({"bracket", "tasks", "success%", "progress", "prompt_tok", "completion_tok"}, w1);
  auto results = [&](const std::string& label, const GroupSummary& g) {
    row({label, std::to_string(g.tasks), fixed(g.success_rate), pm(g.progress), tokens(g.prompt_tokens),
         tokens(g.completion_tokens)},
        w1);
  };
  for (const auto& [b, g] : summary.brackets) results(std::to_string(b), g);
  results("overall", summary.overall);

  out << "\n";
  const std::vector<std::size_t> w2{8, 10, 10, 10, 15, 10, 13};
  row({"bracket", "high_lvl", "exec", "only_gear%", "gear_plus_exec%", "only_exec%", "invalid_code%"}, w2);
  auto failures = [&](const std::string& label, const GroupSummary& g) {
    auto share = [&](FailureType t) {
      const auto it = g.failure_share.find(t);
      return fixed(it == g.failure_share.end() ? 0.0 : it->second);
    };
    row({label, fixed(g.mean_high_level, 2), fixed(g.mean_execution, 2), share(FailureType::kOnlyGear),
         share(FailureType::kGearPlusExec), share(FailureType::kOnlyExec), share(FailureType::kInvalidCode)},
        w2);
  };
  for (const auto& [b, g] : summary.brackets) failures(std::to_string(b), g);
  failures("overall", summary.overall);
  return out.str();
}

}  // namespace gearquest
