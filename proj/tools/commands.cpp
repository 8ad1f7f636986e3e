#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "gearquest/evaluator.hpp"
#include "gearquest/prompt.hpp"
#include "gearquest/task_gen.hpp"
#include "gearquest/world.hpp"

namespace gearquest::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kManifestVersion = 1;

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

struct PlanInput {
  std::string reply;
  std::optional<TokenUsage> usage;
  std::string model;
  std::optional<std::string> task_id;
};

// A runner record is a JSON object with a "completion" field; anything else is the reply itself.
PlanInput read_plan(const std::string& text) {
  PlanInput in;
  in.reply = text;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return in;
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("completion")) return in;
  in.reply = j["completion"].is_string() ? j["completion"].get<std::string>() : std::string();
  in.model = j.value("model", std::string());
  if (j.contains("task_id") && j["task_id"].is_string()) in.task_id = j["task_id"].get<std::string>();
  if (j.contains("usage") && j["usage"].is_object()) {
    const json& u = j["usage"];
    in.usage = TokenUsage{u.value("prompt_tokens", 0), u.value("completion_tokens", 0)};
  }
  return in;
}

std::optional<fs::path> find_plan(const fs::path& dir, const std::string& task_id) {
  for (const char* ext : {".json", ".txt", ".py", ".md", ""}) {
    fs::path p = dir / (task_id + ext);
    if (fs::is_regular_file(p)) return p;
  }
  return std::nullopt;
}

// Runs one plan and writes <id>.log.jsonl and <id>.report.json into out.
void run_one(const Task& task, const std::string& plan_text, const ExecArgs& args) {
  const PlanInput in = read_plan(plan_text);
  if (in.task_id && *in.task_id != task.id) {
    throw TaskError("record_mismatch", "record is for task " + *in.task_id + ", not " + task.id);
  }
  PlanOutcome outcome = evaluate_plan_text(task, in.reply, ExecOptions{args.mode, args.seed});
  outcome.report.token_usage = in.usage;
  outcome.report.model = in.model;
  if (outcome.log) write_file(args.out / (task.id + ".log.jsonl"), log_to_jsonl(*outcome.log));
  write_file(args.out / (task.id + ".report.json"), pretty(report_to_json(outcome.report)));
}

std::vector<fs::path> reports_in(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 12 && name.ends_with(".report.json")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int validate(const fs::path& world_dir, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(world_dir)) {
    err << "error: world directory not found: " << world_dir.string() << "\n";
    return kUsage;
  }
  WorldDef world;
  try {
    world = parse_world_files(world_bundle_files(world_dir));
  } catch (const WorldError& e) {
    out << "schema error: " << e.what() << "\n";
    return kValidationFailure;
  }
  const ValidationReport report = validate_world(world);
  for (const auto& [kind, n] : report.counts) out << kind << ": " << n << "\n";
  for (const auto& v : report.violations) out << "violation " << v.kind << " " << v.subject << ": " << v.message << "\n";
  if (!report.ok()) {
    out << report.violations.size() << " violation(s)\n";
    return kValidationFailure;
  }
  out << "ok " << world_hash(world) << "\n";
  return kOk;
}

int generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(args.world)) {
    err << "error: world directory not found: " << args.world.string() << "\n";
    return kUsage;
  }
  const auto spec_text = read_file(args.spec);
  if (!spec_text) {
    err << "error: cannot read suite spec " << args.spec.string() << "\n";
    return kUsage;
  }
  WorldDef world;
  SuiteSpec spec;
  try {
    world = load_world_dir(args.world);
    spec = suite_spec_from_json(json::parse(*spec_text));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }

  const Suite suite = generate_suite(world, spec);
  fs::create_directories(args.out / "tasks");
  fs::create_directories(args.out / "prompts");
  if (args.with_solutions) fs::create_directories(args.out / "solutions");

  json tasks = json::array();
  for (const Task& t : suite.tasks) {
    const std::string prompt = render_prompt(t);
    write_file(args.out / "tasks" / (t.id + ".json"), serialize_task(t));
    write_file(args.out / "prompts" / (t.id + ".txt"), prompt);
    if (args.with_solutions) write_file(args.out / "solutions" / (t.id + ".py"), unparse(canonical_solution(t)));
    tasks.push_back({{"id", t.id},
                     {"kind", std::string(to_string(t.kind))},
                     {"target", t.target},
                     {"bracket", t.bracket},
                     {"difficulty", t.difficulty},
                     {"task", "tasks/" + t.id + ".json"},
                     {"prompt", "prompts/" + t.id + ".txt"},
                     {"prompt_tokens", token_proxy_count(prompt)}});
  }
  json brackets = json::array();
  for (const auto& b : suite.brackets) {
    const auto& range = spec.brackets.ranges.at(static_cast<std::size_t>(b.bracket - 1));
    brackets.push_back({{"bracket", b.bracket},
                        {"range", {range.first, range.second}},
                        {"requested", b.requested},
                        {"produced", b.produced},
                        {"candidates", b.candidates},
                        {"rejections", b.rejections}});
    if (b.produced < b.requested) {
      err << "bracket " << b.bracket << " [" << range.first << ", " << range.second << "]: produced " << b.produced
          << " of " << b.requested << " (" << b.candidates << " candidates)\n";
    }
  }
  const json manifest{{"schema_version", kManifestVersion},
                      {"world_hash", world_hash(world)},
                      {"template_version", std::string(kPromptTemplateVersion)},
                      {"template_hash", prompt_template_hash()},
                      {"spec", suite_spec_to_json(spec)},
                      {"complete", suite.complete()},
                      {"brackets", brackets},
                      {"tasks", tasks}};
  write_file(args.out / "manifest.json", pretty(manifest));
  out << suite.tasks.size() << " tasks written to " << args.out.string() << "\n";
  return suite.complete() ? kOk : kValidationFailure;
}

int exec(const ExecArgs& args, std::ostream& out, std::ostream& err) {
  const bool single = args.task.has_value() || args.plan.has_value();
  const bool batch = args.suite.has_value() || args.plans.has_value();
  if (single == batch || (single && !(args.task && args.plan)) || (batch && !(args.suite && args.plans))) {
    err << "error: give either --task and --plan, or --suite and --plans\n";
    return kUsage;
  }
  if (args.jobs < 1) {
    err << "error: --jobs must be >= 1\n";
    return kUsage;
  }

  std::optional<WorldDef> world;
  if (args.world) {
    try {
      world = load_world_dir(*args.world);
    } catch (const WorldError& e) {
      err << "error: " << e.what() << "\n";
      return e.kind() == WorldError::Kind::kIo ? kUsage : kValidationFailure;
    }
  }

  // (task file, plan file or nullopt when the plan is absent)
  std::vector<std::pair<fs::path, std::optional<fs::path>>> jobs;
  std::string suite_manifest;
  std::string world_hash_value;
  if (single) {
    if (!fs::is_regular_file(*args.task) || !fs::is_regular_file(*args.plan)) {
      err << "error: task or plan file not found\n";
      return kUsage;
    }
    jobs.emplace_back(*args.task, *args.plan);
  } else {
    const fs::path manifest_path = *args.suite / "manifest.json";
    const auto text = read_file(manifest_path);
    if (!text || !fs::is_directory(*args.plans)) {
      err << "error: suite manifest or plans directory not found\n";
      return kUsage;
    }
    json manifest = json::parse(*text, nullptr, false);
    if (manifest.is_discarded() || !manifest.contains("tasks")) {
      err << "error: malformed suite manifest " << manifest_path.string() << "\n";
      return kValidationFailure;
    }
    suite_manifest = manifest_path.string();
    world_hash_value = manifest.value("world_hash", std::string());
    for (const auto& entry : manifest["tasks"]) {
      const std::string id = entry.at("id").get<std::string>();
      jobs.emplace_back(*args.suite / entry.at("task").get<std::string>(), find_plan(*args.plans, id));
    }
  }

  fs::create_directories(args.out);
  std::atomic<std::size_t> next{0};
  std::atomic<int> status{kOk};
  std::mutex err_mutex;
  auto report_error = [&](const std::string& message, int code) {
    std::lock_guard<std::mutex> lock(err_mutex);
    err << "error: " << message << "\n";
    int expected = kOk;
    status.compare_exchange_strong(expected, code);
  };
  std::mutex hash_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto& [task_path, plan_path] = jobs[i];
      try {
        const Task task = load_task(task_path.string());
        if (world) init_state(*world, task);
        {
          std::lock_guard<std::mutex> lock(hash_mutex);
          if (world_hash_value.empty()) world_hash_value = task.world_hash;
        }
        std::string plan_text;
        if (plan_path) {
          const auto text = read_file(*plan_path);
          if (!text) throw std::runtime_error("cannot read plan " + plan_path->string());
          plan_text = *text;
        }
        run_one(task, plan_text, args);
      } catch (const TaskError& e) {
        report_error(task_path.string() + ": " + e.what(), e.reason() == "io" ? kUsage : kValidationFailure);
      } catch (const std::exception& e) {
        report_error(task_path.string() + ": " + e.what(), kUsage);
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min<int>(args.jobs, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const json run_manifest{{"schema_version", kManifestVersion},
                          {"world_hash", world_hash_value},
                          {"suite_manifest", suite_manifest},
                          {"template_hash", prompt_template_hash()},
                          {"seed", args.seed},
                          {"mode", std::string(to_string(args.mode))},
                          {"jobs", args.jobs},
                          {"out_dir", args.out.string()},
                          {"tasks", jobs.size()}};
  write_file(args.out / "run_manifest.json", pretty(run_manifest));
  out << jobs.size() << " plan(s) executed into " << args.out.string() << "\n";
  return status.load();
}

int score(const fs::path& run_dir, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(run_dir)) {
    err << "error: run directory not found: " << run_dir.string() << "\n";
    return kUsage;
  }
  if (const auto text = read_file(run_dir / "run_manifest.json")) {
    const json run = json::parse(*text, nullptr, false);
    if (run.is_discarded()) {
      err << "error: malformed run_manifest.json\n";
      return kValidationFailure;
    }
    if (run.value("template_hash", std::string()) != prompt_template_hash()) {
      err << "error: run was produced with a different prompt template\n";
      return kValidationFailure;
    }
    const std::string suite_path = run.value("suite_manifest", std::string());
    if (!suite_path.empty()) {
      const auto suite_text = read_file(suite_path);
      const json suite = suite_text ? json::parse(*suite_text, nullptr, false) : json();
      if (!suite.is_object() || suite.value("world_hash", std::string()) != run.value("world_hash", std::string()) ||
          suite.value("template_hash", std::string()) != prompt_template_hash()) {
        err << "error: suite manifest " << suite_path << " is missing or does not match the run hashes\n";
        return kValidationFailure;
      }
    }
  }

  std::vector<EvalReport> reports;
  try {
    for (const auto& path : reports_in(run_dir)) reports.push_back(report_from_json(json::parse(*read_file(path))));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  if (reports.empty()) {
    err << "error: no reports in " << run_dir.string() << "\n";
    return kValidationFailure;
  }
  const SuiteSummary summary = aggregate(reports);
  const std::string table = summary_table(summary);
  write_file(run_dir / "summary.json", pretty(summary_to_json(summary)));
  write_file(run_dir / "summary.txt", table);
  out << table;
  return kOk;
}

int analyze(const fs::path& run_dir, bool as_json, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(run_dir)) {
    err << "error: run directory not found: " << run_dir.string() << "\n";
    return kUsage;
  }
  std::map<std::string, int> by_type;
  std::map<std::string, int> by_reason;
  std::map<std::string, int> parse_categories;
  json rows = json::array();
  try {
    for (const auto& path : reports_in(run_dir)) {
      const EvalReport r = report_from_json(json::parse(*read_file(path)));
      ++by_type[std::string(to_string(r.errors.failure_type))];
      if (r.parse_error) ++parse_categories[r.parse_error->category];
      std::string first_failure;
      if (const auto log_text = read_file(run_dir / (r.task_id + ".log.jsonl"))) {
        for (const Event& e : log_from_jsonl(*log_text).events) {
          if (e.ok()) continue;
          ++by_reason[std::string(to_string(*e.failure))];
          if (first_failure.empty()) {
            first_failure = "#" + std::to_string(e.index) + " " + to_string(e.action) + ": " + std::string(to_string(*e.failure));
          }
        }
      }
      rows.push_back({{"task_id", r.task_id},
                      {"bracket", r.bracket},
                      {"failure_type", std::string(to_string(r.errors.failure_type))},
                      {"high_level_missing", r.errors.high_level_missing},
                      {"execution_errors", r.errors.execution_errors},
                      {"redundant_steps", r.errors.redundant_steps},
                      {"first_failure", first_failure}});
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  if (rows.empty()) {
    err << "error: no reports in " << run_dir.string() << "\n";
    return kValidationFailure;
  }
  if (as_json) {
    out << pretty({{"failure_types", by_type}, {"failure_reasons", by_reason}, {"parse_errors", parse_categories},
                   {"tasks", rows}});
    return kOk;
  }
  out << "failure types:\n";
  for (const auto& [k, n] : by_type) out << "  " << k << " " << n << "\n";
  out << "failed actions by reason:\n";
  for (const auto& [k, n] : by_reason) out << "  " << k << " " << n << "\n";
  if (!parse_categories.empty()) {
    out << "invalid code by category:\n";
    for (const auto& [k, n] : parse_categories) out << "  " << k << " " << n << "\n";
  }
  out << "tasks:\n";
  for (const auto& row : rows) {
    out << "  " << row["task_id"].get<std::string>() << " b" << row["bracket"].get<int>() << " "
        << row["failure_type"].get<std::string>() << " high=" << row["high_level_missing"].get<int>()
        << " exec=" << row["execution_errors"].get<int>() << " redundant=" << row["redundant_steps"].get<int>();
    const std::string first = row["first_failure"].get<std::string>();
    if (!first.empty()) out << " first_failure=" << first;
    out << "\n";
  }
  return kOk;
}

}  // namespace gearquest::cli
