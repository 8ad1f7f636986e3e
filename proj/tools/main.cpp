#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = gearquest::cli;

int main(int argc, char** argv) {
  CLI::App app{"gearquest: generate, execute and score gear-planning tasks"};
  app.require_subcommand(1);

  std::string world_dir;
  auto* validate = app.add_subcommand("validate", "Check a world bundle for schema and reference errors");
  validate->add_option("world_dir", world_dir, "World bundle directory")->required();

  cli::GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a task suite with prompts and a manifest");
  generate->add_option("--world", gen.world, "World bundle directory")->required();
  generate->add_option("--spec", gen.spec, "Suite spec JSON")->required();
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_flag("--with-solutions", gen.with_solutions, "Also write canonical solutions");

  cli::ExecArgs ex;
  std::string mode = "deterministic";
  auto* exec = app.add_subcommand("exec", "Execute plan files and write logs and reports");
  exec->add_option("--task", ex.task, "Task JSON (single mode)");
  exec->add_option("--plan", ex.plan, "Plan text or runner record (single mode)");
  exec->add_option("--suite", ex.suite, "Suite directory with manifest.json (batch mode)");
  exec->add_option("--plans", ex.plans, "Directory of <task_id>.{json,txt,py,md} plans (batch mode)");
  exec->add_option("--world", ex.world, "World bundle to check task hashes against");
  exec->add_option("--out", ex.out, "Output directory")->required();
  exec->add_option("--mode", mode, "deterministic or stochastic")->check(CLI::IsMember({"deterministic", "stochastic"}));
  exec->add_option("--seed", ex.seed, "Drop seed for stochastic mode");
  exec->add_option("--jobs", ex.jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string run_dir;
  auto* score = app.add_subcommand("score", "Aggregate reports into summary.json and summary.txt");
  score->add_option("run_dir", run_dir, "Directory of *.report.json files")->required();

  bool as_json = false;
  auto* analyze = app.add_subcommand("analyze", "Dump the error taxonomy of a run");
  analyze->add_option("run_dir", run_dir, "Directory of reports and logs")->required();
  analyze->add_flag("--json", as_json, "Print JSON instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  if (validate->parsed()) return cli::validate(world_dir, std::cout, std::cerr);
  if (generate->parsed()) return cli::generate(gen, std::cout, std::cerr);
  if (exec->parsed()) {
    ex.mode = *gearquest::exec_mode_from_string(mode);
    return cli::exec(ex, std::cout, std::cerr);
  }
  if (score->parsed()) return cli::score(run_dir, std::cout, std::cerr);
  return cli::analyze(run_dir, as_json, std::cout, std::cerr);
}
