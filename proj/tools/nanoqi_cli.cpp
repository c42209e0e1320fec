// nanoqi: scenario-driven front end. One subcommand per task, plus "run"
// which takes the task from the scenario file.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nanoqi/runner.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Two-photon helicity entanglement through nanoapertures"};
  app.set_version_flag("--version", nanoqi::kToolVersion);
  app.require_subcommand(1);

  std::string scenario;
  std::string out;
  std::uint64_t seed = 0;
  int repeats = 0;

  const char *names[] = {"run", "prepare", "hom-scan", "tomography", "aperture-sweep", "metrics"};
  for (const char *name : names) {
    auto *sub = app.add_subcommand(name, std::string(name) == "run" ? "Run the task named in the scenario"
                                                                     : std::string("Run the ") + name + " task");
    sub->add_option("--scenario", scenario, "Scenario file (JSON)")->required();
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "Master seed override");
    sub->add_option("--repeats", repeats, "Repeats per sampled point")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto *sub = app.get_subcommands().front();
  std::optional<nanoqi::Task> task;
  if (sub->get_name() != "run") task = nanoqi::task_from_string(sub->get_name());

  nanoqi::RunOverrides o;
  if (sub->count("--out")) o.out = out;
  if (sub->count("--seed")) o.seed = seed;
  if (sub->count("--repeats")) o.repeats = repeats;
  return nanoqi::run_scenario(scenario, task, o, std::cerr);
}
