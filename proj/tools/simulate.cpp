#include <algorithm>
#include <iostream>

#include "armed/simulation.hpp"
#include "commands.hpp"

namespace armed::cli {

int run_grpo_sim(const GlobalOptions& g, const SimOptions& o) {
  const auto cfg = g.load_config();
  SimConfig sim;
  sim.scheme = parse_scheme(o.scheme);
  sim.steps = o.steps;
  sim.seed = g.seed;
  sim.learning_rate = o.learning_rate;
  sim.inner_iterations = o.inner_iterations;
  sim.weights = cfg.weights;
  sim.adapt = cfg.adapt;
  // The simulation keeps its own advantage floor unless the config file
  // overrides std_eps.
  const double std_eps = sim.grpo.std_eps;
  sim.grpo = cfg.grpo;
  if (g.config_path.empty()) sim.grpo.std_eps = std_eps;
  if (o.group_size != 0) sim.grpo.group_size = o.group_size;
  if (o.temperature != 0.0) sim.grpo.temperature = o.temperature;

  std::string task_name = o.task;
  if (task_name.empty()) {
    task_name = sim.scheme == RewardScheme::kLexicalOnly ? "overlap" : "paraphrase";
  }
  const auto result = simulate_training(task_by_name(task_name), sim);
  OutputFile out(o.output);
  write_telemetry_csv(out.stream(), result.telemetry);
  return 0;
}

}  // namespace armed::cli
