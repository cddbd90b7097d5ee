// armed: reward pipeline diagnostics.

#include <CLI11.hpp>
#include <iostream>

#include "armed/error.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace armed::cli;

  CLI::App app{"Adaptive semantic reward pipeline: scoring, replay, simulation and evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every stochastic component")->default_val(0);
  app.add_option("--config", g.config_path, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--embeddings", g.embeddings, "mock | file:PATH | service:URL")
      ->default_val("mock");

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Score {id, response, reference} records");
  score_cmd->add_option("--input", score.input, "Line-delimited JSON input")->required();
  score_cmd->add_option("--output", score.output, "Output path (default stdout)");
  score_cmd->add_option("--batch-size", score.batch_size, "Records per threshold update")
      ->default_val(8);
  score_cmd->add_option("--resume", score.resume_prefix, "Load PREFIX.{bert,cos}.state");
  score_cmd->add_option("--save", score.save_prefix, "Write PREFIX.{bert,cos}.state");

  ReplayOptions replay;
  auto* replay_cmd =
      app.add_subcommand("adapt-replay", "Replay {batch, metric, scores} through the controller");
  replay_cmd->add_option("--input", replay.input, "Line-delimited JSON input")->required();
  replay_cmd->add_option("--output", replay.output, "Trajectory CSV (default stdout)");
  replay_cmd->add_option("--mapped-output", replay.mapped_output, "Mapped scores, JSON lines");
  replay_cmd->add_option("--resume", replay.resume_prefix, "Load PREFIX.<metric>.state");
  replay_cmd->add_option("--save", replay.save_prefix, "Write PREFIX.<metric>.state");

  SimOptions sim;
  auto* sim_cmd = app.add_subcommand("grpo-sim", "Toy-policy GRPO training under a reward scheme");
  sim_cmd->add_option("--scheme", sim.scheme, "raw | adaptive | lexical-only")
      ->default_val("adaptive");
  sim_cmd->add_option("--task", sim.task,
                      "overlap | paraphrase (default: overlap for lexical-only, else paraphrase)");
  sim_cmd->add_option("--steps", sim.steps, "Training steps")->default_val(400);
  sim_cmd->add_option("--G", sim.group_size, "Responses per query (default from config)");
  sim_cmd->add_option("--temperature", sim.temperature, "Sampling temperature (default from config)");
  sim_cmd->add_option("--lr", sim.learning_rate, "Gradient ascent step size")->default_val(1.0);
  sim_cmd->add_option("--inner-iterations", sim.inner_iterations, "Updates per sampled batch")
      ->default_val(1);
  sim_cmd->add_option("--output", sim.output, "Telemetry CSV (default stdout)");

  SelectOptions select;
  auto* select_cmd =
      app.add_subcommand("select-knowledge", "Frequency split and per-answer k-means exemplars");
  select_cmd->add_option("--input", select.input, "QA records, JSON lines")->required();
  select_cmd->add_option("--threshold", select.threshold, "Answers seen more often are frequent")
      ->required();
  select_cmd->add_option("--per-cluster-target", select.per_cluster_target,
                         "Target records per cluster")
      ->default_val(5);
  select_cmd->add_option("--output", select.output, "Exemplar records (default stdout)");
  select_cmd->add_option("--summary", select.summary, "Per-group CSV summary");
  select_cmd->add_option("--frequency-table", select.frequency_table, "Answer frequency CSV");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "HSS / accuracy over a predictions file");
  eval_cmd->add_option("--input", eval.input, "{id, prediction, reference, metric} JSON lines")
      ->required();
  eval_cmd->add_option("--output", eval.output, "Per-record CSV (default stdout)");
  eval_cmd->add_option("--summary", eval.summary, "Summary CSV (default stderr)");

  DiagnoseOptions diag;
  auto* diag_cmd = app.add_subcommand("diagnose-collapse", "Reward distribution statistics");
  diag_cmd->add_option("--input", diag.input, "One number per line, or JSON lines with --field")
      ->required();
  diag_cmd->add_option("--field", diag.field, "Numeric field to read from JSON lines");
  diag_cmd->add_option("--metric", diag.metric, "Name echoed in the report")->default_val("score");
  diag_cmd->add_option("--bins", diag.bins, "Histogram bins over [0,1]")->default_val(10);
  diag_cmd->add_option("--output", diag.output, "Report CSV (default stdout)");

  RefinementOptions refine;
  auto* refine_cmd =
      app.add_subcommand("validate-refinements", "Check refinement records, one JSON per line");
  refine_cmd->add_option("--input", refine.input, "Input file")->required();
  refine_cmd->add_option("--output", refine.output, "Accepted records (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*score_cmd) return run_score(g, score);
    if (*replay_cmd) return run_adapt_replay(g, replay);
    if (*sim_cmd) return run_grpo_sim(g, sim);
    if (*select_cmd) return run_select_knowledge(g, select);
    if (*eval_cmd) return run_eval(g, eval);
    if (*diag_cmd) return run_diagnose_collapse(g, diag);
    if (*refine_cmd) return run_validate_refinements(g, refine);
  } catch (const armed::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
