#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "armed/config.hpp"
#include "armed/embeddings.hpp"

namespace armed::cli {

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string embeddings = "mock";

  PipelineConfig load_config() const;
  std::unique_ptr<EmbeddingSource> embedder(const PipelineConfig& cfg) const;
};

// Fixed six-decimal rendering used by every text output.
std::string fixed6(double v);

// Opens `path` for writing, or returns stdout for "" and "-".
class OutputFile {
 public:
  explicit OutputFile(const std::string& path);
  ~OutputFile();
  std::ostream& stream() { return *out_; }

 private:
  std::unique_ptr<std::ostream> owned_;
  std::ostream* out_;
};

struct ScoreOptions {
  std::string input;
  std::string output;
  std::size_t batch_size = 8;
  std::string resume_prefix;
  std::string save_prefix;
};
int run_score(const GlobalOptions& g, const ScoreOptions& o);

struct ReplayOptions {
  std::string input;
  std::string output;
  std::string mapped_output;
  std::string resume_prefix;
  std::string save_prefix;
};
int run_adapt_replay(const GlobalOptions& g, const ReplayOptions& o);

struct SimOptions {
  std::string scheme = "adaptive";
  std::string task;
  std::size_t steps = 400;
  std::size_t group_size = 0;  // 0 keeps the config value
  double temperature = 0.0;    // 0 keeps the config value
  double learning_rate = 1.0;
  std::size_t inner_iterations = 1;
  std::string output;
};
int run_grpo_sim(const GlobalOptions& g, const SimOptions& o);

struct SelectOptions {
  std::string input;
  std::size_t threshold = 0;
  std::size_t per_cluster_target = 5;
  std::string output;
  std::string summary;
  std::string frequency_table;
};
int run_select_knowledge(const GlobalOptions& g, const SelectOptions& o);

struct EvalOptions {
  std::string input;
  std::string output;
  std::string summary;
};
int run_eval(const GlobalOptions& g, const EvalOptions& o);

struct DiagnoseOptions {
  std::string input;
  std::string field;
  std::string metric = "score";
  std::size_t bins = 10;
  std::string output;
};
int run_diagnose_collapse(const GlobalOptions& g, const DiagnoseOptions& o);

struct RefinementOptions {
  std::string input;
  std::string output;
};
int run_validate_refinements(const GlobalOptions& g, const RefinementOptions& o);

}  // namespace armed::cli
