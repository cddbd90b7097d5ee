#pragma once

// Flat key=value configuration shared by every CLI subcommand. Lines
// starting with '#' and blank lines are ignored; unknown keys are errors.

#include <iosfwd>
#include <string>

#include "armed/adaptive.hpp"
#include "armed/grpo.hpp"
#include "armed/metrics.hpp"
#include "armed/reward.hpp"

namespace armed {

struct PipelineConfig {
  AdaptConfig adapt;
  RewardWeights weights;
  GrpoConfig grpo;
  HssWeights hss;
  std::size_t mock_dim = 32;

  void validate() const;
};

void apply_config(PipelineConfig& cfg, std::istream& in);
PipelineConfig load_config_file(const std::string& path);

// Every key with its current value, in the same format apply_config reads.
std::string dump_config(const PipelineConfig& cfg);

}  // namespace armed
