#include <cstdio>
#include <fstream>
#include <iostream>

#include "armed/error.hpp"
#include "commands.hpp"

namespace armed::cli {

PipelineConfig GlobalOptions::load_config() const {
  if (config_path.empty()) {
    PipelineConfig cfg;
    cfg.validate();
    return cfg;
  }
  return load_config_file(config_path);
}

std::unique_ptr<EmbeddingSource> GlobalOptions::embedder(const PipelineConfig& cfg) const {
  return make_embedding_source(embeddings, seed, cfg.mock_dim);
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

OutputFile::OutputFile(const std::string& path) : out_(&std::cout) {
  if (path.empty() || path == "-") return;
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*f) throw InvalidArgument("cannot open output file '" + path + "'");
  out_ = f.get();
  owned_ = std::move(f);
}

OutputFile::~OutputFile() { out_->flush(); }

}  // namespace armed::cli
