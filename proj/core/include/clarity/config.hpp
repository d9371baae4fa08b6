#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace clarity::pipeline {

// Every model the pipeline knows, in report order.
const std::vector<std::string>& known_models();
bool is_known_model(const std::string& name);

struct PipelineConfig {
  std::string corpus_name = "corpus";
  std::filesystem::path posts;
  std::filesystem::path comments;
  std::filesystem::path history;
  std::filesystem::path output_dir = "out";
  std::filesystem::path stopwords;
  std::uint64_t seed = 42;
  std::size_t retrieval_depth = 50;
  std::vector<int> k_list = {10, 20, 50};
  double C = 1.0;
  int ngram = 3;
  std::size_t significance_rounds = 10000;
  std::vector<std::string> models = known_models();
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string serve_model = "simq-ml";

  // Throws InputError on out-of-range values.
  void validate() const;
};

// Relative paths inside the file resolve against the file's directory.
PipelineConfig load_config(const std::filesystem::path& path);

// Stopword file: the configured path, else $CLARITY_STOPWORDS, else the
// installed data directory.
std::filesystem::path resolve_stopwords(const PipelineConfig& config);

// Canonical JSON of the experiment-defining fields (output location,
// model list and server settings excluded). Echoed into every artifact.
std::string config_echo(const PipelineConfig& config, const std::string& stopword_fingerprint);
std::string config_hash(const PipelineConfig& config, const std::string& stopword_fingerprint);

}  // namespace clarity::pipeline
