#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clarity/bow.hpp"
#include "clarity/config.hpp"
#include "clarity/corpus.hpp"
#include "clarity/eval.hpp"
#include "clarity/features.hpp"
#include "clarity/models.hpp"
#include "clarity/retrieval.hpp"
#include "clarity/text.hpp"

// Experiment flow: ingest -> split -> index -> features -> train -> evaluate.
// All artifacts of one configuration live in one run directory.
namespace clarity::pipeline {

inline constexpr int kArtifactVersion = 1;

enum class ModelKind { random, majority, simq_majority, threshold, logreg_sqm, logreg_bow };

// A trained model as persisted in models/<name>.json.
struct ModelArtifact {
  std::string name;
  ModelKind kind = ModelKind::majority;
  std::string config_hash;
  std::uint64_t seed = 0;
  Label majority = Label::unclear;
  // logreg_sqm
  std::vector<std::string> feature_names;
  std::optional<models::Standardizer> standardizer;
  // logreg_sqm, logreg_bow
  std::optional<models::LogRegModel> logreg;
  models::LrTrace trace;
  // logreg_bow
  std::optional<features::NgramVocabulary> vocabulary;
  // threshold
  std::optional<models::ThresholdModel> threshold;
  double dev_accuracy = 0;
};

void save_model_artifact(const std::filesystem::path& path, const ModelArtifact& artifact,
                         const std::string& config_echo);
// Validates dimensional consistency.
ModelArtifact load_model_artifact(const std::filesystem::path& path);

struct Prediction {
  Label label = Label::unclear;
  double score = 0;  // higher means more likely unclear; used for ROC AUC
  double probability_unclear = 0;
};

// sqm may be null for models that do not read SQM features; rng is only
// read by the random baseline.
Prediction predict(const ModelArtifact& model, const Question& q, const features::SqmResult* sqm,
                   models::RandomBaseline* rng);

bool needs_sqm(ModelKind kind);

// Loaded state of one run directory.
class Workspace {
 public:
  explicit Workspace(PipelineConfig config);

  const PipelineConfig& config() const noexcept { return config_; }
  const std::filesystem::path& run_dir() const noexcept { return run_dir_; }
  const std::string& hash() const noexcept { return hash_; }
  const std::string& echo() const noexcept { return echo_; }
  const text::StopwordList& stopwords() const noexcept { return stopwords_; }

  std::filesystem::path questions_path() const { return run_dir_ / "questions.jsonl"; }
  std::filesystem::path splits_path() const { return run_dir_ / "splits.json"; }
  std::filesystem::path stats_path() const { return run_dir_ / "stats.json"; }
  std::filesystem::path index_path() const { return run_dir_ / "index.bin"; }
  std::filesystem::path model_path(const std::string& name) const {
    return run_dir_ / "models" / (name + ".json");
  }

  // Reads questions.jsonl and splits.json; checks the stored config hash.
  void load_corpus();
  const std::vector<Question>& questions() const { return questions_; }
  const corpus::CorpusSplit& split() const { return split_; }
  const corpus::QuestionTable& table() const { return table_; }
  std::vector<Question> partition(const std::vector<std::int64_t>& ids) const;

  // Builds (and persists) or loads the training index.
  const retrieval::InvertedIndex& index();
  const features::SqmExtractor& extractor();

 private:
  PipelineConfig config_;
  text::StopwordList stopwords_;
  std::string echo_;
  std::string hash_;
  std::filesystem::path run_dir_;
  std::vector<Question> questions_;
  corpus::CorpusSplit split_;
  corpus::QuestionTable table_;
  std::vector<Question> training_;
  std::optional<retrieval::InvertedIndex> index_;
  std::unique_ptr<features::SqmExtractor> extractor_;
};

struct IngestSummary {
  corpus::LabelCounts labels;
  corpus::CorpusStats stats;
  std::size_t skipped_rows = 0;
  std::size_t empty_questions = 0;
  std::filesystem::path run_dir;
};

IngestSummary cmd_ingest(const PipelineConfig& config);

struct TrainSummary {
  std::filesystem::path artifact;
  ModelArtifact model;
};

TrainSummary cmd_train(const PipelineConfig& config, const std::string& model_name);

struct EvaluateSummary {
  std::filesystem::path report_json;
  std::filesystem::path report_text;
  std::vector<std::pair<std::string, eval::Metrics>> metrics;
};

// Refuses artifacts whose config hash differs from the corpus and any
// overlap between partitions.
EvaluateSummary cmd_evaluate(const PipelineConfig& config, const std::vector<std::string>& model_names);

// Micro/macro summary over several evaluate reports (one per community).
std::string cmd_summarize(const std::vector<std::filesystem::path>& reports);

// Writes bytes to a temporary sibling, then renames.
void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace clarity::pipeline
