#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "clarity/config.hpp"
#include "clarity/corpus.hpp"

// Live classification of drafted questions, shared by `clarity classify`
// and the HTTP service.
namespace clarity::engine {

struct ClassifyRequest {
  std::string title;
  std::string body;
  std::vector<std::string> tags;
};

// Throws InputError on malformed JSON, wrong field types or a blank title.
ClassifyRequest parse_request(std::string_view json_text);

struct SimilarQuestion {
  std::int64_t question_id = 0;
  double score = 0;
  Label label = Label::clear;
};

struct Hint {
  std::string clarification_text;
  std::vector<std::string> keyphrases;
  double retrieval_score = 0;
};

struct ClassifyResponse {
  Label label = Label::clear;
  double probability_unclear = 0;
  std::vector<SimilarQuestion> similar;
  std::vector<Hint> hints;  // descending retrieval score
};

std::string to_json(const ClassifyResponse& response);

inline constexpr std::size_t kSimilarShown = 10;

// Immutable once loaded; classify() is safe to call concurrently.
class ClassificationEngine {
 public:
  // Loads corpus, index and the named model artifact of the config's run
  // directory. Throws InputError if any of them is missing or mismatched.
  static std::shared_ptr<const ClassificationEngine> load(const pipeline::PipelineConfig& config,
                                                          const std::string& model_name);
  ~ClassificationEngine();

  // Throws InputError when the request is empty after preprocessing.
  ClassifyResponse classify(const ClassifyRequest& request) const;

  const std::string& config_hash() const noexcept;
  const std::string& corpus_name() const noexcept;
  const std::string& model_name() const noexcept;

 private:
  struct State;
  explicit ClassificationEngine(std::unique_ptr<State> state);
  std::unique_ptr<State> state_;
};

}  // namespace clarity::engine
