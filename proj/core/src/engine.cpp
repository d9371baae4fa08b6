#include "clarity/engine.hpp"

#include <algorithm>

#include "clarity/error.hpp"
#include "clarity/pipeline.hpp"
#include "json.hpp"
#include "util.hpp"

namespace clarity::engine {
namespace {

using json = nlohmann::ordered_json;

std::string string_field(const json& j, const char* key, bool required) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) throw InputError(std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw InputError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

ClassifyRequest parse_request(std::string_view json_text) {
  json j = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (j.is_discarded()) throw InputError("request is not valid JSON");
  if (!j.is_object()) throw InputError("request must be a JSON object");
  ClassifyRequest r;
  r.title = string_field(j, "title", true);
  r.body = string_field(j, "body", false);
  if (auto it = j.find("tags"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw InputError("field 'tags' must be a list of strings");
    for (const auto& t : *it) {
      if (!t.is_string()) throw InputError("field 'tags' must be a list of strings");
      r.tags.push_back(t.get<std::string>());
    }
  }
  if (detail::trim(r.title).empty()) throw InputError("title must not be empty");
  return r;
}

std::string to_json(const ClassifyResponse& r) {
  json j;
  j["label"] = std::string(label_name(r.label));
  j["probability_unclear"] = r.probability_unclear;
  json similar = json::array();
  for (const auto& s : r.similar) {
    similar.push_back({{"question_id", s.question_id},
                       {"score", s.score},
                       {"label", std::string(label_name(s.label))}});
  }
  j["similar"] = std::move(similar);
  json hints = json::array();
  for (const auto& h : r.hints) {
    hints.push_back({{"clarification_text", h.clarification_text},
                     {"keyphrases", h.keyphrases},
                     {"retrieval_score", h.retrieval_score}});
  }
  j["hints"] = std::move(hints);
  return j.dump();
}

struct ClassificationEngine::State {
  explicit State(const pipeline::PipelineConfig& c) : workspace(c) {}
  pipeline::Workspace workspace;
  pipeline::ModelArtifact model;
  const features::SqmExtractor* extractor = nullptr;
};

ClassificationEngine::ClassificationEngine(std::unique_ptr<State> state) : state_(std::move(state)) {}
ClassificationEngine::~ClassificationEngine() = default;

std::shared_ptr<const ClassificationEngine> ClassificationEngine::load(
    const pipeline::PipelineConfig& config, const std::string& model_name) {
  if (!pipeline::is_known_model(model_name)) throw InputError("unknown model name: " + model_name);
  auto state = std::make_unique<State>(config);
  state->workspace.load_corpus();
  state->model = pipeline::load_model_artifact(state->workspace.model_path(model_name));
  if (state->model.config_hash != state->workspace.hash()) {
    throw InputError("artifact " + model_name + " does not match the corpus configuration");
  }
  state->extractor = &state->workspace.extractor();
  return std::shared_ptr<const ClassificationEngine>(new ClassificationEngine(std::move(state)));
}

ClassifyResponse ClassificationEngine::classify(const ClassifyRequest& request) const {
  auto pre = text::preprocess(request.title, request.body, request.tags);
  if (pre.tokens.empty()) throw InputError("question is empty after preprocessing");
  Question q;
  q.tokens = std::move(pre.tokens);
  q.title_tokens = std::move(pre.title_tokens);
  q.tag_tokens = std::move(pre.tag_tokens);
  q.contains_pre = pre.contains_pre;
  q.contains_quote = pre.contains_quote;
  q.raw_text = std::move(pre.raw_text);

  const auto sqm = state_->extractor->extract(q, std::nullopt);

  // Random baseline: reproducible per request.
  const auto request_key = request.title + '\n' + request.body + '\n' + text::join(request.tags);
  models::RandomBaseline rng(state_->workspace.config().seed ^ detail::fnv1a64(request_key));
  const auto p = pipeline::predict(state_->model, q, &sqm, &rng);

  ClassifyResponse r;
  r.label = p.label;
  r.probability_unclear = p.probability_unclear;
  for (std::size_t i = 0; i < sqm.hits.size() && i < kSimilarShown; ++i) {
    r.similar.push_back({sqm.hits[i].doc_id, sqm.hits[i].score, sqm.hits[i].label});
  }
  for (const auto& e : sqm.clarifications.entries) {
    Hint h;
    h.clarification_text = e.text;
    h.retrieval_score = e.source.score;
    for (const auto& k : e.phrases) h.keyphrases.push_back(k.text());
    r.hints.push_back(std::move(h));
  }
  std::stable_sort(r.hints.begin(), r.hints.end(),
                   [](const Hint& a, const Hint& b) { return a.retrieval_score > b.retrieval_score; });
  return r;
}

const std::string& ClassificationEngine::config_hash() const noexcept { return state_->workspace.hash(); }
const std::string& ClassificationEngine::corpus_name() const noexcept {
  return state_->workspace.config().corpus_name;
}
const std::string& ClassificationEngine::model_name() const noexcept { return state_->model.name; }

}  // namespace clarity::engine
