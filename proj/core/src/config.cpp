#include "clarity/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "clarity/error.hpp"
#include "json.hpp"
#include "util.hpp"

namespace clarity::pipeline {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

}  // namespace

const std::vector<std::string>& known_models() {
  static const std::vector<std::string> names = {
      "random",           "majority",          "bow-lr-n1",
      "bow-lr-n3",        "simq-majority",     "threshold-cqglobal",
      "threshold-cqindividual", "threshold-cqweighted", "simq-ml"};
  return names;
}

bool is_known_model(const std::string& name) {
  const auto& all = known_models();
  return std::find(all.begin(), all.end(), name) != all.end();
}

void PipelineConfig::validate() const {
  if (retrieval_depth < 1) throw InputError("retrieval_depth must be at least 1");
  if (k_list.empty()) throw InputError("k_list must not be empty");
  for (int k : k_list) {
    if (k < 1 || static_cast<std::size_t>(k) > retrieval_depth) {
      throw InputError("every k must lie in [1, retrieval_depth]");
    }
  }
  if (!(C > 0)) throw InputError("C must be positive");
  if (ngram < 1 || ngram > 3) throw InputError("ngram must be 1, 2 or 3");
  if (significance_rounds < 100) throw InputError("significance_rounds must be at least 100");
  for (const auto& m : models) {
    if (!is_known_model(m)) throw InputError("unknown model name: " + m);
  }
  if (port < 0 || port > 65535) throw InputError("port out of range");
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file: " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InputError("config is not a JSON object: " + path.string());
  const fs::path base = path.parent_path().empty() ? fs::path(".") : path.parent_path();

  PipelineConfig c;
  try {
    c.corpus_name = j.value("corpus_name", c.corpus_name);
    if (j.contains("posts")) c.posts = resolve(base, j["posts"].get<std::string>());
    if (j.contains("comments")) c.comments = resolve(base, j["comments"].get<std::string>());
    if (j.contains("history")) c.history = resolve(base, j["history"].get<std::string>());
    if (j.contains("output_dir")) c.output_dir = resolve(base, j["output_dir"].get<std::string>());
    if (j.contains("stopwords")) c.stopwords = resolve(base, j["stopwords"].get<std::string>());
    c.seed = j.value("seed", c.seed);
    c.retrieval_depth = j.value("retrieval_depth", c.retrieval_depth);
    c.k_list = j.value("k_list", c.k_list);
    c.C = j.value("C", c.C);
    c.ngram = j.value("ngram", c.ngram);
    c.significance_rounds = j.value("significance_rounds", c.significance_rounds);
    c.models = j.value("models", c.models);
    c.bind = j.value("bind", c.bind);
    c.port = j.value("port", c.port);
    c.serve_model = j.value("serve_model", c.serve_model);
  } catch (const json::exception& e) {
    throw InputError("invalid config field: " + std::string(e.what()));
  }
  c.validate();
  return c;
}

fs::path resolve_stopwords(const PipelineConfig& config) {
  if (!config.stopwords.empty()) return config.stopwords;
  if (const char* env = std::getenv("CLARITY_STOPWORDS"); env && *env) return env;
  fs::path installed = fs::path(CLARITY_INSTALLED_DATA_DIR) / "stopwords.txt";
  if (fs::exists(installed)) return installed;
  throw InputError("no stopword list configured (set \"stopwords\" or CLARITY_STOPWORDS)");
}

std::string config_echo(const PipelineConfig& c, const std::string& stopword_fingerprint) {
  json j;
  j["corpus_name"] = c.corpus_name;
  j["posts"] = c.posts.filename().string();
  j["comments"] = c.comments.filename().string();
  j["history"] = c.history.filename().string();
  j["stopwords"] = stopword_fingerprint;
  j["seed"] = c.seed;
  j["retrieval_depth"] = c.retrieval_depth;
  j["k_list"] = c.k_list;
  j["C"] = c.C;
  j["ngram"] = c.ngram;
  j["significance_rounds"] = c.significance_rounds;
  return j.dump();
}

std::string config_hash(const PipelineConfig& config, const std::string& stopword_fingerprint) {
  return detail::hex64(detail::fnv1a64(config_echo(config, stopword_fingerprint)));
}

}  // namespace clarity::pipeline
