#include "clarity/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "clarity/dump.hpp"
#include "clarity/error.hpp"
#include "json.hpp"

namespace clarity::pipeline {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::random: return "random";
    case ModelKind::majority: return "majority";
    case ModelKind::simq_majority: return "simq-majority";
    case ModelKind::threshold: return "threshold";
    case ModelKind::logreg_sqm: return "logreg-sqm";
    case ModelKind::logreg_bow: return "logreg-bow";
  }
  return "unknown";
}

ModelKind kind_from_name(const std::string& s) {
  for (auto k : {ModelKind::random, ModelKind::majority, ModelKind::simq_majority,
                 ModelKind::threshold, ModelKind::logreg_sqm, ModelKind::logreg_bow}) {
    if (s == kind_name(k)) return k;
  }
  throw InputError("unknown model kind in artifact: " + s);
}

json gamma_to_json(double g) {
  if (std::isinf(g)) return g > 0 ? "+inf" : "-inf";
  return g;
}

double gamma_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InputError("invalid threshold value " + s);
  }
  return j.get<double>();
}

json meta_block(const std::string& hash, std::uint64_t seed, const std::string& echo) {
  json m;
  m["format_version"] = kArtifactVersion;
  m["config_hash"] = hash;
  m["seed"] = seed;
  m["config"] = json::parse(echo);
  return m;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw InputError("malformed JSON in " + path.string());
  return j;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::vector<int> labels_of(const std::vector<Question>& qs) {
  std::vector<int> y;
  y.reserve(qs.size());
  for (const auto& q : qs) y.push_back(to_int(q.label));
  return y;
}

json metrics_json(const eval::Metrics& m) {
  json j;
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["roc_auc"] = m.roc_auc ? json(*m.roc_auc) : json(nullptr);
  return j;
}

bool is_simq(const std::string& name) {
  return name == "simq-majority" || name.rfind("threshold-", 0) == 0 || name == "simq-ml";
}

std::string resolve_model_name(const PipelineConfig& config, const std::string& name) {
  if (name == "bow-lr") return "bow-lr-n" + std::to_string(config.ngram);
  return name;
}

}  // namespace

void write_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool needs_sqm(ModelKind kind) {
  return kind == ModelKind::simq_majority || kind == ModelKind::threshold ||
         kind == ModelKind::logreg_sqm;
}

void save_model_artifact(const fs::path& path, const ModelArtifact& a, const std::string& echo) {
  json j = meta_block(a.config_hash, a.seed, echo);
  j["model"] = a.name;
  j["kind"] = kind_name(a.kind);
  j["majority_label"] = to_int(a.majority);
  if (a.kind == ModelKind::logreg_sqm) {
    j["feature_names"] = a.feature_names;
    j["standardizer"] = {{"mean", a.standardizer->mean}, {"stddev", a.standardizer->stddev}};
  }
  if (a.logreg) {
    j["C"] = a.logreg->C;
    j["bias"] = a.logreg->bias;
    j["weights"] = a.logreg->weights;
    j["training"] = {{"iterations", a.trace.iterations},
                     {"converged", a.trace.converged},
                     {"final_objective", a.trace.objective.empty() ? 0.0 : a.trace.objective.back()}};
  }
  if (a.vocabulary) {
    j["ngram_vocabulary"] = {{"max_n", a.vocabulary->max_n()},
                             {"doc_count", a.vocabulary->doc_count()},
                             {"terms", a.vocabulary->terms()},
                             {"df", a.vocabulary->dfs()}};
  }
  if (a.threshold) {
    j["threshold"] = {{"feature", a.threshold->feature},
                      {"gamma", gamma_to_json(a.threshold->gamma)},
                      {"dev_accuracy", a.dev_accuracy}};
  }
  write_file(path, j.dump(1) + "\n");
}

ModelArtifact load_model_artifact(const fs::path& path) {
  if (!fs::exists(path)) throw InputError("model artifact not found: " + path.string());
  json j = read_json(path);
  ModelArtifact a;
  try {
    if (j.at("format_version").get<int>() != kArtifactVersion) {
      throw InputError("unsupported artifact version in " + path.string());
    }
    a.name = j.at("model").get<std::string>();
    a.kind = kind_from_name(j.at("kind").get<std::string>());
    a.config_hash = j.at("config_hash").get<std::string>();
    a.seed = j.at("seed").get<std::uint64_t>();
    a.majority = label_from_int(j.value("majority_label", 1));
    if (a.kind == ModelKind::logreg_sqm || a.kind == ModelKind::logreg_bow) {
      models::LogRegModel m;
      m.C = j.at("C").get<double>();
      m.bias = j.at("bias").get<double>();
      m.weights = j.at("weights").get<std::vector<double>>();
      a.trace.iterations = j.at("training").value("iterations", std::size_t{0});
      a.trace.converged = j.at("training").value("converged", false);
      a.logreg = std::move(m);
    }
    if (a.kind == ModelKind::logreg_sqm) {
      a.feature_names = j.at("feature_names").get<std::vector<std::string>>();
      models::Standardizer s;
      s.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
      s.stddev = j.at("standardizer").at("stddev").get<std::vector<double>>();
      const auto d = a.feature_names.size();
      if (s.mean.size() != d || s.stddev.size() != d || a.logreg->weights.size() != d) {
        throw InputError("artifact " + path.string() + " has inconsistent dimensions");
      }
      a.logreg->feature_names = a.feature_names;
      a.standardizer = std::move(s);
    }
    if (a.kind == ModelKind::logreg_bow) {
      const auto& v = j.at("ngram_vocabulary");
      a.vocabulary.emplace(v.at("max_n").get<int>(), v.at("doc_count").get<std::size_t>(),
                           v.at("terms").get<std::vector<std::string>>(),
                           v.at("df").get<std::vector<std::size_t>>());
      if (a.vocabulary->size() != a.logreg->weights.size()) {
        throw InputError("artifact " + path.string() + " has inconsistent dimensions");
      }
      a.logreg->feature_names = a.vocabulary->terms();
    }
    if (a.kind == ModelKind::threshold) {
      const auto& t = j.at("threshold");
      a.threshold = models::ThresholdModel{t.at("feature").get<std::string>(),
                                           gamma_from_json(t.at("gamma"))};
      a.dev_accuracy = t.value("dev_accuracy", 0.0);
      const auto& f = a.threshold->feature;
      if (f != "CQGlobal" && f != "CQIndividual" && f != "CQWeighted") {
        throw InputError("threshold artifact names unsupported feature " + f);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed model artifact " + path.string() + ": " + e.what());
  }
  return a;
}

Prediction predict(const ModelArtifact& model, const Question& q, const features::SqmResult* sqm,
                   models::RandomBaseline* rng) {
  if (needs_sqm(model.kind) && !sqm) throw Error("model " + model.name + " needs SQM features");
  Prediction p;
  switch (model.kind) {
    case ModelKind::random: {
      if (!rng) throw Error("random baseline needs a generator");
      auto d = rng->next();
      p = {d.label, d.score, d.score};
      break;
    }
    case ModelKind::majority:
      p.label = model.majority;
      p.score = 1.0;
      p.probability_unclear = model.majority == Label::unclear ? 1.0 : 0.0;
      break;
    case ModelKind::simq_majority: {
      p.label = models::simq_majority(sqm->hits, model.majority);
      p.score = models::simq_unclear_share(sqm->hits);
      p.probability_unclear = p.score;
      break;
    }
    case ModelKind::threshold: {
      const auto& f = model.threshold->feature;
      const double v = f == "CQGlobal"       ? sqm->clarity.global
                       : f == "CQIndividual" ? sqm->clarity.individual
                                             : sqm->clarity.weighted;
      p.label = model.threshold->predict(v);
      p.score = -v;
      p.probability_unclear = p.label == Label::unclear ? 1.0 : 0.0;
      break;
    }
    case ModelKind::logreg_sqm: {
      if (sqm->values.size() != model.feature_names.size()) {
        throw InputError("feature dimension " + std::to_string(sqm->values.size()) +
                         " does not match model " + model.name);
      }
      const auto x = model.standardizer->apply(sqm->values);
      p.probability_unclear = model.logreg->predict_proba(x);
      p.score = p.probability_unclear;
      p.label = p.probability_unclear >= 0.5 ? Label::unclear : Label::clear;
      break;
    }
    case ModelKind::logreg_bow: {
      const auto x = features::bow_vector(q.tokens, *model.vocabulary);
      p.probability_unclear = model.logreg->predict_proba(x);
      p.score = p.probability_unclear;
      p.label = p.probability_unclear >= 0.5 ? Label::unclear : Label::clear;
      break;
    }
  }
  return p;
}

Workspace::Workspace(PipelineConfig config) : config_(std::move(config)) {
  config_.validate();
  stopwords_ = text::StopwordList::load(resolve_stopwords(config_).string());
  echo_ = config_echo(config_, stopwords_.fingerprint());
  hash_ = config_hash(config_, stopwords_.fingerprint());
  run_dir_ = config_.output_dir / (config_.corpus_name + "-" + hash_.substr(0, 12));
}

void Workspace::load_corpus() {
  if (!fs::exists(splits_path()) || !fs::exists(questions_path())) {
    throw InputError("corpus artifacts missing in " + run_dir_.string() + " (run ingest first)");
  }
  json s = read_json(splits_path());
  if (s.value("config_hash", std::string{}) != hash_) {
    throw InputError("corpus artifacts in " + run_dir_.string() +
                     " were produced with a different configuration");
  }
  split_.seed = s.at("seed").get<std::uint64_t>();
  split_.train = s.at("train").get<std::vector<std::int64_t>>();
  split_.dev = s.at("dev").get<std::vector<std::int64_t>>();
  split_.test = s.at("test").get<std::vector<std::int64_t>>();
  std::ifstream in(questions_path());
  questions_ = corpus::read_questions(in);
  table_ = corpus::QuestionTable(questions_);
  training_ = partition(split_.train);
}

std::vector<Question> Workspace::partition(const std::vector<std::int64_t>& ids) const {
  std::vector<Question> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(table_.at(id));
  return out;
}

const retrieval::InvertedIndex& Workspace::index() {
  if (index_) return *index_;
  if (fs::exists(index_path())) {
    std::ifstream in(index_path(), std::ios::binary);
    index_ = retrieval::InvertedIndex::load(in);
  } else {
    index_ = retrieval::build_index(training_);
    std::ostringstream out;
    index_->save(out);
    write_file(index_path(), out.str());
  }
  const std::unordered_set<std::int64_t> train(split_.train.begin(), split_.train.end());
  if (index_->doc_count() != train.size()) {
    throw LeakageError("index does not cover exactly the training split");
  }
  for (std::uint32_t d = 0; d < index_->doc_count(); ++d) {
    if (!train.count(index_->doc_id(d))) {
      throw LeakageError("index contains question " + std::to_string(index_->doc_id(d)) +
                         " outside the training split");
    }
  }
  return *index_;
}

const features::SqmExtractor& Workspace::extractor() {
  if (!extractor_) {
    features::SqmOptions opts;
    opts.retrieval_depth = config_.retrieval_depth;
    opts.k_list = config_.k_list;
    extractor_ = std::make_unique<features::SqmExtractor>(index(), training_, stopwords_, opts);
  }
  return *extractor_;
}

IngestSummary cmd_ingest(const PipelineConfig& config) {
  for (const auto& p : {config.posts, config.comments, config.history}) {
    if (p.empty() || !fs::exists(p)) throw InputError("missing dump file: " + p.string());
  }
  Workspace ws(config);
  std::ifstream posts(config.posts, std::ios::binary);
  std::ifstream comments(config.comments, std::ios::binary);
  std::ifstream history(config.history, std::ios::binary);
  auto dump = dump::parse_dump(posts, comments, history);
  auto labeled = corpus::label_questions(dump.posts, dump.comments, dump.edits);
  corpus::BuildCounts build_counts;
  auto questions = corpus::build_questions(labeled.candidates, &build_counts);

  std::vector<std::int64_t> ids;
  for (const auto& q : questions) ids.push_back(q.id);
  auto split = corpus::split_corpus(ids, config.seed);
  auto stats = corpus::compute_stats(questions);

  IngestSummary summary;
  summary.labels = labeled.counts;
  summary.stats = stats;
  summary.skipped_rows =
      dump.post_counts.skipped + dump.comment_counts.skipped + dump.edit_counts.skipped;
  summary.empty_questions = build_counts.empty_after_preprocessing;
  summary.run_dir = ws.run_dir();

  std::ostringstream q_out;
  corpus::write_questions(q_out, questions);
  write_file(ws.questions_path(), q_out.str());

  json s = meta_block(ws.hash(), config.seed, ws.echo());
  s["train"] = split.train;
  s["dev"] = split.dev;
  s["test"] = split.test;
  write_file(ws.splits_path(), s.dump(1) + "\n");

  json st = meta_block(ws.hash(), config.seed, ws.echo());
  st["corpus"] = config.corpus_name;
  st["N"] = stats.n;
  st["L"] = stats.median_length;
  st["V"] = stats.vocabulary;
  st["V_star"] = stats.vocabulary_min_df;
  st["clear"] = stats.clear_share;
  st["unclear"] = stats.unclear_share;
  st["labeling"] = {{"questions", labeled.counts.questions},
                    {"clear", labeled.counts.clear},
                    {"unclear", labeled.counts.unclear},
                    {"discarded_no_owner", labeled.counts.discarded_no_owner},
                    {"discarded_no_response", labeled.counts.discarded_no_response},
                    {"discarded_unmatched", labeled.counts.discarded_unmatched},
                    {"discarded_empty_text", build_counts.empty_after_preprocessing}};
  st["skipped_rows"] = {{"posts", dump.post_counts.skipped},
                        {"comments", dump.comment_counts.skipped},
                        {"history", dump.edit_counts.skipped}};
  st["split"] = {{"train", split.train.size()}, {"dev", split.dev.size()}, {"test", split.test.size()}};
  write_file(ws.stats_path(), st.dump(1) + "\n");

  // A fresh corpus invalidates the derived index.
  fs::remove(ws.index_path());
  return summary;
}

namespace {

std::vector<features::FeatureRow> sqm_rows(const features::SqmExtractor& ex,
                                           const std::vector<Question>& qs) {
  std::vector<features::FeatureRow> rows;
  rows.reserve(qs.size());
  for (const auto& q : qs) rows.push_back({q.id, ex.extract(q).values, q.label});
  return rows;
}

void write_rows(const fs::path& path, const std::vector<std::string>& names,
                const std::vector<features::FeatureRow>& rows) {
  std::ostringstream out;
  features::write_feature_csv(out, names, rows);
  write_file(path, out.str());
}

}  // namespace

TrainSummary cmd_train(const PipelineConfig& config, const std::string& requested) {
  const std::string name = resolve_model_name(config, requested);
  if (!is_known_model(name)) throw InputError("unknown model name: " + requested);
  Workspace ws(config);
  ws.load_corpus();
  corpus::check_disjoint(ws.split());
  const auto train = ws.partition(ws.split().train);
  const auto train_labels = labels_of(train);

  ModelArtifact a;
  a.name = name;
  a.config_hash = ws.hash();
  a.seed = config.seed;
  a.majority = models::majority_label(train_labels);

  if (name == "random") {
    a.kind = ModelKind::random;
  } else if (name == "majority") {
    a.kind = ModelKind::majority;
  } else if (name == "simq-majority") {
    a.kind = ModelKind::simq_majority;
    ws.index();
  } else if (name.rfind("threshold-", 0) == 0) {
    a.kind = ModelKind::threshold;
    const auto& ex = ws.extractor();
    const auto dev = ws.partition(ws.split().dev);
    auto rows = sqm_rows(ex, dev);
    write_rows(ws.run_dir() / "features_dev.csv", ex.names(), rows);
    const std::string feature = name == "threshold-cqglobal"       ? "CQGlobal"
                                : name == "threshold-cqindividual" ? "CQIndividual"
                                                                   : "CQWeighted";
    const auto col = static_cast<std::size_t>(
        std::find(ex.names().begin(), ex.names().end(), feature) - ex.names().begin());
    std::vector<double> values;
    for (const auto& r : rows) values.push_back(r.values[col]);
    auto fit = models::threshold_fit(values, labels_of(dev), feature);
    a.threshold = fit.model;
    a.dev_accuracy = fit.dev_accuracy;
  } else if (name == "simq-ml") {
    a.kind = ModelKind::logreg_sqm;
    const auto& ex = ws.extractor();
    auto rows = sqm_rows(ex, train);
    write_rows(ws.run_dir() / "features_train.csv", ex.names(), rows);
    std::vector<std::vector<double>> x;
    x.reserve(rows.size());
    for (auto& r : rows) x.push_back(r.values);
    auto standardizer = models::Standardizer::fit(x);
    auto xs = standardizer.apply(x);
    auto model = models::lr_train(models::SparseMatrix::from_dense(xs), train_labels,
                                  {.C = config.C}, &a.trace);
    model.feature_names = ex.names();
    a.feature_names = ex.names();
    a.standardizer = std::move(standardizer);
    a.logreg = std::move(model);
  } else {
    a.kind = ModelKind::logreg_bow;
    const int n = name == "bow-lr-n1" ? 1 : 3;
    std::vector<const std::vector<std::string>*> docs;
    for (const auto& q : train) docs.push_back(&q.tokens);
    auto vocab = features::NgramVocabulary::build(docs, n);
    models::SparseMatrix x(vocab.size());
    for (const auto& q : train) x.add_row(features::bow_vector(q.tokens, vocab));
    a.logreg = models::lr_train(x, train_labels, {.C = config.C}, &a.trace);
    a.vocabulary = std::move(vocab);
  }

  TrainSummary summary;
  summary.artifact = ws.model_path(name);
  save_model_artifact(summary.artifact, a, ws.echo());
  summary.model = std::move(a);
  return summary;
}

EvaluateSummary cmd_evaluate(const PipelineConfig& config, const std::vector<std::string>& requested) {
  Workspace ws(config);
  ws.load_corpus();
  corpus::check_disjoint(ws.split());

  std::vector<std::string> names;
  for (const auto& m : known_models()) {
    for (const auto& r : requested) {
      if (resolve_model_name(config, r) == m && std::find(names.begin(), names.end(), m) == names.end()) {
        names.push_back(m);
      }
    }
  }
  for (const auto& r : requested) {
    if (!is_known_model(resolve_model_name(config, r))) throw InputError("unknown model name: " + r);
  }
  if (names.empty()) throw InputError("no models to evaluate");

  std::vector<ModelArtifact> artifacts;
  bool any_sqm = false;
  for (const auto& n : names) {
    auto a = load_model_artifact(ws.model_path(n));
    if (a.config_hash != ws.hash()) {
      throw InputError("artifact " + n + " has config hash " + a.config_hash +
                       " but the corpus has " + ws.hash());
    }
    any_sqm = any_sqm || needs_sqm(a.kind);
    artifacts.push_back(std::move(a));
  }

  const auto test = ws.partition(ws.split().test);
  const auto labels = labels_of(test);
  std::vector<features::SqmResult> sqm;
  if (any_sqm) {
    const auto& ex = ws.extractor();
    std::vector<features::FeatureRow> rows;
    sqm.reserve(test.size());
    for (const auto& q : test) {
      sqm.push_back(ex.extract(q));
      rows.push_back({q.id, sqm.back().values, q.label});
    }
    write_rows(ws.run_dir() / "features_test.csv", ex.names(), rows);
  } else {
    ws.index();
  }

  std::vector<eval::SystemOutput> outputs;
  for (const auto& a : artifacts) {
    models::RandomBaseline rng(config.seed);
    eval::SystemOutput out;
    out.labels = labels;
    for (std::size_t i = 0; i < test.size(); ++i) {
      auto p = predict(a, test[i], sqm.empty() ? nullptr : &sqm[i], &rng);
      out.predictions.push_back(to_int(p.label));
      out.scores.push_back(p.score);
    }
    outputs.push_back(std::move(out));
  }

  EvaluateSummary summary;
  std::vector<eval::Metrics> metrics;
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    metrics.push_back(eval::compute_metrics(outputs[i]));
    summary.metrics.emplace_back(names[i], metrics.back());
  }

  const bool both_classes = std::any_of(labels.begin(), labels.end(), [](int y) { return y; }) &&
                            std::any_of(labels.begin(), labels.end(), [](int y) { return !y; });
  std::vector<eval::MetricKind> tested = {eval::MetricKind::accuracy, eval::MetricKind::f1};
  if (both_classes) tested.push_back(eval::MetricKind::roc_auc);
  const unsigned threads = std::max(1U, std::thread::hardware_concurrency());

  struct SigEntry {
    std::string model, reference, metric, marker;
    double delta, p;
  };
  std::vector<SigEntry> sig;
  // marker lookup: (model, reference, metric) -> marker
  std::map<std::tuple<std::string, std::string, std::string>, std::string> markers;
  auto test_pair = [&](std::size_t i, std::size_t ref) {
    for (auto m : tested) {
      auto r = eval::approx_randomization(outputs[i], outputs[ref], m, config.significance_rounds,
                                          config.seed, threads);
      const double delta =
          eval::metric_value(m, outputs[i].predictions, outputs[i].scores, labels) -
          eval::metric_value(m, outputs[ref].predictions, outputs[ref].scores, labels);
      auto marker = eval::significance_marker(delta, r.p_value);
      sig.push_back({names[i], names[ref], eval::metric_name(m), marker, delta, r.p_value});
      markers[{names[i], names[ref], eval::metric_name(m)}] = marker;
    }
  };
  const auto bow3 = std::find(names.begin(), names.end(), "bow-lr-n3");
  for (std::size_t i = 1; i < names.size(); ++i) {
    test_pair(i, i - 1);
    if (is_simq(names[i]) && bow3 != names.end()) {
      const auto ref = static_cast<std::size_t>(bow3 - names.begin());
      if (ref != i - 1) test_pair(i, ref);
    }
  }

  json report = meta_block(ws.hash(), config.seed, ws.echo());
  report["corpus"] = config.corpus_name;
  report["test_size"] = test.size();
  std::vector<std::int64_t> ids;
  for (const auto& q : test) ids.push_back(q.id);
  report["ids"] = ids;
  report["labels"] = labels;
  json models_json = json::array();
  for (std::size_t i = 0; i < names.size(); ++i) {
    json m;
    m["name"] = names[i];
    m["metrics"] = metrics_json(metrics[i]);
    m["predictions"] = outputs[i].predictions;
    m["scores"] = outputs[i].scores;
    models_json.push_back(std::move(m));
  }
  report["models"] = std::move(models_json);
  json sig_json = json::array();
  for (const auto& s : sig) {
    sig_json.push_back({{"model", s.model}, {"reference", s.reference}, {"metric", s.metric},
                        {"delta", s.delta}, {"p_value", s.p}, {"marker", s.marker}});
  }
  report["significance"] = {{"test", "approximate randomization"},
                            {"rounds", config.significance_rounds},
                            {"note", "each reported metric is tested independently"},
                            {"comparisons", std::move(sig_json)}};

  json coef = json::object();
  std::ostringstream coef_text;
  for (const auto& a : artifacts) {
    if (!a.logreg) continue;
    auto listing = eval::coefficient_report(a.logreg->feature_names, a.logreg->weights);
    json rows = json::array();
    coef_text << "\nCoefficients: " << a.name << " (positive = unclear)\n";
    const std::size_t limit = a.kind == ModelKind::logreg_bow ? 15 : listing.size();
    for (std::size_t i = 0; i < listing.size(); ++i) {
      const bool head = i < limit;
      const bool tail = i + limit >= listing.size();
      if (!head && !tail) continue;
      rows.push_back({listing[i].first, listing[i].second});
      char line[128];
      std::snprintf(line, sizeof line, "  %+8.3f  %s\n", listing[i].second, listing[i].first.c_str());
      coef_text << line;
    }
    coef[a.name] = std::move(rows);
  }
  report["coefficients"] = std::move(coef);

  std::ostringstream txt;
  txt << "Corpus: " << config.corpus_name << "  test items: " << test.size()
      << "  config: " << ws.hash() << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-12s %-12s %-12s %-8s %-8s\n", "Method", "Acc.", "AUC",
                "F1", "Prec.", "Rec.");
  txt << line;
  auto cell = [&](std::size_t i, const std::string& metric, std::optional<double> v) {
    std::string s = v ? fmt3(*v) : std::string("n/a");
    if (i > 0) {
      auto it = markers.find({names[i], names[i - 1], metric});
      if (it != markers.end()) s += it->second;
      if (is_simq(names[i]) && bow3 != names.end() && *bow3 != names[i - 1]) {
        auto jt = markers.find({names[i], *bow3, metric});
        if (jt != markers.end()) s += "," + jt->second;
      }
    }
    return s;
  };
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& m = metrics[i];
    std::snprintf(line, sizeof line, "%-24s %-12s %-12s %-12s %-8s %-8s\n", names[i].c_str(),
                  cell(i, "accuracy", m.accuracy).c_str(), cell(i, "roc_auc", m.roc_auc).c_str(),
                  cell(i, "f1", m.f1).c_str(), fmt3(m.precision).c_str(), fmt3(m.recall).c_str());
    txt << line;
  }
  txt << "\nF1, precision and recall refer to the unclear class.\n"
      << "Approximate randomization, R=" << config.significance_rounds
      << ", each metric tested independently. First marker: against the line above;\n"
      << "second marker (SimQ models): against bow-lr-n3. ^^/vv p<0.01, ^/v p<0.05, o not significant.\n";
  txt << coef_text.str();

  summary.report_json = ws.run_dir() / "report.json";
  summary.report_text = ws.run_dir() / "report.txt";
  write_file(summary.report_json, report.dump(1) + "\n");
  write_file(summary.report_text, txt.str());
  return summary;
}

std::string cmd_summarize(const std::vector<fs::path>& reports) {
  if (reports.empty()) throw InputError("summarize needs at least one report");
  std::vector<json> loaded;
  for (const auto& p : reports) loaded.push_back(read_json(p));
  std::vector<std::string> names;
  for (const auto& m : loaded.front().at("models")) {
    const auto name = m.at("name").get<std::string>();
    bool everywhere = std::all_of(loaded.begin(), loaded.end(), [&](const json& r) {
      return std::any_of(r.at("models").begin(), r.at("models").end(),
                         [&](const json& x) { return x.at("name") == name; });
    });
    if (everywhere) names.push_back(name);
  }
  std::ostringstream txt;
  txt << "Communities:";
  for (const auto& r : loaded) txt << ' ' << r.value("corpus", std::string("?"));
  txt << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-24s | %-6s %-6s %-6s %-6s %-6s | %-6s %-6s %-6s %-6s %-6s\n",
                "Method", "Acc.", "F1", "Prec.", "Rec.", "AUC", "Acc.", "F1", "Prec.", "Rec.", "AUC");
  txt << "                           Micro-average                      Macro-average\n" << line;
  for (const auto& name : names) {
    std::vector<eval::SystemOutput> per;
    for (const auto& r : loaded) {
      for (const auto& m : r.at("models")) {
        if (m.at("name") != name) continue;
        eval::SystemOutput o;
        o.labels = r.at("labels").get<std::vector<int>>();
        o.predictions = m.at("predictions").get<std::vector<int>>();
        o.scores = m.at("scores").get<std::vector<double>>();
        per.push_back(std::move(o));
      }
    }
    auto rep = eval::summarize(per);
    auto auc = [](const std::optional<double>& v) { return v ? fmt3(*v) : std::string("n/a"); };
    std::snprintf(line, sizeof line, "%-24s | %-6s %-6s %-6s %-6s %-6s | %-6s %-6s %-6s %-6s %-6s\n",
                  name.c_str(), fmt3(rep.micro.accuracy).c_str(), fmt3(rep.micro.f1).c_str(),
                  fmt3(rep.micro.precision).c_str(), fmt3(rep.micro.recall).c_str(),
                  auc(rep.micro.roc_auc).c_str(), fmt3(rep.macro.accuracy).c_str(),
                  fmt3(rep.macro.f1).c_str(), fmt3(rep.macro.precision).c_str(),
                  fmt3(rep.macro.recall).c_str(), auc(rep.macro.roc_auc).c_str());
    txt << line;
  }
  return txt.str();
}

}  // namespace clarity::pipeline
