// clarity: command-line front end of the clear/unclear question pipeline.
//
//   clarity ingest   --config cfg.json
//   clarity train    --config cfg.json [--model NAME]...
//   clarity evaluate --config cfg.json [--model NAME]...
//   clarity classify --config cfg.json [--model NAME] [--input question.json]
//   clarity serve    --config cfg.json [--model NAME] [--bind ADDR] [--port N]
//   clarity summarize REPORT.json...
//
// Exit codes: 0 ok, 1 internal error, 2 usage or input error.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <iterator>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "clarity/engine.hpp"
#include "clarity/error.hpp"
#include "clarity/pipeline.hpp"
#include "clarity/service.hpp"

namespace {

namespace pl = clarity::pipeline;

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kUsage = 2;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> models;
  std::string output;
};

pl::PipelineConfig resolve(const Overrides& o) {
  auto c = pl::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (!o.output.empty()) c.output_dir = o.output;
  if (!o.models.empty()) c.models = o.models;
  for (auto& m : c.models) {
    if (m == "bow-lr") m = "bow-lr-n" + std::to_string(c.ngram);
  }
  c.validate();
  return c;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Pipeline configuration (JSON)")->required();
  cmd->add_option("--seed", o.seed, "Override the configured seed");
  cmd->add_option("--model", o.models, "Model name (repeatable)");
  cmd->add_option("--output", o.output, "Override the output directory");
}

clarity::service::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

int run_ingest(const Overrides& o) {
  auto s = pl::cmd_ingest(resolve(o));
  std::printf("corpus: %zu questions (%zu clear, %zu unclear), %zu discarded, %zu skipped rows\n",
              s.stats.n, s.labels.clear, s.labels.unclear,
              s.labels.discarded_no_owner + s.labels.discarded_no_response +
                  s.labels.discarded_unmatched + s.empty_questions,
              s.skipped_rows);
  std::printf("run directory: %s\n", s.run_dir.c_str());
  return kOk;
}

int run_train(const Overrides& o) {
  auto c = resolve(o);
  for (const auto& m : c.models) {
    auto s = pl::cmd_train(c, m);
    std::printf("%s -> %s\n", s.model.name.c_str(), s.artifact.c_str());
  }
  return kOk;
}

int run_evaluate(const Overrides& o) {
  auto c = resolve(o);
  auto s = pl::cmd_evaluate(c, c.models);
  std::cout << pl::read_file(s.report_text);
  return kOk;
}

std::string serve_model(const pl::PipelineConfig& c, const Overrides& o) {
  if (o.models.size() > 1) throw clarity::InputError("exactly one --model is served");
  return o.models.empty() ? c.serve_model : o.models.front();
}

int run_classify(const Overrides& o, const std::string& input) {
  auto c = resolve(o);
  std::string body;
  if (input.empty() || input == "-") {
    body.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    body = pl::read_file(input);
  }
  auto request = clarity::engine::parse_request(body);
  auto engine = clarity::engine::ClassificationEngine::load(c, serve_model(c, o));
  std::cout << clarity::engine::to_json(engine->classify(request)) << '\n';
  return kOk;
}

int run_serve(const Overrides& o, std::optional<std::string> bind, std::optional<int> port) {
  auto c = resolve(o);
  const auto host = bind.value_or(c.bind);
  clarity::service::Service service;
  const int bound = service.bind(host, port.value_or(c.port));
  if (bound < 0) throw clarity::InputError("cannot bind " + host);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  // Requests are answered with 503 while the artifacts load.
  std::thread server([&] { service.listen(); });
  try {
    service.install(clarity::engine::ClassificationEngine::load(c, serve_model(c, o)));
  } catch (...) {
    service.stop();
    server.join();
    throw;
  }
  std::fprintf(stderr, "serving on %s:%d\n", host.c_str(), bound);
  server.join();
  g_service = nullptr;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect questions that need clarification"};
  app.require_subcommand(1);

  Overrides o;
  std::string input;
  std::optional<std::string> bind;
  std::optional<int> port;
  std::vector<std::string> reports;

  auto* ingest = app.add_subcommand("ingest", "Parse dumps, label and split the corpus");
  auto* train = app.add_subcommand("train", "Train model artifacts");
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate models on the test split");
  auto* classify = app.add_subcommand("classify", "Classify one question given as JSON");
  auto* serve = app.add_subcommand("serve", "Serve /classify and /health over HTTP");
  auto* summarize = app.add_subcommand("summarize", "Micro/macro averages over reports");
  for (auto* cmd : {ingest, train, evaluate, classify, serve}) add_common(cmd, o);
  classify->add_option("--input", input, "Question JSON file, '-' for stdin");
  serve->add_option("--bind", bind, "Bind address");
  serve->add_option("--port", port, "Port");
  summarize->add_option("reports", reports, "report.json files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest) return run_ingest(o);
    if (*train) return run_train(o);
    if (*evaluate) return run_evaluate(o);
    if (*classify) return run_classify(o, input);
    if (*serve) return run_serve(o, bind, port);
    if (*summarize) {
      std::vector<std::filesystem::path> paths(reports.begin(), reports.end());
      std::cout << pl::cmd_summarize(paths);
      return kOk;
    }
  } catch (const clarity::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const clarity::LeakageError& e) {
    std::fprintf(stderr, "leakage: %s\n", e.what());
    return kInternal;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternal;
  }
  return kUsage;
}
