#include <fstream>

#include <gtest/gtest.h>

#include "clarity/config.hpp"
#include "clarity/error.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace clarity::pipeline {
namespace {

namespace fs = std::filesystem;

fs::path write_config(const std::string& name, const std::string& body) {
  const auto dir = testing::scratch_dir(name);
  std::ofstream(dir / "config.json") << body;
  return dir / "config.json";
}

TEST(Config, Defaults) {
  const PipelineConfig c;
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.retrieval_depth, 50u);
  EXPECT_EQ(c.k_list, (std::vector<int>{10, 20, 50}));
  EXPECT_EQ(c.C, 1.0);
  EXPECT_EQ(c.ngram, 3);
  EXPECT_EQ(c.significance_rounds, 10000u);
  EXPECT_EQ(c.models, known_models());
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, KnownModels) {
  EXPECT_EQ(known_models().size(), 9u);
  EXPECT_TRUE(is_known_model("simq-ml"));
  EXPECT_TRUE(is_known_model("bow-lr-n1"));
  EXPECT_FALSE(is_known_model("bow-lr"));
}

TEST(Config, Validation) {
  auto bad = [](auto mutate) {
    PipelineConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), InputError);
  };
  bad([](PipelineConfig& c) { c.k_list = {}; });
  bad([](PipelineConfig& c) { c.k_list = {60}; });
  bad([](PipelineConfig& c) { c.k_list = {0}; });
  bad([](PipelineConfig& c) { c.retrieval_depth = 0; });
  bad([](PipelineConfig& c) { c.C = 0; });
  bad([](PipelineConfig& c) { c.ngram = 4; });
  bad([](PipelineConfig& c) { c.significance_rounds = 10; });
  bad([](PipelineConfig& c) { c.models = {"svm"}; });
  bad([](PipelineConfig& c) { c.port = 70000; });
}

TEST(Config, RelativePathsResolveAgainstFile) {
  const auto path = write_config("config-rel", R"({"posts": "dump/Posts.xml", "output_dir": "out",
    "stopwords": "/abs/stop.txt", "k_list": [5], "retrieval_depth": 5})");
  const auto c = load_config(path);
  EXPECT_EQ(c.posts, path.parent_path() / "dump" / "Posts.xml");
  EXPECT_EQ(c.output_dir, path.parent_path() / "out");
  EXPECT_EQ(c.stopwords, fs::path("/abs/stop.txt"));
  EXPECT_EQ(c.k_list, (std::vector<int>{5}));
}

TEST(Config, BadFilesAreInputErrors) {
  EXPECT_THROW(load_config(testing::scratch_dir("config-none") / "missing.json"), InputError);
  EXPECT_THROW(load_config(write_config("config-junk", "{not json")), InputError);
  EXPECT_THROW(load_config(write_config("config-type", R"({"seed": "x"})")), InputError);
  EXPECT_THROW(load_config(write_config("config-range", R"({"ngram": 7})")), InputError);
}

TEST(Config, HashIgnoresOutputModelsAndServer) {
  PipelineConfig a;
  a.posts = "/x/Posts.xml";
  auto b = a;
  b.output_dir = "/elsewhere";
  b.models = {"random"};
  b.port = 9999;
  b.bind = "0.0.0.0";
  b.serve_model = "majority";
  EXPECT_EQ(config_hash(a, "fp"), config_hash(b, "fp"));
  b.posts = "/y/Posts.xml";  // same basename
  EXPECT_EQ(config_hash(a, "fp"), config_hash(b, "fp"));
  EXPECT_NE(config_hash(a, "fp"), config_hash(a, "fp2"));
  auto c = a;
  c.C = 2.0;
  EXPECT_NE(config_hash(a, "fp"), config_hash(c, "fp"));
  EXPECT_EQ(config_hash(a, "fp").size(), 16u);
}

TEST(Config, EchoIsJson) {
  PipelineConfig c;
  c.corpus_name = "superuser";
  const auto j = nlohmann::json::parse(config_echo(c, "fp"));
  EXPECT_EQ(j.at("corpus_name"), "superuser");
  EXPECT_EQ(j.at("stopwords"), "fp");
  EXPECT_EQ(j.at("seed"), 42);
  EXPECT_FALSE(j.contains("output_dir"));
}

TEST(Config, StopwordResolution) {
  PipelineConfig c;
  c.stopwords = "/given/list.txt";
  EXPECT_EQ(resolve_stopwords(c), fs::path("/given/list.txt"));
}

}  // namespace
}  // namespace clarity::pipeline
