#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string(CLARITY_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    out_ = new fs::path(clarity::testing::scratch_dir("cli-out"));
    config_ = new std::string((clarity::testing::fixture("mini-dump") / "config.json").string());
  }
  static void TearDownTestSuite() {
    delete out_;
    delete config_;
  }
  static std::string common() { return "--config " + *config_ + " --output " + out_->string(); }

  static fs::path* out_;
  static std::string* config_;
};

fs::path* Cli::out_ = nullptr;
std::string* Cli::config_ = nullptr;

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("ingest"), 2);  // --config is required
  EXPECT_EQ(run("ingest --config /nonexistent/config.json"), 2);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, FullRun) {
  ASSERT_EQ(run("ingest " + common()), 0);
  ASSERT_EQ(run("train " + common() + " --model majority --model simq-ml --model bow-lr"), 0);
  EXPECT_EQ(run("train " + common() + " --model svm"), 2);
  EXPECT_EQ(run("evaluate " + common() + " --model majority --model simq-ml"), 0);

  const auto good = *out_ / "q.json";
  std::ofstream(good) << R"({"title": "xml editor breaks utf8", "body": "Any idea?", "tags": ["xml"]})";
  EXPECT_EQ(run("classify " + common() + " --model simq-ml --input " + good.string()), 0);
  const auto bad = *out_ / "bad.json";
  std::ofstream(bad) << "{\"title\": ";
  EXPECT_EQ(run("classify " + common() + " --model simq-ml --input " + bad.string()), 2);
  // Not trained.
  EXPECT_EQ(run("classify " + common() + " --model threshold-cqglobal --input " + good.string()), 2);
}

TEST_F(Cli, MissingDumpIsInputError) {
  const auto dir = clarity::testing::scratch_dir("cli-missing");
  std::ofstream(dir / "config.json") << R"({"posts": "Posts.xml", "comments": "Comments.xml",
    "history": "PostHistory.xml", "stopwords": ")" + clarity::testing::stopword_file().string() + "\"}";
  EXPECT_EQ(run("ingest --config " + (dir / "config.json").string() + " --output " + dir.string()), 2);
}

}  // namespace
