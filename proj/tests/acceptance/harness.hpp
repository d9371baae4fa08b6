#pragma once

#include <cstdio>
#include <exception>
#include <functional>
#include <string>

namespace clarity::acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Prints one PASS/FAIL line per criterion; an exception counts as FAIL.
class Report {
 public:
  void check(const std::string& name, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures_ += o.pass ? 0 : 1;
  }

  void not_run(const std::string& name, const std::string& why) {
    std::printf("NOT RUN %s: %s\n", name.c_str(), why.c_str());
  }

  int exit_code() const { return failures_ ? 1 : 0; }

 private:
  int failures_ = 0;
};

inline std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

}  // namespace clarity::acceptance
