#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace clarity::text {

inline constexpr std::string_view kUrlToken = "<url>";

// Result of removing markup from a post body.
struct StrippedHtml {
  std::string plain;
  bool contains_pre = false;
  bool contains_quote = false;
};

// Removes tags (each tag becomes a space), records <pre>/<blockquote>
// presence and decodes character entities. Contents of pre/code survive.
StrippedHtml strip_html(std::string_view html);

// Decodes &amp; &lt; &gt; &quot; &apos; and numeric references. Unknown
// entities are left untouched.
std::string decode_entities(std::string_view s);

// Splits on . ! ? followed by whitespace or end of text. Sentences are
// returned trimmed; empty ones are dropped.
std::vector<std::string> split_sentences(std::string_view s);

// True if the last non-whitespace character is '?'.
bool ends_with_question_mark(std::string_view sentence);

// Lowercased token stream. URLs become <url>; retained punctuation marks are
// single tokens; everything outside the retained set separates tokens.
std::vector<std::string> tokenize(std::string_view s);

bool is_punctuation_token(std::string_view token);

// Title, body and tags combined into one token field.
struct PreprocessedText {
  std::vector<std::string> tokens;
  std::vector<std::string> title_tokens;
  std::vector<std::string> tag_tokens;
  std::string raw_text;  // title + stripped body, for readability
  bool contains_pre = false;
  bool contains_quote = false;
};

PreprocessedText preprocess(std::string_view title, std::string_view body_html,
                            std::span<const std::string> tags);

// "<a><b-c>" -> {"a", "b-c"}. Also accepts "|a|b|" (newer dump layout).
std::vector<std::string> split_dump_tags(std::string_view tags);

std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::unordered_set<std::string> words);

  // One lowercase word per line; blank lines and '#' comments ignored.
  static StopwordList load(const std::string& path);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  // Stable digest of the sorted list, used in config hashing.
  std::string fingerprint() const;

 private:
  std::unordered_set<std::string> words_;
};

}  // namespace clarity::text
