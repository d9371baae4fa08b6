#include "clarity/text.hpp"

#include <algorithm>
#include <fstream>

#include "clarity/error.hpp"
#include "util.hpp"

namespace clarity::text {
namespace {

using detail::ascii_lower;
using detail::is_space;

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Word characters after lowercasing.
bool is_word_char(char c) {
  c = ascii_lower(c);
  return (c >= 'a' && c <= 'z') || is_digit(c) || c == '_';
}

bool is_retained_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '\'': case '"': case '(': case ')': case '-':
      return true;
    default:
      return false;
  }
}

bool iequals_prefix(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(s[pos + i]) != prefix[i]) return false;
  }
  return true;
}

// Length of a URL starting at pos, or 0. Trailing sentence punctuation is not
// part of the URL.
std::size_t url_length_at(std::string_view s, std::size_t pos) {
  std::size_t body_start = 0;
  if (iequals_prefix(s, pos, "www.")) {
    body_start = pos + 4;
  } else if (is_alpha(s[pos])) {
    std::size_t i = pos + 1;
    while (i < s.size() && (is_alpha(s[i]) || is_digit(s[i]) || s[i] == '+' ||
                            s[i] == '.' || s[i] == '-')) {
      ++i;
    }
    if (s.substr(i, 3) != "://") return 0;
    body_start = i + 3;
  } else {
    return 0;
  }
  std::size_t end = body_start;
  while (end < s.size() && !is_space(s[end]) && s[end] != '<' && s[end] != '>' &&
         s[end] != '"') {
    ++end;
  }
  while (end > body_start) {
    char c = s[end - 1];
    if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' ||
        c == ')' || c == '\'') {
      --end;
    } else {
      break;
    }
  }
  if (end == body_start) return 0;
  return end - pos;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x110000) {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

}  // namespace

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += '&';
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    bool handled = true;
    if (name == "amp") out += '&';
    else if (name == "lt") out += '<';
    else if (name == "gt") out += '>';
    else if (name == "quot") out += '"';
    else if (name == "apos") out += '\'';
    else if (name == "nbsp") out += ' ';
    else if (name.size() > 1 && name[0] == '#') {
      unsigned long cp = 0;
      bool hex = name[1] == 'x' || name[1] == 'X';
      std::string_view digits = name.substr(hex ? 2 : 1);
      if (digits.empty()) handled = false;
      for (char c : digits) {
        int v;
        if (is_digit(c)) v = c - '0';
        else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else { handled = false; break; }
        cp = cp * (hex ? 16 : 10) + static_cast<unsigned long>(v);
        if (cp > 0x10FFFF) { handled = false; break; }
      }
      if (handled) append_utf8(out, cp);
    } else {
      handled = false;
    }
    if (handled) {
      i = semi;
    } else {
      out += '&';
    }
  }
  return out;
}

StrippedHtml strip_html(std::string_view html) {
  StrippedHtml result;
  std::string buf;
  buf.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    char c = html[i];
    if (c != '<' || i + 1 >= html.size()) {
      buf += c;
      ++i;
      continue;
    }
    char next = html[i + 1];
    if (html.substr(i, 4) == "<!--") {
      auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      buf += ' ';
      continue;
    }
    if (!(is_alpha(next) || next == '/' || next == '!')) {
      buf += c;
      ++i;
      continue;
    }
    auto close = html.find('>', i + 1);
    if (close == std::string_view::npos) {
      buf += c;
      ++i;
      continue;
    }
    std::size_t n = i + 1;
    bool closing = html[n] == '/';
    if (closing) ++n;
    std::string name;
    while (n < close && (is_alpha(html[n]) || is_digit(html[n]))) {
      name += ascii_lower(html[n]);
      ++n;
    }
    if (!closing) {
      if (name == "pre") result.contains_pre = true;
      if (name == "blockquote") result.contains_quote = true;
    }
    buf += ' ';
    i = close + 1;
  }
  result.plain = decode_entities(buf);
  return result;
}

std::vector<std::string> split_sentences(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == s.size() || is_space(s[i + 1]))) {
      auto sentence = detail::trim(s.substr(start, i + 1 - start));
      if (!sentence.empty()) out.emplace_back(sentence);
      start = i + 1;
    }
  }
  if (start < s.size()) {
    auto rest = detail::trim(s.substr(start));
    if (!rest.empty()) out.emplace_back(rest);
  }
  return out;
}

bool ends_with_question_mark(std::string_view sentence) {
  auto t = detail::trim(sentence);
  return !t.empty() && t.back() == '?';
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  std::size_t i = 0;
  while (i < s.size()) {
    if (current.empty()) {
      if (iequals_prefix(s, i, kUrlToken)) {
        tokens.emplace_back(kUrlToken);
        i += kUrlToken.size();
        continue;
      }
      if (std::size_t len = url_length_at(s, i); len > 0) {
        tokens.emplace_back(kUrlToken);
        i += len;
        continue;
      }
    }
    char c = ascii_lower(s[i]);
    bool next_is_word = i + 1 < s.size() && is_word_char(s[i + 1]);
    if (is_word_char(c)) {
      current += c;
    } else if (c == '\'' && !current.empty() && next_is_word) {
      // contraction: joined
    } else if (c == '-' && !current.empty() && next_is_word) {
      current += c;
    } else if (is_retained_punct(c)) {
      flush();
      tokens.emplace_back(1, c);
    } else {
      flush();
    }
    ++i;
  }
  flush();
  return tokens;
}

bool is_punctuation_token(std::string_view token) {
  return token.size() == 1 && is_retained_punct(token[0]);
}

PreprocessedText preprocess(std::string_view title, std::string_view body_html,
                            std::span<const std::string> tags) {
  PreprocessedText out;
  StrippedHtml body = strip_html(body_html);
  out.contains_pre = body.contains_pre;
  out.contains_quote = body.contains_quote;

  out.title_tokens = tokenize(title);
  auto body_tokens = tokenize(body.plain);
  for (const auto& tag : tags) {
    auto t = tokenize(tag);
    out.tag_tokens.insert(out.tag_tokens.end(), t.begin(), t.end());
  }
  out.tokens.reserve(out.title_tokens.size() + body_tokens.size() + out.tag_tokens.size());
  out.tokens.insert(out.tokens.end(), out.title_tokens.begin(), out.title_tokens.end());
  out.tokens.insert(out.tokens.end(), body_tokens.begin(), body_tokens.end());
  out.tokens.insert(out.tokens.end(), out.tag_tokens.begin(), out.tag_tokens.end());

  std::string raw(title);
  raw += ' ';
  raw += body.plain;
  out.raw_text = collapse_whitespace(raw);
  return out;
}

std::vector<std::string> split_dump_tags(std::string_view tags) {
  std::vector<std::string> out;
  if (tags.find('<') != std::string_view::npos) {
    std::size_t pos = 0;
    while ((pos = tags.find('<', pos)) != std::string_view::npos) {
      auto end = tags.find('>', pos + 1);
      if (end == std::string_view::npos) break;
      auto tag = tags.substr(pos + 1, end - pos - 1);
      if (!tag.empty()) out.emplace_back(tag);
      pos = end + 1;
    }
    return out;
  }
  char sep = tags.find('|') != std::string_view::npos ? '|' : ' ';
  std::size_t start = 0;
  while (start <= tags.size()) {
    auto end = tags.find(sep, start);
    if (end == std::string_view::npos) end = tags.size();
    auto tag = detail::trim(tags.substr(start, end - start));
    if (!tag.empty()) out.emplace_back(tag);
    start = end + 1;
  }
  return out;
}

std::string join(std::span<const std::string> tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

StopwordList::StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

StopwordList StopwordList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read stopword file: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = detail::trim(line);
    if (w.empty() || w.front() == '#') continue;
    std::string lower(w);
    std::transform(lower.begin(), lower.end(), lower.begin(), ascii_lower);
    words.insert(std::move(lower));
  }
  if (words.empty()) throw InputError("stopword file is empty: " + path);
  return StopwordList(std::move(words));
}

bool StopwordList::contains(std::string_view word) const {
  return words_.find(std::string(word)) != words_.end();
}

std::string StopwordList::fingerprint() const {
  std::vector<std::string> sorted(words_.begin(), words_.end());
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = detail::fnv1a64("stopwords");
  for (const auto& w : sorted) {
    h = detail::fnv1a64(w, h);
    h = detail::fnv1a64("\n", h);
  }
  return detail::hex64(h);
}

}  // namespace clarity::text
