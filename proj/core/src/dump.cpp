#include "clarity/dump.hpp"

#include <charconv>

#include "clarity/error.hpp"
#include "clarity/text.hpp"
#include "util.hpp"

namespace clarity::dump {
namespace {

constexpr std::size_t kChunk = 1 << 16;

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = detail::trim(s);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

const std::string* find_attr(const Attributes& attrs, std::string_view name) {
  for (const auto& [k, v] : attrs) {
    if (k == name) return &v;
  }
  return nullptr;
}

std::optional<std::int64_t> int_attr(const Attributes& attrs, std::string_view name) {
  const auto* v = find_attr(attrs, name);
  return v ? parse_int(*v) : std::nullopt;
}

std::optional<Timestamp> time_attr(const Attributes& attrs, std::string_view name) {
  const auto* v = find_attr(attrs, name);
  return v ? parse_timestamp(*v) : std::nullopt;
}

bool is_name_char(int c) {
  return c > ' ' && c != '=' && c != '/' && c != '>' && c != '<' && c != '"' && c != '\'';
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  s = detail::trim(s);
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':') {
    return std::nullopt;
  }
  auto num = [&](std::size_t pos, std::size_t len) { return parse_int(s.substr(pos, len)); };
  auto y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2), mi = num(14, 2),
       sec = num(17, 2);
  if (!y || !mo || !d || !h || !mi || !sec) return std::nullopt;
  std::int64_t millis = 0;
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::int64_t scale = 100;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      millis += (s[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
  }
  if (pos < s.size() && s[pos] == 'Z') ++pos;
  if (pos != s.size()) return std::nullopt;

  using namespace std::chrono;
  year_month_day ymd{year{static_cast<int>(*y)}, month{static_cast<unsigned>(*mo)},
                     day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *sec > 60) return std::nullopt;
  return sys_days{ymd} + hours{*h} + minutes{*mi} + seconds{*sec} + milliseconds{millis};
}

EditKind edit_kind_from_code(int history_type_id) {
  switch (history_type_id) {
    case 4: return EditKind::edit_title;
    case 5: return EditKind::edit_body;
    case 6: return EditKind::edit_tags;
    default: return EditKind::other;
  }
}

RowReader::RowReader(std::istream& in) : in_(in), buf_(kChunk) {}

int RowReader::peek() {
  if (pos_ == len_) {
    in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    len_ = static_cast<std::size_t>(in_.gcount());
    pos_ = 0;
    if (len_ == 0) return -1;
  }
  return static_cast<unsigned char>(buf_[pos_]);
}

int RowReader::get() {
  int c = peek();
  if (c >= 0) {
    ++pos_;
    ++offset_;
  }
  return c;
}

void RowReader::fail(const std::string& what) const { throw ParseError(what, offset_); }

void RowReader::skip_until(std::string_view terminator) {
  std::size_t matched = 0;
  while (matched < terminator.size()) {
    int c = get();
    if (c < 0) fail("unterminated markup, expected '" + std::string(terminator) + "'");
    if (c == terminator[matched]) {
      ++matched;
    } else {
      matched = (c == terminator[0]) ? 1 : 0;
    }
  }
}

void RowReader::read_tag(Attributes& attrs, std::string& name, bool& self_closing,
                         bool& closing) {
  attrs.clear();
  name.clear();
  self_closing = false;
  closing = false;
  if (peek() == '/') {
    get();
    closing = true;
  }
  while (is_name_char(peek())) name += static_cast<char>(get());
  if (name.empty()) fail("malformed tag name");
  auto skip_ws = [&] {
    while (peek() >= 0 && detail::is_space(static_cast<char>(peek()))) get();
  };
  std::string key;
  std::string raw;
  while (true) {
    skip_ws();
    int c = peek();
    if (c < 0) fail("unexpected end of document inside tag <" + name + ">");
    if (c == '>') {
      get();
      return;
    }
    if (c == '/') {
      get();
      if (get() != '>') fail("expected '>' after '/'");
      self_closing = true;
      return;
    }
    if (closing) fail("attributes on closing tag </" + name + ">");
    key.clear();
    while (is_name_char(peek())) key += static_cast<char>(get());
    if (key.empty()) fail("malformed attribute in <" + name + ">");
    skip_ws();
    if (get() != '=') fail("expected '=' after attribute " + key);
    skip_ws();
    int quote = get();
    if (quote != '"' && quote != '\'') fail("attribute " + key + " is not quoted");
    raw.clear();
    while (true) {
      int v = get();
      if (v < 0) fail("unterminated attribute value for " + key);
      if (v == quote) break;
      raw += static_cast<char>(v);
    }
    attrs.emplace_back(key, text::decode_entities(raw));
  }
}

bool RowReader::next(Attributes& attrs) {
  std::string name;
  bool self_closing = false;
  bool closing = false;
  while (true) {
    int c = get();
    if (c < 0) {
      if (root_.empty()) fail("empty document: no root element");
      if (!root_closed_) fail("unexpected end of document: <" + root_ + "> not closed");
      return false;
    }
    if (detail::is_space(static_cast<char>(c))) continue;
    if (c != '<') {
      fail(root_closed_ ? "content after root element" : "unexpected text content");
    }
    int n = peek();
    if (n == '?') {
      skip_until("?>");
      continue;
    }
    if (n == '!') {
      get();
      if (peek() == '-') {
        get();
        if (get() != '-') fail("malformed comment");
        skip_until("-->");
      } else {
        skip_until(">");
      }
      continue;
    }
    if (root_closed_) fail("element after root element");
    read_tag(attrs, name, self_closing, closing);
    if (closing) {
      if (name != root_) fail("mismatched closing tag </" + name + ">");
      root_closed_ = true;
      continue;
    }
    if (root_.empty()) {
      root_ = name;
      root_closed_ = self_closing;
      continue;
    }
    if (!self_closing) fail("nested element <" + name + "> inside <" + root_ + ">");
    if (name == "row") return true;
  }
}

ParseCounts read_posts(std::istream& in, const std::function<void(RawPost&&)>& sink) {
  RowReader reader(in);
  Attributes attrs;
  ParseCounts counts;
  while (reader.next(attrs)) {
    ++counts.rows;
    auto id = int_attr(attrs, "Id");
    auto type = int_attr(attrs, "PostTypeId");
    auto created = time_attr(attrs, "CreationDate");
    if (!id || !type || !created) {
      ++counts.skipped;
      continue;
    }
    RawPost post;
    post.id = *id;
    post.post_type = *type == 1 ? PostType::question
                     : *type == 2 ? PostType::answer
                                  : PostType::other;
    post.creation_date = *created;
    post.owner_user_id = int_attr(attrs, "OwnerUserId");
    post.accepted_answer_id = int_attr(attrs, "AcceptedAnswerId");
    if (post.post_type == PostType::question) {
      const auto* title = find_attr(attrs, "Title");
      if (!title) {
        ++counts.skipped;
        continue;
      }
      post.title = *title;
      if (const auto* body = find_attr(attrs, "Body")) post.body = *body;
      if (const auto* tags = find_attr(attrs, "Tags")) post.tags = text::split_dump_tags(*tags);
    }
    sink(std::move(post));
  }
  return counts;
}

ParseCounts read_comments(std::istream& in, const std::function<void(RawComment&&)>& sink) {
  RowReader reader(in);
  Attributes attrs;
  ParseCounts counts;
  while (reader.next(attrs)) {
    ++counts.rows;
    auto post_id = int_attr(attrs, "PostId");
    auto created = time_attr(attrs, "CreationDate");
    const auto* text = find_attr(attrs, "Text");
    if (!post_id || !created || !text) {
      ++counts.skipped;
      continue;
    }
    sink(RawComment{*post_id, int_attr(attrs, "UserId"), *created, *text});
  }
  return counts;
}

ParseCounts read_history(std::istream& in, const std::function<void(RawEdit&&)>& sink) {
  RowReader reader(in);
  Attributes attrs;
  ParseCounts counts;
  while (reader.next(attrs)) {
    ++counts.rows;
    auto post_id = int_attr(attrs, "PostId");
    auto type = int_attr(attrs, "PostHistoryTypeId");
    auto created = time_attr(attrs, "CreationDate");
    if (!post_id || !type || !created) {
      ++counts.skipped;
      continue;
    }
    sink(RawEdit{*post_id, int_attr(attrs, "UserId"), *created,
                 edit_kind_from_code(static_cast<int>(*type))});
  }
  return counts;
}

Dump parse_dump(std::istream& posts, std::istream& comments, std::istream& history) {
  Dump d;
  d.post_counts = read_posts(posts, [&](RawPost&& p) { d.posts.push_back(std::move(p)); });
  d.comment_counts =
      read_comments(comments, [&](RawComment&& c) { d.comments.push_back(std::move(c)); });
  d.edit_counts = read_history(history, [&](RawEdit&& e) { d.edits.push_back(std::move(e)); });
  return d;
}

}  // namespace clarity::dump
