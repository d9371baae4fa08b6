#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Readers for the public Stack Exchange archive layout: Posts.xml,
// Comments.xml and PostHistory.xml, each a root element holding empty
// <row .../> elements whose data lives in attributes.
namespace clarity::dump {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// "2010-07-19T19:12:12.510" (fraction and trailing Z optional).
std::optional<Timestamp> parse_timestamp(std::string_view s);

enum class PostType { question, answer, other };
enum class EditKind { edit_title, edit_body, edit_tags, other };

// History type codes 4, 5, 6 are title, body and tag edits.
EditKind edit_kind_from_code(int history_type_id);

struct RawPost {
  std::int64_t id = 0;
  PostType post_type = PostType::other;
  std::optional<std::int64_t> owner_user_id;
  Timestamp creation_date{};
  std::optional<std::string> title;
  std::optional<std::string> body;
  std::vector<std::string> tags;
  std::optional<std::int64_t> accepted_answer_id;
};

struct RawComment {
  std::int64_t post_id = 0;
  std::optional<std::int64_t> user_id;
  Timestamp creation_date{};
  std::string text;
};

struct RawEdit {
  std::int64_t post_id = 0;
  std::optional<std::int64_t> user_id;
  Timestamp creation_date{};
  EditKind kind = EditKind::other;
};

using Attributes = std::vector<std::pair<std::string, std::string>>;

// Incremental reader over one dump file. Holds only the current row in
// memory. Throws ParseError with the byte offset on document-level damage.
class RowReader {
 public:
  explicit RowReader(std::istream& in);

  // Fills attrs (entity-decoded) with the next <row> element; false at end.
  bool next(Attributes& attrs);

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  int get();
  int peek();
  [[noreturn]] void fail(const std::string& what) const;
  void skip_until(std::string_view terminator);
  void read_tag(Attributes& attrs, std::string& name, bool& self_closing, bool& closing);

  std::istream& in_;
  std::uint64_t offset_ = 0;
  std::string root_;
  bool root_closed_ = false;
  std::vector<char> buf_;
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
};

struct ParseCounts {
  std::size_t rows = 0;
  std::size_t skipped = 0;  // rows missing required attributes
};

ParseCounts read_posts(std::istream& in, const std::function<void(RawPost&&)>& sink);
ParseCounts read_comments(std::istream& in, const std::function<void(RawComment&&)>& sink);
ParseCounts read_history(std::istream& in, const std::function<void(RawEdit&&)>& sink);

struct Dump {
  std::vector<RawPost> posts;
  std::vector<RawComment> comments;
  std::vector<RawEdit> edits;
  ParseCounts post_counts;
  ParseCounts comment_counts;
  ParseCounts edit_counts;
};

// Reads the three streams. Answer bodies are not retained since nothing
// downstream reads them.
Dump parse_dump(std::istream& posts, std::istream& comments, std::istream& history);

}  // namespace clarity::dump
