#include "annote/fact_file.hpp"

#include <charconv>
#include <optional>

namespace annote {
namespace {

struct ParseFailure {
  std::size_t offset;
  ErrorCode code;
  std::string reason;
};

std::size_t code_point_column(std::string_view line, std::size_t offset) {
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < line.size(); ++i) {
    if ((static_cast<unsigned char>(line[i]) & 0xC0) != 0x80) ++column;
  }
  return column;
}

bool ident_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') || u == '_';
}

class LineScanner {
 public:
  explicit LineScanner(std::string_view line) : line_(line) {}

  std::size_t offset() const { return pos_; }

  void skip_ws() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= line_.size();
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < line_.size() && line_[pos_] == c;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= line_.size() || line_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < line_.size() && ident_char(line_[pos_])) ++pos_;
    if (pos_ == start) fail("expected identifier [A-Za-z0-9_]+");
    return std::string(line_.substr(start, pos_ - start));
  }

  std::string quoted() {
    skip_ws();
    if (pos_ >= line_.size() || line_[pos_] != '"') fail("expected '\"'");
    ++pos_;
    std::string out;
    while (pos_ < line_.size()) {
      const char c = line_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= line_.size()) break;
      const char e = line_[pos_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        default: fail(std::string("unknown escape '\\") + e + "'", pos_ - 2);
      }
    }
    fail("unterminated string");
  }

  std::int64_t integer() {
    skip_ws();
    const auto start = pos_;
    if (pos_ < line_.size() && line_[pos_] == '-') ++pos_;
    while (pos_ < line_.size() && line_[pos_] >= '0' && line_[pos_] <= '9') ++pos_;
    std::int64_t value = 0;
    const auto* first = line_.data() + start;
    const auto* last = line_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) fail("expected integer rank", start);
    return value;
  }

  [[noreturn]] void fail(std::string reason) { fail(std::move(reason), pos_); }
  [[noreturn]] void fail(std::string reason, std::size_t at, ErrorCode code = ErrorCode::ParseError) {
    throw ParseFailure{at, code, std::move(reason)};
  }

 private:
  std::string_view line_;
  std::size_t pos_ = 0;
};

template <typename F>
auto normalized(LineScanner& scanner, std::size_t at, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    scanner.fail(e.what(), at, e.code());
  }
}

struct AnnotationLine {
  std::string id;
  std::string target;
  AVPair pair;
};

AnnotationLine parse_annotation(LineScanner& s) {
  AnnotationLine out;
  out.id = s.identifier();
  s.expect(',');
  s.skip_ws();
  if (s.peek('"')) {
    const auto at = s.offset();
    auto raw = s.quoted();
    out.pair.attribute = normalized(s, at, [&] { return normalize_attribute(raw); });
  } else {
    const auto at = s.offset();
    if (s.identifier() != "_") s.fail("expected quoted attribute or '_'", at);
  }
  s.expect(',');
  s.expect('[');
  if (!s.peek(']')) {
    for (;;) {
      if (s.peek('(')) {
        s.expect('(');
        const auto at = s.offset();
        auto raw = s.quoted();
        s.expect(',');
        const auto rank = s.integer();
        s.expect(')');
        out.pair.values.push_back(normalized(s, at, [&] { return weighted(raw, rank); }));
      } else {
        s.skip_ws();
        const auto at = s.offset();
        auto raw = s.quoted();
        out.pair.values.push_back(normalized(s, at, [&] { return plain(raw); }));
      }
      if (s.peek(']')) break;
      s.expect(',');
    }
  }
  s.expect(']');
  s.expect(',');
  out.target = s.identifier();
  s.expect(')');
  s.expect('.');
  if (!s.at_end()) s.fail("unexpected text after '.'");
  return out;
}

struct PendingDocument {
  std::size_t line;
  DocumentRecord record;
};

DocumentRecord parse_document(LineScanner& s) {
  DocumentRecord record;
  record.id = s.identifier();
  s.expect(',');
  s.skip_ws();
  const auto at = s.offset();
  const auto word = s.identifier();
  const auto tier = parse_tier(word);
  if (!tier) s.fail("expected primary, secondary or tertiary", at);
  record.tier = *tier;
  s.expect(')');
  s.expect('.');
  if (!s.at_end()) s.fail("unexpected text after '.'");
  return record;
}

AnnotatorProfile parse_annotator(LineScanner& s) {
  AnnotatorProfile profile;
  profile.id = s.identifier();
  s.expect(',');
  profile.name = s.quoted();
  s.expect(',');
  s.skip_ws();
  const auto at = s.offset();
  if (s.peek('"')) {
    auto text = s.quoted();
    if (text.empty()) s.fail("empty role text", at);
    profile.role = parse_role(text);
  } else {
    const auto word = s.identifier();
    profile.role = parse_role(word);
    if (profile.role.kind == AnnotatorRole::Kind::Autre) {
      s.fail("expected veilleur, analyste, decideur or a quoted role", at);
    }
  }
  s.expect(')');
  s.expect('.');
  if (!s.at_end()) s.fail("unexpected text after '.'");
  return profile;
}

class Loader {
 public:
  explicit Loader(KnowledgeBase base) { result_.kb = std::move(base); }

  LoadResult run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      auto line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      process(line_no, line);
      start = end + 1;
    }
    flush();
    for (auto& pending : documents_) {
      try {
        result_.kb.register_document(std::move(pending.record));
      } catch (const Error& e) {
        reject(pending.line, 1, e.code(), e.what());
      }
    }
    return std::move(result_);
  }

 private:
  struct Group {
    std::string id;
    std::string target;
    std::size_t first_line = 0;
    std::size_t line_count = 0;
    std::vector<AVPair> pairs;
  };

  void process(std::size_t line_no, std::string_view line) {
    LineScanner s(line);
    if (s.at_end() || s.peek('%')) return;
    try {
      const auto at = s.offset();
      const auto functor = s.identifier();
      s.expect('(');
      if (functor == "annotation") {
        accept_annotation(line_no, parse_annotation(s), line);
      } else if (functor == "document") {
        flush();
        documents_.push_back({line_no, parse_document(s)});
      } else if (functor == "annotator") {
        flush();
        result_.kb.register_annotator(parse_annotator(s));
      } else {
        s.fail("unknown clause '" + functor + "'", at);
      }
    } catch (const ParseFailure& f) {
      reject(line_no, code_point_column(line, f.offset), f.code, f.reason);
    } catch (const Error& e) {
      reject(line_no, 1, e.code(), e.what());
    }
  }

  void accept_annotation(std::size_t line_no, AnnotationLine parsed, std::string_view line) {
    if (!parsed.pair.is_valid()) {
      reject(line_no, code_point_column(line, line.find(',')), ErrorCode::InvalidObject,
             "pair has neither attribute nor values");
      return;
    }
    if (group_ && group_->id == parsed.id) {
      if (group_->target != parsed.target) {
        reject(line_no, 1, ErrorCode::ParseError,
               "target '" + parsed.target + "' differs from '" + group_->target + "' for object " + parsed.id);
        return;
      }
      group_->pairs.push_back(std::move(parsed.pair));
      ++group_->line_count;
      return;
    }
    flush();
    group_ = Group{std::move(parsed.id), std::move(parsed.target), line_no, 1, {}};
    group_->pairs.push_back(std::move(parsed.pair));
  }

  void flush() {
    if (!group_) return;
    Group group = std::move(*group_);
    group_.reset();
    AnnotationObject object;
    object.id = group.id;
    object.target = group.target;
    object.pairs = std::move(group.pairs);
    object.meta = fact_file_meta();
    try {
      result_.kb.insert(std::move(object));
      ++result_.objects_loaded;
    } catch (const Error& e) {
      result_.diagnostics.push_back({group.first_line, 1, e.code(), e.what()});
      result_.lines_rejected += group.line_count;
    }
  }

  void reject(std::size_t line, std::size_t column, ErrorCode code, std::string reason) {
    result_.diagnostics.push_back({line, column, code, std::move(reason)});
    ++result_.lines_rejected;
  }

  LoadResult result_;
  std::optional<Group> group_;
  std::vector<PendingDocument> documents_;
};

void append_quoted(std::string& out, std::string_view text) {
  out.push_back('"');
  for (const char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
}

void append_value(std::string& out, const Value& value) {
  if (value.rank) {
    out.push_back('(');
    append_quoted(out, value.term.text());
    out += ", ";
    out += std::to_string(*value.rank);
    out.push_back(')');
  } else {
    append_quoted(out, value.term.text());
  }
}

}  // namespace

std::string to_string(const Diagnostic& d) {
  return "line " + std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
         std::string(to_string(d.code)) + ": " + d.reason;
}

LoadResult load_facts(std::string_view text, KnowledgeBase base) {
  return Loader(std::move(base)).run(text);
}

std::string save_facts(const KnowledgeBase& kb) {
  std::string out(kFactFileHeader);
  out.push_back('\n');

  for (const auto& [id, profile] : kb.annotators()) {
    out += "annotator(" + id + ", ";
    append_quoted(out, profile.name);
    out += ", ";
    if (profile.role.kind == AnnotatorRole::Kind::Autre) {
      append_quoted(out, profile.role.other);
    } else {
      out += to_string(profile.role);
    }
    out += ").\n";
  }

  for (const auto& [id, record] : kb.documents()) {
    if (record.tier == DocumentTier::Tertiary) continue;
    out += "document(" + id + ", " + std::string(to_string(record.tier)) + ").\n";
  }

  for (const auto& [id, object] : kb.objects()) {
    for (const auto& pair : object.pairs) {
      out += "annotation(" + id + ", ";
      if (pair.attribute) {
        append_quoted(out, pair.attribute->text());
      } else {
        out.push_back('_');
      }
      out += ", [";
      for (std::size_t i = 0; i < pair.values.size(); ++i) {
        if (i > 0) out += ", ";
        append_value(out, pair.values[i]);
      }
      out += "], " + object.target + ").\n";
    }
  }
  return out;
}

}  // namespace annote
