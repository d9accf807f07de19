#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "annote/error.hpp"
#include "annote/knowledge_base.hpp"

namespace annote {

/// The fact file is line oriented UTF-8 with LF endings:
///
///   % comment
///   annotator(<id>, "<name>", <veilleur|analyste|decideur|"free text">).
///   document(<id>, <primary|secondary|tertiary>).
///   annotation(<object-id>, <"attribute"|_>, [<value>, ...], <target-id>).
///
/// where <value> is "term" or ("term", <integer>), and identifiers match
/// [A-Za-z0-9_]+. Strings escape '"' and '\' with a backslash. Consecutive
/// annotation lines with the same object id form one multi-pair object.

/// One rejected line. `line` and `column` are 1-based; the column counts
/// code points.
struct Diagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  ErrorCode code = ErrorCode::ParseError;
  std::string reason;
};

std::string to_string(const Diagnostic& diagnostic);

struct LoadResult {
  KnowledgeBase kb;
  std::vector<Diagnostic> diagnostics;
  std::size_t objects_loaded = 0;  // objects inserted from this text
  std::size_t lines_rejected = 0;
};

/// Parses `text` and inserts its facts into `base`. Never throws on bad
/// input: every rejected line yields a Diagnostic and loading continues.
LoadResult load_facts(std::string_view text, KnowledgeBase base = {});

/// Canonical serialization: header comment, annotators by id, non-tertiary
/// documents by id, then annotation lines with objects sorted by id and
/// pairs in stored order.
std::string save_facts(const KnowledgeBase& kb);

inline constexpr std::string_view kFactFileHeader = "% annote-kb fact file v1";

}  // namespace annote
