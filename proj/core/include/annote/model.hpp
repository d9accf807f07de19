#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace annote {

// ---------------------------------------------------------------------------
// Normalized strings
// ---------------------------------------------------------------------------

/// A value term in canonical form: NFC, case-folded, trimmed. Accents are
/// kept. Instances can only be obtained through normalize_term(), so every
/// Term in the system is canonical.
class Term {
 public:
  const std::string& text() const noexcept { return text_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term&, const Term&) = default;

 private:
  explicit Term(std::string text) : text_(std::move(text)) {}
  std::string text_;

  friend Term normalize_term(std::string_view raw);
};

/// An attribute name in canonical form. Same folding as Term, and internal
/// runs of whitespace and hyphens collapse to a single '-', so "mots clés"
/// and "Mots-Clés" are the same attribute.
class AttributeName {
 public:
  const std::string& text() const noexcept { return text_; }

  friend bool operator==(const AttributeName&, const AttributeName&) = default;
  friend std::strong_ordering operator<=>(const AttributeName&, const AttributeName&) = default;

 private:
  explicit AttributeName(std::string text) : text_(std::move(text)) {}
  std::string text_;

  friend AttributeName normalize_attribute(std::string_view raw);
};

/// Throws Error(EmptyTerm) on blank input, Error(InvalidEncoding) on bad UTF-8.
Term normalize_term(std::string_view raw);
/// Throws Error(EmptyAttribute) on blank input, Error(InvalidEncoding) on bad UTF-8.
AttributeName normalize_attribute(std::string_view raw);

// ---------------------------------------------------------------------------
// Attribute/value content
// ---------------------------------------------------------------------------

/// A plain term, or a term with an integer rank (the weighted scale values).
/// operator== is storage equality and includes the rank; matching uses
/// same_term(), which ignores it.
struct Value {
  Term term;
  std::optional<std::int64_t> rank;

  friend bool operator==(const Value&, const Value&) = default;
  friend auto operator<=>(const Value&, const Value&) = default;
};

inline bool same_term(const Value& a, const Value& b) noexcept { return a.term == b.term; }

Value plain(std::string_view term);
Value weighted(std::string_view term, std::int64_t rank);

/// One (A, V) pair. Either side may be missing but not both.
struct AVPair {
  std::optional<AttributeName> attribute;
  std::vector<Value> values;

  bool has_attribute() const noexcept { return attribute.has_value(); }
  bool has_values() const noexcept { return !values.empty(); }
  bool is_explicit() const noexcept { return has_attribute() && has_values(); }
  bool is_valid() const noexcept { return has_attribute() || has_values(); }
  bool contains(const Term& term) const noexcept;

  friend bool operator==(const AVPair&, const AVPair&) = default;
};

/// Builds a pair from raw strings; an absent attribute is std::nullopt.
AVPair av_pair(std::optional<std::string_view> attribute, const std::vector<std::string>& terms);

enum class ExplicitnessState { Explicit, Implicit, Invalid };

std::string_view to_string(ExplicitnessState state) noexcept;

// ---------------------------------------------------------------------------
// Metadata vocabularies. Each has a closed set of kinds plus an open
// "Autre" kind carrying non-empty free text.
// ---------------------------------------------------------------------------

struct ActionKind {
  enum class Kind { Partager, Inclure, Filtrer, Indexer, Faciliter, Attacher, Autre };

  Kind kind = Kind::Attacher;
  std::string other;

  ActionKind() = default;
  ActionKind(Kind k) : kind(k) {}  // NOLINT: implicit from a closed kind
  static ActionKind autre(std::string text);

  friend bool operator==(const ActionKind&, const ActionKind&) = default;
};

struct AnnotationContext {
  enum class Kind { Requete, RechercheInfo, Interpretation, Proposition, Autre };

  Kind kind = Kind::RechercheInfo;
  std::string other;

  AnnotationContext() = default;
  AnnotationContext(Kind k) : kind(k) {}  // NOLINT
  static AnnotationContext autre(std::string text);

  friend bool operator==(const AnnotationContext&, const AnnotationContext&) = default;
};

struct AnnotatorRole {
  enum class Kind { Veilleur, Analyste, Decideur, Autre };

  Kind kind = Kind::Veilleur;
  std::string other;

  AnnotatorRole() = default;
  AnnotatorRole(Kind k) : kind(k) {}  // NOLINT
  static AnnotatorRole autre(std::string text);

  friend bool operator==(const AnnotatorRole&, const AnnotatorRole&) = default;
};

/// Lower-case keyword for closed kinds ("indexer", "recherche_info", ...);
/// the free text itself for Autre.
std::string to_string(const ActionKind& action);
std::string to_string(const AnnotationContext& context);
std::string to_string(const AnnotatorRole& role);

/// Case-insensitive keyword lookup; anything else becomes Autre(text).
ActionKind parse_action(std::string_view text);
AnnotationContext parse_context(std::string_view text);
AnnotatorRole parse_role(std::string_view text);

struct AnnotationMeta {
  AnnotationContext context;
  std::string annotator_id;
  ActionKind action;
  std::string timestamp;  // ISO-8601
  std::optional<std::string> objective;

  friend bool operator==(const AnnotationMeta&, const AnnotationMeta&) = default;
};

/// Meta attached to objects read from a fact file, which carries none.
AnnotationMeta fact_file_meta();

/// Where an explicated candidate came from.
struct Provenance {
  std::string source_id;
  std::vector<std::string> support;  // sorted, deduplicated object ids

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct AnnotationObject {
  std::string id;
  std::string target;  // a document id or another annotation id
  std::vector<AVPair> pairs;
  AnnotationMeta meta;
  std::optional<Provenance> provenance;

  friend bool operator==(const AnnotationObject&, const AnnotationObject&) = default;
};

enum class DocumentTier { Primary, Secondary, Tertiary };

std::string_view to_string(DocumentTier tier) noexcept;
std::optional<DocumentTier> parse_tier(std::string_view text) noexcept;

struct DocumentRecord {
  std::string id;
  DocumentTier tier = DocumentTier::Primary;
  std::optional<std::string> content_ref;

  friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

struct AnnotatorProfile {
  std::string id;
  std::string name;
  AnnotatorRole role;

  friend bool operator==(const AnnotatorProfile&, const AnnotatorProfile&) = default;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Explicit iff every pair has an attribute and at least one value;
/// Invalid iff the list is empty or some pair has neither; Implicit otherwise.
ExplicitnessState classify(std::span<const AVPair> pairs) noexcept;
ExplicitnessState classify(const AnnotationObject& object) noexcept;

/// True for identifiers usable in fact files: [A-Za-z0-9_]+.
bool is_identifier(std::string_view id) noexcept;

/// Creates an object with a fresh id and meta.action set to `action`.
/// Throws Error(EmptyTarget), Error(InvalidPair) or Error(EmptyAnnotator).
AnnotationObject build_object(ActionKind action, std::string target, std::vector<AVPair> pairs,
                              AnnotationMeta meta);

}  // namespace annote
