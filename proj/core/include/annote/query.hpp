#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "annote/inference.hpp"
#include "annote/knowledge_base.hpp"
#include "annote/model.hpp"

namespace annote {

/// (attribute?, [term, ...]). An absent attribute marks a constrained
/// criterion that must be rewritten before evaluation.
struct Criterion {
  std::optional<AttributeName> attribute;
  std::vector<Term> values;

  bool constrained() const noexcept { return !attribute.has_value(); }

  friend bool operator==(const Criterion&, const Criterion&) = default;
};

/// Builds a criterion from raw strings, normalizing both sides.
Criterion criterion(std::optional<std::string_view> attribute, const std::vector<std::string>& terms);

/// Boolean query tree. And/Or hold at least two children, Not exactly one.
class QueryExpr {
 public:
  enum class Kind { Leaf, And, Or, Not };

  static QueryExpr leaf(Criterion criterion);
  static QueryExpr all_of(std::vector<QueryExpr> children);
  static QueryExpr any_of(std::vector<QueryExpr> children);
  static QueryExpr negate(QueryExpr child);

  Kind kind() const noexcept { return kind_; }
  bool is_leaf() const noexcept { return kind_ == Kind::Leaf; }
  const Criterion& criterion() const;
  const std::vector<QueryExpr>& children() const noexcept { return children_; }

  /// True if some leaf has no attribute.
  bool has_constrained() const;

  friend bool operator==(const QueryExpr&, const QueryExpr&) = default;

 private:
  QueryExpr(Kind kind, std::optional<Criterion> criterion, std::vector<QueryExpr> children)
      : kind_(kind), criterion_(std::move(criterion)), children_(std::move(children)) {}

  Kind kind_;
  std::optional<Criterion> criterion_;
  std::vector<QueryExpr> children_;
};

/// Parses the query language:
///
///   expr      := or_expr
///   or_expr   := and_expr { OR and_expr }
///   and_expr  := unary { AND unary }
///   unary     := NOT unary | "(" expr ")" | criterion
///   criterion := "(" [ STRING "," ] "[" STRING { "," STRING } "]" ")"
///
/// AND = ET|AND, OR = OU|OR, NOT = NON|NOT, case-insensitive. Strings are
/// double-quoted with backslash escapes for '"' and '\'. Throws SyntaxError.
QueryExpr parse_query(std::string_view text);

/// Canonical text with French keywords; composite operands are always
/// parenthesized. parse_query(print_query(e)) == e.
std::string print_query(const QueryExpr& expr);

/// Subset semantics: some pair of `object` has the criterion's attribute and
/// its value terms (ranks ignored) include every criterion term. Throws
/// Error(UnresolvedCriterion) for a constrained criterion.
bool matches(const AnnotationObject& object, const Criterion& criterion);

/// Ids of objects satisfying `expr`, ascending. Not is the complement within
/// the kb's object set. Throws Error(UnresolvedCriterion).
std::vector<std::string> eval(const KnowledgeBase& kb, const QueryExpr& expr);

struct RewriteReport {
  QueryExpr rewritten;
  std::vector<Term> unresolved_terms;
  std::map<Term, std::vector<AttributeCandidate>> per_term_candidates;
};

/// Each distinct term becomes an Or over (candidate, [term]) leaves (a bare
/// leaf for a single candidate); the resolved terms are And-ed in input
/// order. Throws Error(AllUnresolved) when no term has a candidate.
RewriteReport rewrite_constrained(const KnowledgeBase& kb, const std::vector<Term>& terms);

/// Display form that substitutes, for every leaf of `report.rewritten`, the
/// first stored value list (by object id) that contains the leaf's term,
/// ranks included. Not parseable: weighted values print as ("term", rank).
std::string stored_form(const KnowledgeBase& kb, const RewriteReport& report);

enum class UnresolvedPolicy { Strict, Lenient };

/// eval of the rewritten query. Under Strict any unresolved term empties the
/// result; under Lenient unresolved terms are dropped.
std::vector<std::string> search_constrained(const KnowledgeBase& kb, const std::vector<Term>& terms,
                                            UnresolvedPolicy policy = UnresolvedPolicy::Strict);

}  // namespace annote
