#include <algorithm>

#include "annote/error.hpp"
#include "annote/query.hpp"

namespace annote {
namespace {

void append_quoted(std::string& out, std::string_view text) {
  out.push_back('"');
  for (const char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

const std::vector<Value>* stored_list(const KnowledgeBase& kb, const AttributeName& attribute, const Term& term) {
  const auto ids = kb.postings(term, attribute);
  if (ids.empty()) return nullptr;
  for (const auto& pair : kb.find(ids.front())->pairs) {
    if (pair.is_explicit() && *pair.attribute == attribute && pair.contains(term)) return &pair.values;
  }
  return nullptr;
}

void stored_leaf(std::string& out, const KnowledgeBase& kb, const Criterion& c) {
  out.push_back('(');
  append_quoted(out, c.attribute->text());
  out += ", [";
  const auto* stored = c.values.size() == 1 ? stored_list(kb, *c.attribute, c.values.front()) : nullptr;
  if (stored != nullptr) {
    for (std::size_t i = 0; i < stored->size(); ++i) {
      if (i > 0) out += ", ";
      const auto& v = (*stored)[i];
      if (v.rank) {
        out.push_back('(');
        append_quoted(out, v.term.text());
        out += ", " + std::to_string(*v.rank) + ")";
      } else {
        append_quoted(out, v.term.text());
      }
    }
  } else {
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      if (i > 0) out += ", ";
      append_quoted(out, c.values[i].text());
    }
  }
  out += "])";
}

void stored_into(std::string& out, const KnowledgeBase& kb, const QueryExpr& expr) {
  switch (expr.kind()) {
    case QueryExpr::Kind::Leaf:
      stored_leaf(out, kb, expr.criterion());
      return;
    case QueryExpr::Kind::And:
    case QueryExpr::Kind::Or: {
      const std::string_view op = expr.kind() == QueryExpr::Kind::And ? " ET " : " OU ";
      for (std::size_t i = 0; i < expr.children().size(); ++i) {
        if (i > 0) out += op;
        const auto& child = expr.children()[i];
        if (!child.is_leaf()) out.push_back('(');
        stored_into(out, kb, child);
        if (!child.is_leaf()) out.push_back(')');
      }
      return;
    }
    case QueryExpr::Kind::Not:
      out += "NON (";
      stored_into(out, kb, expr.children().front());
      out.push_back(')');
      return;
  }
}

}  // namespace

RewriteReport rewrite_constrained(const KnowledgeBase& kb, const std::vector<Term>& terms) {
  if (terms.empty()) throw Error(ErrorCode::InvalidArgument, "constrained search needs at least one term");

  std::vector<Term> distinct;
  for (const auto& t : terms) {
    if (std::find(distinct.begin(), distinct.end(), t) == distinct.end()) distinct.push_back(t);
  }

  std::vector<QueryExpr> conjuncts;
  std::vector<Term> unresolved;
  std::map<Term, std::vector<AttributeCandidate>> per_term;
  for (const auto& term : distinct) {
    auto candidates = infer_attributes(kb, {term});
    if (candidates.empty()) {
      unresolved.push_back(term);
    } else {
      std::vector<QueryExpr> leaves;
      for (const auto& c : candidates) leaves.push_back(QueryExpr::leaf(Criterion{c.attribute, {term}}));
      conjuncts.push_back(leaves.size() == 1 ? std::move(leaves.front()) : QueryExpr::any_of(std::move(leaves)));
    }
    per_term.emplace(term, std::move(candidates));
  }

  if (conjuncts.empty()) {
    std::string names;
    for (const auto& t : unresolved) names += (names.empty() ? "" : ", ") + t.text();
    throw Error(ErrorCode::AllUnresolved, "no attribute can be inferred for: " + names);
  }
  auto rewritten = conjuncts.size() == 1 ? std::move(conjuncts.front()) : QueryExpr::all_of(std::move(conjuncts));
  return RewriteReport{std::move(rewritten), std::move(unresolved), std::move(per_term)};
}

std::string stored_form(const KnowledgeBase& kb, const RewriteReport& report) {
  std::string out;
  stored_into(out, kb, report.rewritten);
  return out;
}

std::vector<std::string> search_constrained(const KnowledgeBase& kb, const std::vector<Term>& terms,
                                            UnresolvedPolicy policy) {
  const auto report = rewrite_constrained(kb, terms);
  if (policy == UnresolvedPolicy::Strict && !report.unresolved_terms.empty()) return {};
  return eval(kb, report.rewritten);
}

}  // namespace annote
