#include <algorithm>
#include <iterator>

#include "annote/error.hpp"
#include "annote/query.hpp"

namespace annote {
namespace {

using IdList = std::vector<std::string>;

IdList intersect(const IdList& a, const IdList& b) {
  IdList out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IdList unite(const IdList& a, const IdList& b) {
  IdList out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IdList complement(const KnowledgeBase& kb, const IdList& ids) {
  IdList out;
  auto it = ids.begin();
  for (const auto& [id, _] : kb.objects()) {
    while (it != ids.end() && *it < id) ++it;
    if (it != ids.end() && *it == id) continue;
    out.push_back(id);
  }
  return out;
}

void require_resolved(const Criterion& criterion) {
  if (criterion.constrained()) {
    throw Error(ErrorCode::UnresolvedCriterion, "criterion without attribute must be rewritten first");
  }
}

IdList eval_leaf(const KnowledgeBase& kb, const Criterion& criterion) {
  // Postings narrow by (attribute, term); the per-object check then enforces
  // that one pair holds all terms.
  IdList ids = kb.postings(criterion.values.front(), *criterion.attribute);
  for (std::size_t i = 1; i < criterion.values.size() && !ids.empty(); ++i) {
    ids = intersect(ids, kb.postings(criterion.values[i], *criterion.attribute));
  }
  if (criterion.values.size() > 1) {
    std::erase_if(ids, [&](const std::string& id) { return !matches(*kb.find(id), criterion); });
  }
  return ids;
}

IdList eval_node(const KnowledgeBase& kb, const QueryExpr& expr) {
  switch (expr.kind()) {
    case QueryExpr::Kind::Leaf:
      return eval_leaf(kb, expr.criterion());
    case QueryExpr::Kind::And: {
      IdList acc = eval_node(kb, expr.children().front());
      for (std::size_t i = 1; i < expr.children().size() && !acc.empty(); ++i) {
        acc = intersect(acc, eval_node(kb, expr.children()[i]));
      }
      return acc;
    }
    case QueryExpr::Kind::Or: {
      IdList acc;
      for (const auto& child : expr.children()) acc = unite(acc, eval_node(kb, child));
      return acc;
    }
    case QueryExpr::Kind::Not:
      return complement(kb, eval_node(kb, expr.children().front()));
  }
  return {};
}

void check_resolved(const QueryExpr& expr) {
  if (expr.is_leaf()) {
    require_resolved(expr.criterion());
    return;
  }
  for (const auto& child : expr.children()) check_resolved(child);
}

}  // namespace

bool matches(const AnnotationObject& object, const Criterion& criterion) {
  require_resolved(criterion);
  return std::any_of(object.pairs.begin(), object.pairs.end(), [&](const AVPair& pair) {
    return pair.attribute == criterion.attribute &&
           std::all_of(criterion.values.begin(), criterion.values.end(),
                       [&](const Term& t) { return pair.contains(t); });
  });
}

std::vector<std::string> eval(const KnowledgeBase& kb, const QueryExpr& expr) {
  // Validate up front so an And short-circuit cannot hide an unresolved leaf.
  check_resolved(expr);
  return eval_node(kb, expr);
}

}  // namespace annote
