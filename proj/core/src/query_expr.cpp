#include <algorithm>

#include "annote/error.hpp"
#include "annote/query.hpp"

namespace annote {

Criterion criterion(std::optional<std::string_view> attribute, const std::vector<std::string>& terms) {
  Criterion c;
  if (attribute) c.attribute = normalize_attribute(*attribute);
  c.values.reserve(terms.size());
  for (const auto& t : terms) c.values.push_back(normalize_term(t));
  return c;
}

QueryExpr QueryExpr::leaf(Criterion criterion) {
  if (criterion.values.empty()) {
    throw Error(ErrorCode::InvalidArgument, "criterion needs at least one value");
  }
  return QueryExpr(Kind::Leaf, std::move(criterion), {});
}

QueryExpr QueryExpr::all_of(std::vector<QueryExpr> children) {
  if (children.size() < 2) throw Error(ErrorCode::InvalidArgument, "And needs at least two operands");
  return QueryExpr(Kind::And, std::nullopt, std::move(children));
}

QueryExpr QueryExpr::any_of(std::vector<QueryExpr> children) {
  if (children.size() < 2) throw Error(ErrorCode::InvalidArgument, "Or needs at least two operands");
  return QueryExpr(Kind::Or, std::nullopt, std::move(children));
}

QueryExpr QueryExpr::negate(QueryExpr child) {
  std::vector<QueryExpr> children;
  children.push_back(std::move(child));
  return QueryExpr(Kind::Not, std::nullopt, std::move(children));
}

const Criterion& QueryExpr::criterion() const {
  if (!criterion_) throw Error(ErrorCode::InvalidArgument, "not a leaf");
  return *criterion_;
}

bool QueryExpr::has_constrained() const {
  if (is_leaf()) return criterion_->constrained();
  return std::any_of(children_.begin(), children_.end(), [](const QueryExpr& c) { return c.has_constrained(); });
}

}  // namespace annote
