#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "annote/knowledge_base.hpp"
#include "annote/model.hpp"

namespace annote {

/// An attribute that can fill a missing-attribute pair. `support` holds the
/// ids (ascending) of objects that carry every queried term under it.
struct AttributeCandidate {
  AttributeName attribute;
  std::vector<std::string> support;

  std::size_t support_count() const noexcept { return support.size(); }

  friend bool operator==(const AttributeCandidate&, const AttributeCandidate&) = default;
};

/// A stored value list that can fill a missing-values pair.
struct ValueCandidate {
  std::vector<Value> values;
  std::vector<std::string> support;

  std::size_t support_count() const noexcept { return support.size(); }

  friend bool operator==(const ValueCandidate&, const ValueCandidate&) = default;
};

inline constexpr std::size_t kDefaultExplicateCap = 16;

/// Attributes under which some single object holds all of `terms` in its
/// explicit pairs. Ordered by support count descending, then attribute name.
/// Throws Error(InvalidArgument) if `terms` is empty.
std::vector<AttributeCandidate> infer_attributes(const KnowledgeBase& kb, const std::vector<Term>& terms);

/// Distinct value lists stored under `attribute` (ranks included), ordered
/// by support count descending, then first term, then the whole list.
std::vector<ValueCandidate> infer_values(const KnowledgeBase& kb, const AttributeName& attribute);

/// Turns an implicit object into explicit candidates. Each implicit pair is
/// substituted by its attribute candidates (missing attribute) or value
/// candidates (missing values); the cartesian product across pairs is
/// enumerated with the first pair varying slowest and cut at `cap`.
///
/// Candidates get ids "<id>_x<k>" (k from 1), keep the source meta, and
/// carry a Provenance naming the source and the union of supports.
///
/// Throws Error(NotImplicit), NoCandidatesError, or Error(InvalidArgument)
/// for cap == 0.
std::vector<AnnotationObject> explicate(const KnowledgeBase& kb, const AnnotationObject& object,
                                        std::size_t cap = kDefaultExplicateCap);

}  // namespace annote
