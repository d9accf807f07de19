#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "annote/model.hpp"

namespace annote {

/// The indexed fact base: annotation objects, the document and annotator
/// registries, and three inverted indexes kept coherent on every insert.
///
/// Only explicit pairs (attribute present, at least one value) feed the
/// attribute and term indexes; those are the facts inference and retrieval
/// reason over. Every annotation id is also registered as a Tertiary
/// document so it can be the target of further annotations.
///
/// A KnowledgeBase is a value: copies are independent snapshots. Mutation
/// goes through insert() on a single writer.
class KnowledgeBase {
 public:
  using ObjectMap = std::map<std::string, AnnotationObject, std::less<>>;
  using DocumentMap = std::map<std::string, DocumentRecord, std::less<>>;
  using AnnotatorMap = std::map<std::string, AnnotatorProfile, std::less<>>;
  using TermPosting = std::pair<AttributeName, std::string>;
  using AttributeIndex = std::map<AttributeName, std::set<std::string>>;
  using TermIndex = std::map<Term, std::set<TermPosting>>;
  using TargetIndex = std::map<std::string, std::set<std::string>, std::less<>>;

  /// Throws Error with DuplicateId, CyclicTarget, InvalidObject,
  /// InvalidIdentifier or EmptyTarget. The kb is unchanged on throw.
  void insert(AnnotationObject object);

  /// Throws Error(InvalidDocument) when the tier contradicts the object set
  /// (Tertiary without an annotation of that id, or a non-Tertiary record
  /// for an annotation id), Error(InvalidIdentifier) on a bad id.
  void register_document(DocumentRecord record);
  void register_annotator(AnnotatorProfile profile);

  const AnnotationObject* find(std::string_view id) const;
  bool contains_object(std::string_view id) const { return objects_.find(id) != objects_.end(); }
  bool contains_document(std::string_view id) const { return documents_.find(id) != documents_.end(); }

  const ObjectMap& objects() const noexcept { return objects_; }
  const DocumentMap& documents() const noexcept { return documents_; }
  const AnnotatorMap& annotators() const noexcept { return annotators_; }
  const AttributeIndex& by_attribute() const noexcept { return by_attribute_; }
  const TermIndex& by_term() const noexcept { return by_term_; }
  const TargetIndex& by_target() const noexcept { return by_target_; }

  std::size_t size() const noexcept { return objects_.size(); }
  bool empty() const noexcept { return objects_.empty(); }

  /// All object ids, ascending.
  std::vector<std::string> object_ids() const;

  /// Objects annotating `target`, in insertion order.
  std::vector<const AnnotationObject*> annotating(std::string_view target) const;

  /// Ids of objects with an explicit pair under `attribute` containing `term`.
  std::vector<std::string> postings(const Term& term, const AttributeName& attribute) const;

 private:
  ObjectMap objects_;
  DocumentMap documents_;
  AnnotatorMap annotators_;
  AttributeIndex by_attribute_;
  TermIndex by_term_;
  TargetIndex by_target_;
  std::map<std::string, std::uint64_t, std::less<>> sequence_;
  std::uint64_t next_sequence_ = 0;
};

/// Functional form of KnowledgeBase::insert: returns a new snapshot.
KnowledgeBase insert_object(KnowledgeBase kb, AnnotationObject object);

/// Attributes of explicit pairs of objects annotating `target`, deduplicated
/// and sorted. Empty for an unknown target.
std::vector<AttributeName> attributes_of(const KnowledgeBase& kb, std::string_view target);

/// Value lists of explicit pairs of objects annotating `target`, objects in
/// insertion order and pairs in stored order.
std::vector<std::vector<Value>> value_lists_of(const KnowledgeBase& kb, std::string_view target);

/// The target chain from `id` down to the first non-annotation id,
/// inclusive. Throws Error(UnknownId) if `id` is neither object nor document.
std::vector<std::string> trace_chain(const KnowledgeBase& kb, std::string_view id);

}  // namespace annote
