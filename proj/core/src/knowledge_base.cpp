#include "annote/knowledge_base.hpp"

#include <algorithm>

#include "annote/error.hpp"

namespace annote {

void KnowledgeBase::insert(AnnotationObject object) {
  if (object.target.empty()) throw Error(ErrorCode::EmptyTarget, "annotation target is empty");
  if (!is_identifier(object.id)) {
    throw Error(ErrorCode::InvalidIdentifier, "invalid object id '" + object.id + "'");
  }
  if (!is_identifier(object.target)) {
    throw Error(ErrorCode::InvalidIdentifier, "invalid target id '" + object.target + "'");
  }
  if (classify(object) == ExplicitnessState::Invalid) {
    throw Error(ErrorCode::InvalidObject, "object '" + object.id + "' classifies Invalid");
  }
  if (contains_object(object.id)) {
    throw Error(ErrorCode::DuplicateId, "duplicate object id '" + object.id + "'");
  }
  // Existing chains are acyclic, so this walk terminates; it reaches the new
  // id only if the insert would close a loop.
  for (std::string_view cursor = object.target;;) {
    if (cursor == object.id) {
      throw Error(ErrorCode::CyclicTarget, "object '" + object.id + "' would close a target cycle");
    }
    const auto* next = find(cursor);
    if (next == nullptr) break;
    cursor = next->target;
  }

  if (!contains_object(object.target) && !contains_document(object.target)) {
    documents_.emplace(object.target, DocumentRecord{object.target, DocumentTier::Primary, std::nullopt});
  }
  auto& self = documents_[object.id];
  self.id = object.id;
  self.tier = DocumentTier::Tertiary;

  for (const auto& pair : object.pairs) {
    if (!pair.is_explicit()) continue;
    by_attribute_[*pair.attribute].insert(object.id);
    for (const auto& value : pair.values) {
      by_term_[value.term].emplace(*pair.attribute, object.id);
    }
  }
  by_target_[object.target].insert(object.id);
  sequence_.emplace(object.id, next_sequence_++);
  const std::string id = object.id;
  objects_.emplace(id, std::move(object));
}

void KnowledgeBase::register_document(DocumentRecord record) {
  if (!is_identifier(record.id)) {
    throw Error(ErrorCode::InvalidIdentifier, "invalid document id '" + record.id + "'");
  }
  const bool annotation = contains_object(record.id);
  if (annotation && record.tier != DocumentTier::Tertiary) {
    throw Error(ErrorCode::InvalidDocument, "'" + record.id + "' is an annotation and must be tertiary");
  }
  if (!annotation && record.tier == DocumentTier::Tertiary) {
    throw Error(ErrorCode::InvalidDocument, "tertiary document '" + record.id + "' has no annotation");
  }
  documents_[record.id] = std::move(record);
}

void KnowledgeBase::register_annotator(AnnotatorProfile profile) {
  if (profile.id.empty()) throw Error(ErrorCode::EmptyAnnotator, "annotator id is empty");
  if (!is_identifier(profile.id)) {
    throw Error(ErrorCode::InvalidIdentifier, "invalid annotator id '" + profile.id + "'");
  }
  annotators_[profile.id] = std::move(profile);
}

const AnnotationObject* KnowledgeBase::find(std::string_view id) const {
  auto it = objects_.find(id);
  return it == objects_.end() ? nullptr : &it->second;
}

std::vector<std::string> KnowledgeBase::object_ids() const {
  std::vector<std::string> ids;
  ids.reserve(objects_.size());
  for (const auto& [id, _] : objects_) ids.push_back(id);
  return ids;
}

std::vector<const AnnotationObject*> KnowledgeBase::annotating(std::string_view target) const {
  std::vector<const AnnotationObject*> out;
  auto it = by_target_.find(target);
  if (it == by_target_.end()) return out;
  for (const auto& id : it->second) out.push_back(find(id));
  std::sort(out.begin(), out.end(), [this](const AnnotationObject* a, const AnnotationObject* b) {
    return sequence_.find(a->id)->second < sequence_.find(b->id)->second;
  });
  return out;
}

std::vector<std::string> KnowledgeBase::postings(const Term& term, const AttributeName& attribute) const {
  std::vector<std::string> out;
  auto it = by_term_.find(term);
  if (it == by_term_.end()) return out;
  const auto& entries = it->second;
  for (auto e = entries.lower_bound(TermPosting{attribute, std::string()});
       e != entries.end() && e->first == attribute; ++e) {
    out.push_back(e->second);
  }
  return out;
}

KnowledgeBase insert_object(KnowledgeBase kb, AnnotationObject object) {
  kb.insert(std::move(object));
  return kb;
}

std::vector<AttributeName> attributes_of(const KnowledgeBase& kb, std::string_view target) {
  std::vector<AttributeName> out;
  for (const auto* object : kb.annotating(target)) {
    for (const auto& pair : object->pairs) {
      if (pair.is_explicit()) out.push_back(*pair.attribute);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<Value>> value_lists_of(const KnowledgeBase& kb, std::string_view target) {
  std::vector<std::vector<Value>> out;
  for (const auto* object : kb.annotating(target)) {
    for (const auto& pair : object->pairs) {
      if (pair.is_explicit()) out.push_back(pair.values);
    }
  }
  return out;
}

std::vector<std::string> trace_chain(const KnowledgeBase& kb, std::string_view id) {
  if (!kb.contains_object(id) && !kb.contains_document(id)) {
    throw Error(ErrorCode::UnknownId, "unknown id '" + std::string(id) + "'");
  }
  std::vector<std::string> chain{std::string(id)};
  for (const auto* object = kb.find(id); object != nullptr; object = kb.find(object->target)) {
    chain.push_back(object->target);
  }
  return chain;
}

}  // namespace annote
