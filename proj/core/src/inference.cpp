#include "annote/inference.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <set>

#include "annote/error.hpp"

namespace annote {
namespace {

std::vector<std::string> intersect(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// attribute -> ascending ids of objects holding `term` under it.
std::map<AttributeName, std::vector<std::string>> holders(const KnowledgeBase& kb, const Term& term) {
  std::map<AttributeName, std::vector<std::string>> out;
  auto it = kb.by_term().find(term);
  if (it == kb.by_term().end()) return out;
  for (const auto& [attribute, id] : it->second) out[attribute].push_back(id);
  return out;
}

struct PairOption {
  AVPair pair;
  std::vector<std::string> support;
};

}  // namespace

std::vector<AttributeCandidate> infer_attributes(const KnowledgeBase& kb, const std::vector<Term>& terms) {
  if (terms.empty()) throw Error(ErrorCode::InvalidArgument, "infer_attributes needs at least one term");

  auto acc = holders(kb, terms.front());
  for (std::size_t i = 1; i < terms.size() && !acc.empty(); ++i) {
    const auto next = holders(kb, terms[i]);
    for (auto it = acc.begin(); it != acc.end();) {
      auto other = next.find(it->first);
      if (other != next.end()) it->second = intersect(it->second, other->second);
      if (other == next.end() || it->second.empty()) {
        it = acc.erase(it);
      } else {
        ++it;
      }
    }
  }

  std::vector<AttributeCandidate> out;
  out.reserve(acc.size());
  for (auto& [attribute, support] : acc) out.push_back({attribute, std::move(support)});
  std::stable_sort(out.begin(), out.end(), [](const AttributeCandidate& a, const AttributeCandidate& b) {
    return a.support_count() > b.support_count();
  });
  return out;
}

std::vector<ValueCandidate> infer_values(const KnowledgeBase& kb, const AttributeName& attribute) {
  auto it = kb.by_attribute().find(attribute);
  if (it == kb.by_attribute().end()) return {};

  std::map<std::vector<Value>, std::set<std::string>> lists;
  for (const auto& id : it->second) {
    for (const auto& pair : kb.find(id)->pairs) {
      if (pair.is_explicit() && *pair.attribute == attribute) lists[pair.values].insert(id);
    }
  }

  std::vector<ValueCandidate> out;
  out.reserve(lists.size());
  for (auto& [values, ids] : lists) out.push_back({values, {ids.begin(), ids.end()}});
  // Map order is already (first term, ..., whole list) ascending.
  std::stable_sort(out.begin(), out.end(), [](const ValueCandidate& a, const ValueCandidate& b) {
    return a.support_count() > b.support_count();
  });
  return out;
}

std::vector<AnnotationObject> explicate(const KnowledgeBase& kb, const AnnotationObject& object, std::size_t cap) {
  if (cap == 0) throw Error(ErrorCode::InvalidArgument, "explicate cap must be positive");
  if (classify(object) != ExplicitnessState::Implicit) {
    throw Error(ErrorCode::NotImplicit, "object '" + object.id + "' is not implicit");
  }

  std::vector<std::vector<PairOption>> options(object.pairs.size());
  for (std::size_t i = 0; i < object.pairs.size(); ++i) {
    const auto& pair = object.pairs[i];
    auto& slot = options[i];
    if (pair.is_explicit()) {
      slot.push_back({pair, {}});
    } else if (!pair.has_attribute()) {
      std::vector<Term> terms;
      terms.reserve(pair.values.size());
      for (const auto& v : pair.values) terms.push_back(v.term);
      for (auto& c : infer_attributes(kb, terms)) {
        slot.push_back({AVPair{c.attribute, pair.values}, std::move(c.support)});
      }
    } else {
      for (auto& c : infer_values(kb, *pair.attribute)) {
        slot.push_back({AVPair{pair.attribute, std::move(c.values)}, std::move(c.support)});
      }
    }
    if (slot.empty()) throw NoCandidatesError(i);
  }

  std::vector<AnnotationObject> out;
  std::vector<std::size_t> odometer(options.size(), 0);
  while (out.size() < cap) {
    AnnotationObject candidate;
    candidate.id = object.id + "_x" + std::to_string(out.size() + 1);
    candidate.target = object.target;
    candidate.meta = object.meta;
    std::set<std::string> support;
    for (std::size_t i = 0; i < options.size(); ++i) {
      const auto& option = options[i][odometer[i]];
      candidate.pairs.push_back(option.pair);
      support.insert(option.support.begin(), option.support.end());
    }
    candidate.provenance = Provenance{object.id, {support.begin(), support.end()}};
    out.push_back(std::move(candidate));

    // Advance, last pair fastest.
    std::size_t digit = options.size();
    while (digit > 0) {
      --digit;
      if (++odometer[digit] < options[digit].size()) break;
      odometer[digit] = 0;
      if (digit == 0) return out;
    }
  }
  return out;
}

}  // namespace annote
