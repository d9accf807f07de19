#include "annote/model.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>

#include "annote/error.hpp"

namespace annote {
namespace {

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename Kind, std::size_t N>
struct Vocabulary {
  std::array<std::pair<Kind, std::string_view>, N> entries;

  std::string_view name(Kind kind) const {
    for (const auto& [k, n] : entries) {
      if (k == kind) return n;
    }
    return {};
  }

  std::optional<Kind> lookup(std::string_view text) const {
    const auto lowered = ascii_lower(text);
    for (const auto& [k, n] : entries) {
      if (n == lowered) return k;
    }
    return std::nullopt;
  }
};

using AK = ActionKind::Kind;
constexpr Vocabulary<AK, 6> kActions{{{
    {AK::Partager, "partager"},
    {AK::Inclure, "inclure"},
    {AK::Filtrer, "filtrer"},
    {AK::Indexer, "indexer"},
    {AK::Faciliter, "faciliter"},
    {AK::Attacher, "attacher"},
}}};

using CK = AnnotationContext::Kind;
constexpr Vocabulary<CK, 4> kContexts{{{
    {CK::Requete, "requete"},
    {CK::RechercheInfo, "recherche_info"},
    {CK::Interpretation, "interpretation"},
    {CK::Proposition, "proposition"},
}}};

using RK = AnnotatorRole::Kind;
constexpr Vocabulary<RK, 3> kRoles{{{
    {RK::Veilleur, "veilleur"},
    {RK::Analyste, "analyste"},
    {RK::Decideur, "decideur"},
}}};

void require_text(const std::string& text, std::string_view what) {
  if (text.empty()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": Autre requires non-empty text");
  }
}

std::string fresh_id() {
  static std::atomic<std::uint64_t> counter{0};
  thread_local std::mt19937_64 rng{std::random_device{}()};
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "ann_%012llx_%llu",
                static_cast<unsigned long long>(rng() & 0xffffffffffffULL),
                static_cast<unsigned long long>(counter.fetch_add(1)));
  return buffer;
}

}  // namespace

Value plain(std::string_view term) { return Value{normalize_term(term), std::nullopt}; }

Value weighted(std::string_view term, std::int64_t rank) { return Value{normalize_term(term), rank}; }

bool AVPair::contains(const Term& term) const noexcept {
  return std::any_of(values.begin(), values.end(), [&](const Value& v) { return v.term == term; });
}

AVPair av_pair(std::optional<std::string_view> attribute, const std::vector<std::string>& terms) {
  AVPair pair;
  if (attribute) pair.attribute = normalize_attribute(*attribute);
  pair.values.reserve(terms.size());
  for (const auto& t : terms) pair.values.push_back(plain(t));
  return pair;
}

std::string_view to_string(ExplicitnessState state) noexcept {
  switch (state) {
    case ExplicitnessState::Explicit: return "Explicit";
    case ExplicitnessState::Implicit: return "Implicit";
    case ExplicitnessState::Invalid: return "Invalid";
  }
  return "Invalid";
}

ActionKind ActionKind::autre(std::string text) {
  require_text(text, "ActionKind");
  ActionKind a(Kind::Autre);
  a.other = std::move(text);
  return a;
}

AnnotationContext AnnotationContext::autre(std::string text) {
  require_text(text, "AnnotationContext");
  AnnotationContext c(Kind::Autre);
  c.other = std::move(text);
  return c;
}

AnnotatorRole AnnotatorRole::autre(std::string text) {
  require_text(text, "AnnotatorRole");
  AnnotatorRole r(Kind::Autre);
  r.other = std::move(text);
  return r;
}

std::string to_string(const ActionKind& action) {
  return action.kind == AK::Autre ? action.other : std::string(kActions.name(action.kind));
}

std::string to_string(const AnnotationContext& context) {
  return context.kind == CK::Autre ? context.other : std::string(kContexts.name(context.kind));
}

std::string to_string(const AnnotatorRole& role) {
  return role.kind == RK::Autre ? role.other : std::string(kRoles.name(role.kind));
}

ActionKind parse_action(std::string_view text) {
  if (auto k = kActions.lookup(text)) return ActionKind(*k);
  return ActionKind::autre(std::string(text));
}

AnnotationContext parse_context(std::string_view text) {
  if (auto k = kContexts.lookup(text)) return AnnotationContext(*k);
  return AnnotationContext::autre(std::string(text));
}

AnnotatorRole parse_role(std::string_view text) {
  if (auto k = kRoles.lookup(text)) return AnnotatorRole(*k);
  return AnnotatorRole::autre(std::string(text));
}

AnnotationMeta fact_file_meta() {
  AnnotationMeta meta;
  meta.context = AnnotationContext::autre("fact-file");
  meta.annotator_id = "unknown";
  meta.action = ActionKind::autre("assert");
  return meta;
}

std::string_view to_string(DocumentTier tier) noexcept {
  switch (tier) {
    case DocumentTier::Primary: return "primary";
    case DocumentTier::Secondary: return "secondary";
    case DocumentTier::Tertiary: return "tertiary";
  }
  return "primary";
}

std::optional<DocumentTier> parse_tier(std::string_view text) noexcept {
  if (text == "primary") return DocumentTier::Primary;
  if (text == "secondary") return DocumentTier::Secondary;
  if (text == "tertiary") return DocumentTier::Tertiary;
  return std::nullopt;
}

ExplicitnessState classify(std::span<const AVPair> pairs) noexcept {
  if (pairs.empty()) return ExplicitnessState::Invalid;
  bool all_explicit = true;
  for (const auto& pair : pairs) {
    if (!pair.is_valid()) return ExplicitnessState::Invalid;
    all_explicit = all_explicit && pair.is_explicit();
  }
  return all_explicit ? ExplicitnessState::Explicit : ExplicitnessState::Implicit;
}

ExplicitnessState classify(const AnnotationObject& object) noexcept { return classify(object.pairs); }

bool is_identifier(std::string_view id) noexcept {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

AnnotationObject build_object(ActionKind action, std::string target, std::vector<AVPair> pairs,
                              AnnotationMeta meta) {
  if (target.empty()) throw Error(ErrorCode::EmptyTarget, "annotation target is empty");
  if (pairs.empty()) throw Error(ErrorCode::InvalidPair, "annotation has no (A, V) pair");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!pairs[i].is_valid()) {
      throw Error(ErrorCode::InvalidPair,
                  "pair " + std::to_string(i) + " has neither attribute nor values");
    }
  }
  if (meta.annotator_id.empty()) throw Error(ErrorCode::EmptyAnnotator, "annotator id is empty");
  if (meta.timestamp.empty()) {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    meta.timestamp = buffer;
  }
  meta.action = std::move(action);

  AnnotationObject object;
  object.id = fresh_id();
  object.target = std::move(target);
  object.pairs = std::move(pairs);
  object.meta = std::move(meta);
  return object;
}

}  // namespace annote
