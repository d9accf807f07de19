#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "annote/error.hpp"
#include "annote/model.hpp"

namespace annote {
namespace {

bool valid_utf8(std::string_view raw) {
  const auto* s = reinterpret_cast<const uint8_t*>(raw.data());
  const auto length = static_cast<int32_t>(raw.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

// NFC -> full case fold -> NFC. Folding can produce sequences that are no
// longer composed, hence the second pass.
icu::UnicodeString fold(std::string_view raw) {
  if (!valid_utf8(raw)) {
    throw Error(ErrorCode::InvalidEncoding, "input is not valid UTF-8");
  }
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::InvalidEncoding, "ICU NFC normalizer unavailable");
  }
  auto text = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  text = nfc->normalize(text, status);
  text.foldCase();
  text = nfc->normalize(text, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::InvalidEncoding, "normalization failed");
  }
  return text;
}

icu::UnicodeString trim(const icu::UnicodeString& text) {
  int32_t begin = 0;
  int32_t end = text.length();
  while (begin < end && u_isUWhiteSpace(text.char32At(begin))) {
    begin = text.moveIndex32(begin, 1);
  }
  while (end > begin) {
    const int32_t prev = text.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(text.char32At(prev))) break;
    end = prev;
  }
  return icu::UnicodeString(text, begin, end - begin);
}

bool is_hyphen(UChar32 c) {
  return c == u'-' || u_hasBinaryProperty(c, UCHAR_DASH);
}

std::string to_utf8(const icu::UnicodeString& text) {
  std::string out;
  text.toUTF8String(out);
  return out;
}

}  // namespace

Term normalize_term(std::string_view raw) {
  auto text = trim(fold(raw));
  if (text.isEmpty()) {
    throw Error(ErrorCode::EmptyTerm, "term is empty after normalization");
  }
  return Term(to_utf8(text));
}

AttributeName normalize_attribute(std::string_view raw) {
  const auto text = trim(fold(raw));
  icu::UnicodeString collapsed;
  bool in_run = false;
  for (int32_t i = 0; i < text.length(); i = text.moveIndex32(i, 1)) {
    const UChar32 c = text.char32At(i);
    if (u_isUWhiteSpace(c) || is_hyphen(c)) {
      in_run = true;
      continue;
    }
    if (in_run) {
      collapsed.append(static_cast<UChar>(u'-'));
      in_run = false;
    }
    collapsed.append(c);
  }
  // Leading and trailing hyphen runs survive as a single '-'.
  if (in_run) collapsed.append(static_cast<UChar>(u'-'));
  if (collapsed.isEmpty()) {
    throw Error(ErrorCode::EmptyAttribute, "attribute is empty after normalization");
  }
  return AttributeName(to_utf8(collapsed));
}

}  // namespace annote
