#include "morphseg/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "morphseg/error.hpp"
#include "morphseg/utf8.hpp"

namespace morphseg {

namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error("ICU NFC normalizer unavailable");
  }
  return *n;
}

bool is_unicode_space(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

}  // namespace

std::string nfc(std::string_view s) {
  // Validate early so byte offsets refer to the caller's input.
  utf8_decode(s);
  const icu::Normalizer2& norm = nfc_instance();
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  UErrorCode status = U_ZERO_ERROR;
  if (norm.isNormalized(u, status) && U_SUCCESS(status)) {
    return std::string(s);
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString out = norm.normalize(u, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string result;
  out.toUTF8String(result);
  return result;
}

bool contains_whitespace(std::string_view s) {
  for (char32_t cp : utf8_decode(s)) {
    if (is_unicode_space(cp)) return true;
  }
  return false;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> tokens;
  std::u32string cps = utf8_decode(s);
  std::u32string cur;
  for (char32_t cp : cps) {
    if (is_unicode_space(cp)) {
      if (!cur.empty()) {
        tokens.push_back(utf8_encode(cur));
        cur.clear();
      }
    } else {
      cur.push_back(cp);
    }
  }
  if (!cur.empty()) tokens.push_back(utf8_encode(cur));
  return tokens;
}

std::vector<std::string> split_char(std::string_view s, char delim) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == delim) {
      fields.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

}  // namespace morphseg
