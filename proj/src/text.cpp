#include "conceptmine/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <cctype>
#include <stdexcept>

namespace conceptmine {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string nfc(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  icu::UnicodeString input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  // Fast path avoids a copy for the common already-normalized case.
  if (normalizer->isNormalized(input, status) && U_SUCCESS(status)) {
    return std::string(raw);
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString out = normalizer->normalize(input, status);
  if (U_FAILURE(status)) {
    return std::string(raw);
  }
  std::string result;
  out.toUTF8String(result);
  return result;
}

}  // namespace

std::string normalize_text(std::string_view raw) {
  std::string normalized = nfc(raw);
  std::string out;
  out.reserve(normalized.size());
  bool pending_space = false;
  for (char c : normalized) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char delim) {
  return split(s, std::string_view(&delim, 1));
}

std::vector<std::string> split(std::string_view s, std::string_view delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + delim.size();
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

bool is_ascii_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && (std::isalnum(u) || c == '-' || c == '_' || c == '\'');
}

bool on_word_boundary(std::string_view text, std::size_t pos, std::size_t len) {
  if (len == 0 || pos + len > text.size()) return false;
  if (pos > 0 && is_ascii_word_char(text[pos - 1]) && is_ascii_word_char(text[pos])) {
    return false;
  }
  std::size_t end = pos + len;
  if (end < text.size() && is_ascii_word_char(text[end - 1]) &&
      is_ascii_word_char(text[end])) {
    return false;
  }
  return true;
}

}  // namespace conceptmine
