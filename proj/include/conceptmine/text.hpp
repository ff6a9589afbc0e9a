#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace conceptmine {

// NFC-normalizes, trims, and collapses internal whitespace runs to one ASCII
// space. This is the canonical form used for grouping and comparing strings.
std::string normalize_text(std::string_view raw);

std::string trim(std::string_view s);
std::string ascii_lower(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);
std::vector<std::string> split(std::string_view s, std::string_view delim);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_ascii_word_char(char c);

// True when text[pos, pos+len) does not cut an ASCII word in half. Bytes of
// multi-byte UTF-8 sequences never count as word characters, so scripts
// written without spaces match at any position.
bool on_word_boundary(std::string_view text, std::size_t pos, std::size_t len);

}  // namespace conceptmine
