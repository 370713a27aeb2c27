#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace morphseg {

// Canonical composition (NFC). All parsed input goes through this once;
// original byte sequences are not retained.
std::string nfc(std::string_view s);

// True if the string contains any Unicode whitespace scalar.
bool contains_whitespace(std::string_view s);

// Splits on runs of Unicode whitespace; no empty tokens.
std::vector<std::string> split_whitespace(std::string_view s);

// Splits on a single-character delimiter, keeping empty fields.
std::vector<std::string> split_char(std::string_view s, char delim);

}  // namespace morphseg
