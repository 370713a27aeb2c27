#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace morphseg {

// Decodes UTF-8 into Unicode scalar values. Throws FormatError on
// malformed sequences, reporting the byte offset.
std::u32string utf8_decode(std::string_view s);

std::string utf8_encode(std::u32string_view s);
std::string utf8_encode(char32_t cp);

// Number of Unicode scalar values in a valid UTF-8 string.
std::size_t utf8_length(std::string_view s);

}  // namespace morphseg
