#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace facadex::util {

// Appends the UTF-8 encoding of `cp` to `out`.
void append_utf8(std::string& out, char32_t cp);

// Decodes UTF-8 into code points. Invalid sequences decode as U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// True when `s` is well-formed UTF-8.
bool valid_utf8(std::string_view s);
// Offset of the first byte that starts an invalid sequence, or npos.
std::size_t first_invalid_utf8(std::string_view s);

std::size_t utf8_length(std::string_view s);

std::string to_lower_ascii(std::string_view s);
std::string to_upper_ascii(std::string_view s);
std::string_view trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

std::vector<std::string> split(std::string_view s, char sep);

}  // namespace facadex::util
