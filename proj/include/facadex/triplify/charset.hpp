#pragma once

#include <string>
#include <string_view>

namespace facadex::triplify {

// Transcodes `bytes` from `charset` to UTF-8. Throws ConfigError for an
// unknown charset and ParseError (with byte offset) for undecodable input.
std::string decode_to_utf8(std::string_view bytes, std::string_view charset);

// Inverse of decode_to_utf8.
std::string encode_from_utf8(std::string_view text, std::string_view charset);

bool is_utf8_charset(std::string_view charset);

}  // namespace facadex::triplify
