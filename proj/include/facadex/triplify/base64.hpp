#pragma once

#include <string>
#include <string_view>

namespace facadex::triplify {

// RFC 4648 section 4 alphabet, '=' padding, no line breaks.
std::string base64_encode(std::string_view bytes);

}  // namespace facadex::triplify
