#include "facadex/triplify/charset.hpp"

#include <iconv.h>

#include <cerrno>
#include <memory>

#include "facadex/error.hpp"
#include "facadex/util/strings.hpp"

namespace facadex::triplify {

namespace {

struct IconvCloser {
  void operator()(void* cd) const { iconv_close(static_cast<iconv_t>(cd)); }
};

std::string transcode(std::string_view bytes, const std::string& to, const std::string& from) {
  iconv_t raw = iconv_open(to.c_str(), from.c_str());
  if (raw == reinterpret_cast<iconv_t>(-1)) {
    throw ConfigError("unsupported charset conversion " + from + " -> " + to);
  }
  std::unique_ptr<void, IconvCloser> cd(raw);

  std::string out;
  out.resize(bytes.size() * 4 + 16);
  char* in_ptr = const_cast<char*>(bytes.data());
  std::size_t in_left = bytes.size();
  std::size_t written = 0;
  while (in_left > 0) {
    char* out_ptr = out.data() + written;
    std::size_t out_left = out.size() - written;
    std::size_t rc = iconv(raw, &in_ptr, &in_left, &out_ptr, &out_left);
    written = out.size() - out_left;
    if (rc == static_cast<std::size_t>(-1)) {
      if (errno == E2BIG) {
        out.resize(out.size() * 2);
        continue;
      }
      std::size_t offset = bytes.size() - in_left;
      throw ParseError("input is not valid " + from + " at byte " + std::to_string(offset),
                       std::nullopt, std::nullopt, offset);
    }
  }
  out.resize(written);
  return out;
}

}  // namespace

bool is_utf8_charset(std::string_view charset) {
  return util::iequals(charset, "UTF-8") || util::iequals(charset, "UTF8");
}

std::string decode_to_utf8(std::string_view bytes, std::string_view charset) {
  if (charset.empty() || is_utf8_charset(charset)) {
    std::size_t bad = util::first_invalid_utf8(bytes);
    if (bad != std::string_view::npos) {
      throw ParseError("input is not valid UTF-8 at byte " + std::to_string(bad), std::nullopt,
                       std::nullopt, bad);
    }
    return std::string(bytes);
  }
  return transcode(bytes, "UTF-8", std::string(charset));
}

std::string encode_from_utf8(std::string_view text, std::string_view charset) {
  if (charset.empty() || is_utf8_charset(charset)) return std::string(text);
  return transcode(text, std::string(charset), "UTF-8");
}

}  // namespace facadex::triplify
