#include <regex>

#include "facadex/error.hpp"
#include "facadex/triplify/charset.hpp"
#include "facadex/triplify/triplifiers.hpp"

namespace facadex::triplify {

facade::FacadeTree triplify_text(std::string_view bytes, const TriplifierOptions& opts,
                                 Warnings* /*warnings*/) {
  std::regex pattern;
  try {
    pattern = std::regex(opts.text_tokenizer_pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw ConfigError("invalid txt.regex '" + opts.text_tokenizer_pattern + "': " + e.what());
  }
  std::string text = decode_to_utf8(bytes, opts.charset);

  facade::FacadeTree tree;
  std::int64_t index = 0;
  auto emit = [&](std::string::const_iterator from, std::string::const_iterator to) {
    if (from != to)
      tree.root->add_value(facade::FacadeKey::number(++index), facade::FacadeValue{std::string(from, to)});
  };

  auto piece_start = text.cbegin();
  auto search_from = text.cbegin();
  std::smatch m;
  while (search_from != text.cend() &&
         std::regex_search(search_from, text.cend(), m, pattern,
                           search_from == text.cbegin() ? std::regex_constants::match_default
                                                        : std::regex_constants::match_prev_avail)) {
    if (m.length(0) == 0) {
      // An empty match splits nothing; step over one UTF-8 character.
      auto next = m[0].first;
      if (next == text.cend()) break;
      ++next;
      while (next != text.cend() && (static_cast<unsigned char>(*next) & 0xC0) == 0x80) ++next;
      search_from = next;
      continue;
    }
    emit(piece_start, m[0].first);
    piece_start = search_from = m[0].second;
  }
  emit(piece_start, text.cend());
  return tree;
}

}  // namespace facadex::triplify
