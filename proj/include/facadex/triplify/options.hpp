#pragma once

#include <map>
#include <string>
#include <vector>

namespace facadex::triplify {

struct TriplifierOptions {
  std::string charset = "UTF-8";
  bool csv_headers = false;
  std::string text_tokenizer_pattern = " ";
  // Options not understood by any built-in triplifier, kept verbatim.
  std::map<std::string, std::string> format_extras;

  friend bool operator==(const TriplifierOptions&, const TriplifierOptions&) = default;
};

// Non-fatal diagnostics collected while triplifying.
using Warnings = std::vector<std::string>;

}  // namespace facadex::triplify
