#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace facadex::sparql {

enum class Tok {
  Iri,        // <...>, text holds the raw IRI (escapes resolved)
  PName,      // prefix:local, text holds it verbatim (local escapes resolved)
  Blank,      // _:label, text holds the label
  Var,        // ?x or $x, text holds the name
  LangTag,    // @en, text holds "en"
  Integer,
  Decimal,
  Double,
  String,     // text holds the unescaped value
  Word,       // keywords and bare names (a, true, SELECT, functions)
  Punct,      // { } ( ) [ ] . , ; * + - / ! = != < > <= >= && || ? | ^ ^^
  Nil,        // ()
  Anon,       // []
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t offset = 0;  // byte offset of the first character
  std::size_t line = 1;
  std::size_t column = 1;
};

// Tokenizes a whole query. Throws ParseError with position on bad input.
std::vector<Token> tokenize_query(std::string_view text);

}  // namespace facadex::sparql
