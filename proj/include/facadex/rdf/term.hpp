#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace facadex::rdf {

namespace vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfLangString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline constexpr std::string_view kRdfFirst = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
inline constexpr std::string_view kRdfRest = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
inline constexpr std::string_view kRdfNil = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";

inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kXsdString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kXsdDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kXsdFloat = "http://www.w3.org/2001/XMLSchema#float";
inline constexpr std::string_view kXsdBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view kXsdDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
inline constexpr std::string_view kXsdBase64Binary =
    "http://www.w3.org/2001/XMLSchema#base64Binary";

inline constexpr std::string_view kFxNamespace = "http://sparql.xyz/facade-x/ns/";
inline constexpr std::string_view kFxRoot = "http://sparql.xyz/facade-x/ns/Root";
inline constexpr std::string_view kDataNamespace = "http://sparql.xyz/facade-x/data/";
inline constexpr std::string_view kMetadataGraph = "http://sparql.xyz/facade-x/data/metadata";

}  // namespace vocab

enum class TermKind : std::uint8_t { Iri, Blank, Literal };

// An RDF 1.1 term. For IRIs `value` is the IRI text, for blank nodes the
// label (without "_:"), for literals the lexical form. Literals always carry
// a datatype IRI: simple literals use xsd:string, language-tagged literals
// rdf:langString with a lowercase `lang`.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;
  std::string datatype;
  std::string lang;

  static Term iri(std::string iri);
  static Term blank(std::string label);
  static Term literal(std::string lexical, std::string_view datatype = vocab::kXsdString);
  static Term lang_literal(std::string lexical, std::string lang);
  static Term integer(long long v);
  static Term boolean(bool v);

  bool is_iri() const { return kind == TermKind::Iri; }
  bool is_blank() const { return kind == TermKind::Blank; }
  bool is_literal() const { return kind == TermKind::Literal; }
  bool is_resource() const { return kind != TermKind::Literal; }
  bool has_lang() const { return kind == TermKind::Literal && !lang.empty(); }
  // Simple literal or explicit xsd:string.
  bool is_string_literal() const {
    return kind == TermKind::Literal && lang.empty() && datatype == vocab::kXsdString;
  }

  // N-Triples rendering (`<iri>`, `_:label`, `"lex"^^<dt>`, `"lex"@lang`).
  std::string to_ntriples() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept;
};

// Escapes a string for use between double quotes in N-Triples/Turtle.
std::string escape_string(std::string_view s);

// True if `iri` starts with a scheme ("[A-Za-z][A-Za-z0-9+.-]*:").
bool has_scheme(std::string_view iri);

}  // namespace facadex::rdf
