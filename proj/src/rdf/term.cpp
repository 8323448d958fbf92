#include "facadex/rdf/term.hpp"

#include <cctype>

namespace facadex::rdf {

Term Term::iri(std::string iri) { return Term{TermKind::Iri, std::move(iri), {}, {}}; }

Term Term::blank(std::string label) { return Term{TermKind::Blank, std::move(label), {}, {}}; }

Term Term::literal(std::string lexical, std::string_view datatype) {
  return Term{TermKind::Literal, std::move(lexical), std::string(datatype), {}};
}

Term Term::lang_literal(std::string lexical, std::string lang) {
  for (char& c : lang) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return Term{TermKind::Literal, std::move(lexical), std::string(vocab::kRdfLangString),
              std::move(lang)};
}

Term Term::integer(long long v) { return literal(std::to_string(v), vocab::kXsdInteger); }

Term Term::boolean(bool v) { return literal(v ? "true" : "false", vocab::kXsdBoolean); }

std::string escape_string(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
          static const char* hex = "0123456789ABCDEF";
          out += "\\u00";
          out += hex[(static_cast<unsigned char>(c) >> 4) & 0xF];
          out += hex[static_cast<unsigned char>(c) & 0xF];
        } else {
          out += c;
        }
    }
  }
  return out;
}

namespace {

std::string escape_iri(std::string_view iri) {
  std::string out;
  out.reserve(iri.size());
  for (unsigned char c : iri) {
    if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      static const char* hex = "0123456789ABCDEF";
      out += "\\u00";
      out += hex[c >> 4];
      out += hex[c & 0xF];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

}  // namespace

std::string Term::to_ntriples() const {
  switch (kind) {
    case TermKind::Iri:
      return "<" + escape_iri(value) + ">";
    case TermKind::Blank:
      return "_:" + value;
    case TermKind::Literal: {
      std::string out = "\"" + escape_string(value) + "\"";
      if (!lang.empty()) return out + "@" + lang;
      if (datatype != vocab::kXsdString) out += "^^<" + escape_iri(datatype) + ">";
      return out;
    }
  }
  return {};
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.value);
  h ^= static_cast<std::size_t>(t.kind) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  if (t.kind == TermKind::Literal) {
    h ^= std::hash<std::string>{}(t.datatype) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    if (!t.lang.empty())
      h ^= std::hash<std::string>{}(t.lang) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::size_t TripleHash::operator()(const Triple& t) const noexcept {
  TermHash th;
  std::size_t h = th(t.subject);
  h = h * 31 + th(t.predicate);
  h = h * 31 + th(t.object);
  return h;
}

bool has_scheme(std::string_view iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < iri.size(); ++i) {
    char c = iri[i];
    if (c == ':') return true;
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
      return false;
  }
  return false;
}

}  // namespace facadex::rdf
