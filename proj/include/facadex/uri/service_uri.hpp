#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "facadex/triplify/options.hpp"

namespace facadex::uri {

inline constexpr std::string_view kScheme = "x-sparql-anything:";

struct ServiceSpec {
  std::string location;
  // Media type as given, minus any charset parameter (that goes to `charset`).
  std::optional<std::string> media_type_override;
  std::optional<std::string> charset;
  std::optional<std::string> namespace_iri;
  std::optional<std::string> root_iri;
  bool metadata = false;
  // triplifier_options.charset mirrors `charset` (UTF-8 when unset).
  triplify::TriplifierOptions triplifier_options;

  friend bool operator==(const ServiceSpec&, const ServiceSpec&) = default;
};

// True if `iri` starts with the x-sparql-anything: scheme (case-insensitive).
bool is_service_uri(std::string_view iri);

// Splits the remainder on commas into key=value options, or takes all of it
// as the location when the first segment has no '=' before any ':' or '/'.
// Throws ConfigError on malformed input.
ServiceSpec parse_service_uri(std::string_view iri);

// Canonical form: options in alphabetical key order, location last. Throws
// PreconditionError when a value cannot be represented (e.g. contains ',').
std::string render_service_uri(const ServiceSpec& spec);

}  // namespace facadex::uri
