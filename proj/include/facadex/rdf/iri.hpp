#pragma once

#include <string>
#include <string_view>

namespace facadex::rdf {

// RFC 3986 section 5 reference resolution. When `base` is empty or `ref`
// already has a scheme, `ref` is returned unchanged.
std::string resolve_iri(std::string_view base, std::string_view ref);

}  // namespace facadex::rdf
