#pragma once

#include <string_view>

#include "facadex/rdf/graph.hpp"

namespace facadex::rdf {

// Turtle 1.1 (and therefore N-Triples). Blank node labels are renamed to
// fresh document-scoped labels. Throws ParseError with line/column.
Graph parse_turtle(std::string_view text, std::string_view base = {});

// TriG 1.1. Triples outside any graph block go to the default graph.
Dataset parse_trig(std::string_view text, std::string_view base = {});

}  // namespace facadex::rdf
