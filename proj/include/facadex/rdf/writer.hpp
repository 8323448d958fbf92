#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "facadex/rdf/graph.hpp"

namespace facadex::rdf {

using PrefixMap = std::vector<std::pair<std::string, std::string>>;

// fx:, rdf:, xsd: and xyz: (the default data namespace).
PrefixMap default_prefixes();

void write_ntriples(std::ostream& out, const Graph& graph);
void write_nquads(std::ostream& out, const Dataset& dataset);

// Pretty Turtle: blank nodes referenced exactly once are nested as
// `[ ... ]`, unreferenced blank subjects are written as `[]`.
void write_turtle(std::ostream& out, const Graph& graph,
                  const PrefixMap& prefixes = default_prefixes());

// TriG; the default graph is written only when non-empty.
void write_trig(std::ostream& out, const Dataset& dataset,
                const PrefixMap& prefixes = default_prefixes());

}  // namespace facadex::rdf
