#pragma once

#include "facadex/rdf/graph.hpp"

namespace facadex::rdf {

// RDF graph isomorphism: true if a bijection between the blank nodes of `a`
// and `b` maps one triple set onto the other.
bool isomorphic(const Graph& a, const Graph& b);

}  // namespace facadex::rdf
