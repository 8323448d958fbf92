#pragma once

#include <ostream>
#include <string_view>

#include "facadex/sparql/engine.hpp"

namespace facadex::sparql {

// W3C SPARQL 1.1 Query Results serializations.
void write_results_json(std::ostream& out, const SolutionTable& table);
void write_boolean_json(std::ostream& out, bool value);
void write_results_csv(std::ostream& out, const SolutionTable& table);
void write_results_tsv(std::ostream& out, const SolutionTable& table);
void write_boolean_csv(std::ostream& out, bool value);

// Parses a results-JSON document (SELECT form). Throws ParseError.
SolutionTable parse_results_json(std::string_view text);
// Parses the ASK form; nullopt when the document has no "boolean" member.
std::optional<bool> parse_boolean_json(std::string_view text);

}  // namespace facadex::sparql
