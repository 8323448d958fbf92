#pragma once

#include <memory>
#include <string_view>

#include "facadex/sparql/algebra.hpp"

namespace facadex::sparql {

// Parses a SPARQL 1.1 query (SELECT, CONSTRUCT, ASK, DESCRIBE) straight into
// algebra. Relative IRIs resolve against BASE, else `base`. Throws ParseError
// carrying line and column.
std::shared_ptr<const Query> parse_query(std::string_view text, std::string_view base = {});

}  // namespace facadex::sparql
