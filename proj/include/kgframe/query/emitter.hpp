#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kgframe/query/model.hpp"

namespace kgframe {

// SPARQL 1.1 text of a query model. PREFIX lines are emitted only for the
// prefixes the body uses. One graph yields FROM <g>; several yield
// FROM NAMED plus GRAPH blocks around each run of same-graph triples.
std::string emit_sparql(const QueryModel& m);

// Tokens for whitespace-insensitive comparison of SPARQL text. IRIs, strings
// and variables are single tokens, punctuation is split off, the PREFIX
// prologue is dropped, and an optional '.' before '}', FILTER, OPTIONAL, '{'
// or UNION is removed. Keywords compare case-insensitively.
std::vector<std::string> sparql_tokens(std::string_view text);

bool token_equal(std::string_view a, std::string_view b);

}  // namespace kgframe
