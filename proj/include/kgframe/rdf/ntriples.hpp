#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgframe/rdf/term.hpp"

namespace kgframe {

// Parses N-Triples text. Triples come back in file order; comment and blank
// lines are skipped. Throws ParseError naming the line of the first error.
std::vector<Triple> parse_ntriples(std::istream& in);
std::vector<Triple> parse_ntriples(std::string_view text);
std::vector<Triple> parse_ntriples_file(const std::string& path);

void write_ntriples(std::ostream& out, std::span<const Triple> triples);
std::string to_ntriples(std::span<const Triple> triples);

}  // namespace kgframe
