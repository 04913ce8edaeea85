#pragma once

#include <map>
#include <string>
#include <string_view>

#include "kgframe/frame/frame.hpp"

namespace kgframe {

// A parsed frame program. The text format mirrors the Python-style API:
//
//   prefix dbpp: <http://dbpedia.org/property/>
//   graph dbpedia = <http://dbpedia.org>
//   frame movies = dbpedia.feature_domain_range('dbpp:starring', 'movie', 'actor')
//   american = movies.expand('actor', [('dbpp:birthPlace', 'country')])
//       .filter({'country': ['=dbpr:United_States']})
//   american.head(10)
//   result american
//
// One statement per line; a statement continues over lines ending in '\',
// while brackets are open, or onto lines starting with '.'. `#` starts a
// comment. `frame` before an assignment is optional. A bare `NAME.op(...)`
// rebinds NAME.
struct FrameProgram {
  PrefixMap prefixes;
  std::map<std::string, std::string> graphs;  // name -> IRI
  std::map<std::string, FrameDescriptor> frames;
  std::string result;

  const FrameDescriptor& result_frame() const { return frames.at(result); }
};

// Throws ParseError (with the statement's first line number) on syntax
// errors, undefined names, invalid operator arguments, or a missing or
// repeated `result`.
FrameProgram parse_program(std::string_view text);

// Reads and parses a file; throws Error when it cannot be read.
FrameProgram load_program(const std::string& path);

}  // namespace kgframe
