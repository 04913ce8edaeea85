#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "kgframe/oracle/table.hpp"

namespace kgframe {

enum class TableFormat { kCsv, kTsv, kJson };

// "csv", "tsv" or "json"; throws Error otherwise.
TableFormat parse_table_format(std::string_view name);

// SPARQL results JSON (application/sparql-results+json). Columns follow
// head.vars; xsd:string datatypes fold into plain literals. Throws
// EndpointError on a malformed document.
ResultTable parse_results_json(std::string_view body);

// csv: SPARQL CSV (plain values, RFC 4180 quoting, CRLF rows, empty = null).
// tsv: SPARQL TSV (?var header, N-Triples terms, empty = null).
// json: SPARQL results JSON.
void write_table(std::ostream& out, const ResultTable& table, TableFormat format);
std::string format_table(const ResultTable& table, TableFormat format);

}  // namespace kgframe
