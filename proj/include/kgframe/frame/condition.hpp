#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgframe/frame/expression.hpp"
#include "kgframe/rdf/term.hpp"

namespace kgframe {

// One filter condition on a column.
struct Condition {
  enum class Kind { kCompare, kIsUri, kIsLiteral, kRegex, kIn, kRaw };

  Kind kind = Kind::kCompare;
  std::string op;          // kCompare: < <= = != >= >
  Term operand;            // kCompare
  std::vector<Term> list;  // kIn
  std::string pattern;     // kRegex
  std::string raw;         // kRaw: expression text, emitted verbatim
  ExprPtr expr;            // kRaw: parsed form used by the evaluators

  static Condition compare(std::string op, Term operand);
  static Condition is_uri();
  static Condition is_literal();
  static Condition regex(std::string pattern);
  static Condition in(std::vector<Term> terms);
  // Throws ParseError when the text is not a valid expression.
  static Condition raw_expression(std::string text, const PrefixMap& prefixes);

  // Rewrites ?from to ?to inside raw expressions; other kinds are unaffected.
  Condition renamed(const std::string& from, const std::string& to) const;

  friend bool operator==(const Condition& a, const Condition& b);
};

// Parses the string forms used by frame programs:
//   "=dbpr:United_States"  ">=50"  "!=\"x\"@en"
//   "isURI"  "isIRI"  "isLiteral"
//   "regex(USA)"  "regex(\"US.*\")"
//   "in(dblprc:vldb, dblprc:sigmod)"
//   "raw:year(xsd:dateTime(?date)) >= 2005"
Condition parse_condition(std::string_view text, const PrefixMap& prefixes);

// A single value: <iri>, prefix:local, "str"[@lang|^^dt], number, true/false.
// A bare word that is none of these becomes a plain literal.
Term parse_term_value(std::string_view text, const PrefixMap& prefixes);

// SPARQL text of a term: compacted IRI when a prefix fits, numbers as bare
// shorthand, strings quoted. Prefixes used are appended to `used` when given.
std::string render_term(const Term& term, const PrefixMap& prefixes, std::vector<std::string>* used = nullptr);

// Filter expression for `cond` applied to ?var (no surrounding FILTER).
std::string render_condition(const std::string& var, const Condition& cond, const PrefixMap& prefixes,
                             std::vector<std::string>* used = nullptr);

// Shared truth function of the evaluators. `value` is the column value
// (nullptr = null); `bindings` resolves other variables for raw expressions.
bool condition_holds(const Condition& cond, const Term* value, const Bindings& bindings);

}  // namespace kgframe
