#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kgframe/rdf/term.hpp"

namespace kgframe {

// Parsed form of a SPARQL filter expression (the fragment accepted by raw
// filter conditions): ||, &&, !, comparisons, IN / NOT IN, + - * /, and the
// builtins str, year, month, day, lang, datatype, bound, isIRI/isURI,
// isLiteral, isBlank, regex, contains, strstarts, strends, strlen, lcase,
// ucase and xsd casts.
struct Expr {
  enum class Kind { kConstant, kVariable, kUnary, kBinary, kIn, kCall };
  Kind kind = Kind::kConstant;
  std::string op;  // operator symbol, function name or "NOT IN"
  Term constant;
  std::string variable;
  std::vector<std::shared_ptr<const Expr>> args;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Variable lookup used during evaluation; returns nullptr for unbound.
using Bindings = std::function<const Term*(const std::string&)>;

// Throws ParseError (line 1) on malformed text or unknown prefixes.
ExprPtr parse_expression(std::string_view text, const PrefixMap& prefixes);

// Value of the expression; std::nullopt encodes a SPARQL evaluation error.
std::optional<Term> evaluate_expression(const Expr& expr, const Bindings& bindings);

// SPARQL effective boolean value; errors count as false.
bool expression_holds(const Expr& expr, const Bindings& bindings);

std::set<std::string> expression_variables(const Expr& expr);

// Prefixes of all prefixed names written in the text.
std::set<std::string> prefixes_in_text(std::string_view text);

// Rewrites ?from / $from to ?to in expression text, leaving string literals and
// IRIs untouched.
std::string rename_variable_in_text(std::string_view text, const std::string& from, const std::string& to);

// Same tree with every occurrence of variable `from` renamed to `to`.
ExprPtr rename_expression_variable(const ExprPtr& expr, const std::string& from, const std::string& to);

Term boolean_term(bool value);

}  // namespace kgframe
