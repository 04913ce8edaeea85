#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace kgframe {

namespace vocab {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";

inline std::string rdf(std::string_view local) { return std::string(kRdf) + std::string(local); }
inline std::string xsd(std::string_view local) { return std::string(kXsd) + std::string(local); }
}  // namespace vocab

struct Iri {
  std::string value;
  auto operator<=>(const Iri&) const = default;
};

struct BlankNode {
  std::string label;
  auto operator<=>(const BlankNode&) const = default;
};

// An empty datatype means a simple literal (xsd:string); a language tag implies
// rdf:langString and is never stored together with a datatype.
struct Literal {
  std::string lexical;
  std::string datatype;
  std::string language;
  auto operator<=>(const Literal&) const = default;
};

// An RDF term: IRI, literal or blank node. Equality and ordering are
// structural; see compare_for_order() for the SPARQL ORDER BY ordering.
class Term {
 public:
  Term() : value_(Iri{}) {}
  Term(Iri iri) : value_(std::move(iri)) {}
  Term(Literal lit) : value_(std::move(lit)) {}
  Term(BlankNode node) : value_(std::move(node)) {}

  static Term iri(std::string value);
  static Term literal(std::string lexical, std::string datatype = {});
  static Term lang_literal(std::string lexical, std::string language);
  static Term blank(std::string label);
  static Term integer(std::int64_t value);
  static Term decimal(double value);

  bool is_iri() const noexcept { return std::holds_alternative<Iri>(value_); }
  bool is_literal() const noexcept { return std::holds_alternative<Literal>(value_); }
  bool is_blank() const noexcept { return std::holds_alternative<BlankNode>(value_); }

  const Iri& as_iri() const { return std::get<Iri>(value_); }
  const Literal& as_literal() const { return std::get<Literal>(value_); }
  const BlankNode& as_blank() const { return std::get<BlankNode>(value_); }

  // IRI text, literal lexical form or blank node label (SPARQL str()).
  const std::string& text() const;

  // N-Triples rendering.
  std::string to_ntriples() const;

  const std::variant<Iri, Literal, BlankNode>& variant() const noexcept { return value_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  std::variant<Iri, Literal, BlankNode> value_;
};

bool is_numeric_datatype(std::string_view datatype);

// Numeric value of a numerically typed literal, std::nullopt otherwise.
std::optional<double> numeric_value(const Term& term);

// Total order used by ORDER BY: unbound < blank nodes < IRIs < literals;
// numeric literals order by value and precede other literals.
std::strong_ordering compare_for_order(const std::optional<Term>& a, const std::optional<Term>& b);

// A query variable, written ?name. Variables live in a namespace disjoint from
// terms.
struct Variable {
  std::string name;
  auto operator<=>(const Variable&) const = default;
};

using PatternTerm = std::variant<Term, Variable>;

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  // Throws kgframe::Error when the subject is a literal or the predicate is
  // not an IRI.
  static Triple make(Term s, Term p, Term o);

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Prefix table used to expand prefixed names and to compact IRIs on output.
class PrefixMap {
 public:
  // Starts with rdf, rdfs, xsd and owl.
  PrefixMap();

  void add(std::string prefix, std::string ns);
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  std::optional<std::string> lookup(const std::string& prefix) const;

  // "dbpp:starring" -> full IRI; std::nullopt for an unknown prefix or a
  // string that is not a prefixed name.
  std::optional<std::string> expand(std::string_view qname) const;

  // Full IRI -> "prefix:local" using the longest matching namespace whose
  // remainder is a plain local name.
  std::optional<std::string> compact(std::string_view iri) const;

  friend bool operator==(const PrefixMap&, const PrefixMap&) = default;

 private:
  std::map<std::string, std::string> entries_;
};

bool is_valid_local_name(std::string_view local);

}  // namespace kgframe

template <>
struct std::hash<kgframe::Term> {
  std::size_t operator()(const kgframe::Term& t) const noexcept;
};

template <>
struct std::hash<kgframe::Triple> {
  std::size_t operator()(const kgframe::Triple& t) const noexcept;
};
