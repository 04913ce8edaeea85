#include "kgframe/rdf/term.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "kgframe/error.hpp"

namespace kgframe {

namespace {

void escape_literal(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
}

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

int kind_rank(const Term& t) {
  if (t.is_blank()) return 0;
  if (t.is_iri()) return 1;
  return 2;
}

}  // namespace

Term Term::iri(std::string value) { return Term(Iri{std::move(value)}); }

Term Term::literal(std::string lexical, std::string datatype) {
  return Term(Literal{std::move(lexical), std::move(datatype), {}});
}

Term Term::lang_literal(std::string lexical, std::string language) {
  return Term(Literal{std::move(lexical), {}, std::move(language)});
}

Term Term::blank(std::string label) { return Term(BlankNode{std::move(label)}); }

Term Term::integer(std::int64_t value) {
  return literal(std::to_string(value), vocab::xsd("integer"));
}

Term Term::decimal(double value) {
  // Shortest round-tripping form; integral values keep a ".0" so the lexical
  // form stays a valid xsd:decimal.
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string s(buf.data(), end);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return literal(std::move(s), vocab::xsd("decimal"));
}

const std::string& Term::text() const {
  return std::visit(
      [](const auto& v) -> const std::string& {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Iri>) return v.value;
        else if constexpr (std::is_same_v<T, Literal>) return v.lexical;
        else return v.label;
      },
      value_);
}

std::string Term::to_ntriples() const {
  std::string out;
  if (is_iri()) {
    out = "<" + as_iri().value + ">";
  } else if (is_blank()) {
    out = "_:" + as_blank().label;
  } else {
    const auto& lit = as_literal();
    out += '"';
    escape_literal(out, lit.lexical);
    out += '"';
    if (!lit.language.empty()) out += "@" + lit.language;
    else if (!lit.datatype.empty()) out += "^^<" + lit.datatype + ">";
  }
  return out;
}

bool is_numeric_datatype(std::string_view datatype) {
  static constexpr std::array<std::string_view, 16> kLocal = {
      "integer", "decimal", "double", "float", "int", "long", "short", "byte",
      "nonNegativeInteger", "positiveInteger", "negativeInteger",
      "nonPositiveInteger", "unsignedInt", "unsignedLong", "unsignedShort",
      "unsignedByte"};
  if (!datatype.starts_with(vocab::kXsd)) return false;
  auto local = datatype.substr(vocab::kXsd.size());
  for (auto name : kLocal)
    if (local == name) return true;
  return false;
}

std::optional<double> numeric_value(const Term& term) {
  if (!term.is_literal()) return std::nullopt;
  const auto& lit = term.as_literal();
  if (!is_numeric_datatype(lit.datatype)) return std::nullopt;
  std::string_view s = lit.lexical;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s == "INF") return HUGE_VAL;
  if (s == "-INF") return -HUGE_VAL;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::strong_ordering compare_for_order(const std::optional<Term>& a, const std::optional<Term>& b) {
  if (!a || !b) return a.has_value() <=> b.has_value();
  int ka = kind_rank(*a), kb = kind_rank(*b);
  if (ka != kb) return ka <=> kb;
  if (ka == 2) {
    auto na = numeric_value(*a), nb = numeric_value(*b);
    if (na.has_value() != nb.has_value()) return nb.has_value() <=> na.has_value();
    if (na && *na != *nb) return *na < *nb ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return *a <=> *b;
}

Triple Triple::make(Term s, Term p, Term o) {
  if (s.is_literal()) throw Error("triple subject must be an IRI or blank node");
  if (!p.is_iri()) throw Error("triple predicate must be an IRI");
  return Triple{std::move(s), std::move(p), std::move(o)};
}

PrefixMap::PrefixMap() {
  entries_["rdf"] = std::string(vocab::kRdf);
  entries_["rdfs"] = std::string(vocab::kRdfs);
  entries_["xsd"] = std::string(vocab::kXsd);
  entries_["owl"] = std::string(vocab::kOwl);
}

void PrefixMap::add(std::string prefix, std::string ns) { entries_[std::move(prefix)] = std::move(ns); }

std::optional<std::string> PrefixMap::lookup(const std::string& prefix) const {
  auto it = entries_.find(prefix);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> PrefixMap::expand(std::string_view qname) const {
  auto colon = qname.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto it = entries_.find(std::string(qname.substr(0, colon)));
  if (it == entries_.end()) return std::nullopt;
  return it->second + std::string(qname.substr(colon + 1));
}

std::optional<std::string> PrefixMap::compact(std::string_view iri) const {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : entries_) {
    const auto& ns = entry.second;
    if (ns.empty() || !iri.starts_with(ns)) continue;
    if (!is_valid_local_name(iri.substr(ns.size()))) continue;
    if (!best || ns.size() > best->second.size()) best = &entry;
  }
  if (!best) return std::nullopt;
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

bool is_valid_local_name(std::string_view local) {
  if (local.empty()) return false;
  for (std::size_t i = 0; i < local.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(local[i]);
    bool ok = std::isalnum(c) || c == '_' || (i > 0 && (c == '-' || c == '.'));
    if (!ok) return false;
  }
  return local.back() != '.';
}

}  // namespace kgframe

std::size_t std::hash<kgframe::Term>::operator()(const kgframe::Term& t) const noexcept {
  std::hash<std::string> h;
  std::size_t seed = t.variant().index();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, kgframe::Literal>) {
          seed = kgframe::mix(seed, h(v.lexical));
          seed = kgframe::mix(seed, h(v.datatype));
          seed = kgframe::mix(seed, h(v.language));
        } else if constexpr (std::is_same_v<T, kgframe::Iri>) {
          seed = kgframe::mix(seed, h(v.value));
        } else {
          seed = kgframe::mix(seed, h(v.label));
        }
      },
      t.variant());
  return seed;
}

std::size_t std::hash<kgframe::Triple>::operator()(const kgframe::Triple& t) const noexcept {
  std::hash<kgframe::Term> h;
  return kgframe::mix(kgframe::mix(h(t.subject), h(t.predicate)), h(t.object));
}
