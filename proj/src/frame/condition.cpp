#include "kgframe/frame/condition.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "kgframe/error.hpp"

namespace kgframe {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals_prefix(std::string_view s, std::string_view word) {
  if (s.size() < word.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[i])) != word[i]) return false;
  return true;
}

void quote(std::string& out, std::string_view s) {
  out += '"';
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
  out += '"';
}

// Splits "a, b, c" on top-level commas (commas inside quotes or <> stay).
std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  char quote_char = 0;
  bool in_iri = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote_char) {
      if (c == '\\') ++i;
      else if (c == quote_char) quote_char = 0;
    } else if (in_iri) {
      if (c == '>') in_iri = false;
    } else if (c == '"' || c == '\'') {
      quote_char = c;
    } else if (c == '<') {
      in_iri = true;
    } else if (c == ',') {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  auto last = trim(s.substr(start));
  if (!last.empty() || !parts.empty()) parts.push_back(last);
  return parts;
}

bool lexical_matches(const std::string& lex, const char* pattern) {
  return std::regex_match(lex, std::regex(pattern));
}

}  // namespace

Condition Condition::compare(std::string op, Term operand) {
  static const std::vector<std::string> kOps = {"<", "<=", "=", "!=", ">=", ">"};
  if (std::find(kOps.begin(), kOps.end(), op) == kOps.end()) throw FrameError("unknown comparison operator '" + op + "'");
  Condition c;
  c.kind = Kind::kCompare;
  c.op = std::move(op);
  c.operand = std::move(operand);
  return c;
}

Condition Condition::is_uri() {
  Condition c;
  c.kind = Kind::kIsUri;
  return c;
}

Condition Condition::is_literal() {
  Condition c;
  c.kind = Kind::kIsLiteral;
  return c;
}

Condition Condition::regex(std::string pattern) {
  try {
    std::regex probe(pattern, std::regex::ECMAScript);
  } catch (const std::regex_error&) {
    throw ParseError(1, pattern, "invalid regular expression");
  }
  Condition c;
  c.kind = Kind::kRegex;
  c.pattern = std::move(pattern);
  return c;
}

Condition Condition::in(std::vector<Term> terms) {
  Condition c;
  c.kind = Kind::kIn;
  c.list = std::move(terms);
  return c;
}

Condition Condition::raw_expression(std::string text, const PrefixMap& prefixes) {
  Condition c;
  c.kind = Kind::kRaw;
  c.expr = parse_expression(text, prefixes);
  c.raw = std::move(text);
  return c;
}

Condition Condition::renamed(const std::string& from, const std::string& to) const {
  if (kind != Kind::kRaw) return *this;
  Condition c = *this;
  c.raw = rename_variable_in_text(raw, from, to);
  c.expr = rename_expression_variable(expr, from, to);
  return c;
}

bool operator==(const Condition& a, const Condition& b) {
  return a.kind == b.kind && a.op == b.op && a.operand == b.operand && a.list == b.list && a.pattern == b.pattern &&
         a.raw == b.raw;
}

Term parse_term_value(std::string_view text, const PrefixMap& prefixes) {
  text = trim(text);
  if (text.empty()) throw ParseError(1, "", "empty value");
  static const std::regex kPname(R"([A-Za-z_][A-Za-z0-9_.\-]*:[^\s]*)");
  static const std::regex kNumber(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
  std::string s(text);
  if (std::regex_match(s, kNumber)) {
    std::string dt = s.find_first_of("eE") != std::string::npos ? "double"
                     : s.find('.') != std::string::npos      ? "decimal"
                                                               : "integer";
    return Term::literal(s, vocab::xsd(dt));
  }
  if (s.front() != '"' && s.front() != '\'' && s.front() != '<' && std::regex_match(s, kPname)) {
    auto iri = prefixes.expand(s);
    if (!iri) throw ParseError(1, s, "unknown prefix");
    return Term::iri(*iri);
  }
  try {
    auto expr = parse_expression(s, prefixes);
    if (expr->kind == Expr::Kind::kConstant) return expr->constant;
  } catch (const ParseError&) {
    if (s.front() == '"' || s.front() == '\'' || s.front() == '<') throw;
  }
  return Term::literal(s);
}

Condition parse_condition(std::string_view text, const PrefixMap& prefixes) {
  text = trim(text);
  if (text.empty()) throw ParseError(1, "", "empty condition");
  if (text.starts_with("raw:")) return Condition::raw_expression(std::string(trim(text.substr(4))), prefixes);
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lowered == "isuri" || lowered == "isiri") return Condition::is_uri();
  if (lowered == "isliteral") return Condition::is_literal();
  auto call_body = [&](std::size_t name_len) -> std::string_view {
    auto rest = trim(text.substr(name_len));
    if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
      throw ParseError(1, std::string(text), "expected '(...)' after function name");
    return trim(rest.substr(1, rest.size() - 2));
  };
  if (iequals_prefix(text, "regex") && lowered.find('(') != std::string::npos &&
      trim(text.substr(5)).starts_with("(")) {
    auto body = call_body(5);
    std::string pattern(body);
    if (pattern.size() >= 2 && (pattern.front() == '"' || pattern.front() == '\'') && pattern.back() == pattern.front()) {
      Term t = parse_term_value(pattern, prefixes);
      pattern = t.text();
    }
    return Condition::regex(std::move(pattern));
  }
  if (iequals_prefix(text, "in") && trim(text.substr(2)).starts_with("(")) {
    std::vector<Term> terms;
    for (auto part : split_list(call_body(2))) {
      if (part.empty()) throw ParseError(1, std::string(text), "empty element in in-list");
      terms.push_back(parse_term_value(part, prefixes));
    }
    if (terms.empty()) throw ParseError(1, std::string(text), "empty in-list");
    return Condition::in(std::move(terms));
  }
  for (std::string_view op : {"<=", ">=", "!=", "=", "<", ">"}) {
    if (text.starts_with(op)) return Condition::compare(std::string(op), parse_term_value(text.substr(op.size()), prefixes));
  }
  throw ParseError(1, std::string(text), "unrecognized condition");
}

std::string render_term(const Term& term, const PrefixMap& prefixes, std::vector<std::string>* used) {
  auto note = [&](const std::string& compact) {
    if (used) used->push_back(compact.substr(0, compact.find(':')));
  };
  if (term.is_iri()) {
    if (auto c = prefixes.compact(term.as_iri().value)) {
      note(*c);
      return *c;
    }
    return "<" + term.as_iri().value + ">";
  }
  if (term.is_blank()) return "_:" + term.as_blank().label;
  const auto& lit = term.as_literal();
  const std::string& dt = lit.datatype;
  if (dt == vocab::xsd("integer") && lexical_matches(lit.lexical, R"([+-]?\d+)")) return lit.lexical;
  if (dt == vocab::xsd("decimal") && lexical_matches(lit.lexical, R"([+-]?\d*\.\d+)")) return lit.lexical;
  if (dt == vocab::xsd("double") && lexical_matches(lit.lexical, R"([+-]?(\d+\.?\d*|\.\d+)[eE][+-]?\d+)"))
    return lit.lexical;
  if (dt == vocab::xsd("boolean") && (lit.lexical == "true" || lit.lexical == "false")) return lit.lexical;
  std::string out;
  quote(out, lit.lexical);
  if (!lit.language.empty()) out += "@" + lit.language;
  else if (!dt.empty()) out += "^^" + render_term(Term::iri(dt), prefixes, used);
  return out;
}

std::string render_condition(const std::string& var, const Condition& cond, const PrefixMap& prefixes,
                             std::vector<std::string>* used) {
  const std::string v = "?" + var;
  switch (cond.kind) {
    case Condition::Kind::kCompare:
      return v + " " + cond.op + " " + render_term(cond.operand, prefixes, used);
    case Condition::Kind::kIsUri:
      return "isIRI(" + v + ")";
    case Condition::Kind::kIsLiteral:
      return "isLiteral(" + v + ")";
    case Condition::Kind::kRegex: {
      std::string out = "regex(str(" + v + "), ";
      quote(out, cond.pattern);
      return out + ")";
    }
    case Condition::Kind::kIn: {
      std::string out = v + " IN (";
      for (std::size_t i = 0; i < cond.list.size(); ++i) {
        if (i) out += ", ";
        out += render_term(cond.list[i], prefixes, used);
      }
      return out + ")";
    }
    case Condition::Kind::kRaw:
      if (used)
        for (const auto& p : prefixes_in_text(cond.raw)) used->push_back(p);
      return cond.raw;
  }
  return {};
}

bool condition_holds(const Condition& cond, const Term* value, const Bindings& bindings) {
  if (cond.kind == Condition::Kind::kRaw) return expression_holds(*cond.expr, bindings);
  if (!value) return false;
  switch (cond.kind) {
    case Condition::Kind::kCompare: {
      const Term& a = *value;
      const Term& b = cond.operand;
      int c = 0;
      auto na = numeric_value(a), nb = numeric_value(b);
      if (na && nb) {
        c = *na < *nb ? -1 : (*na > *nb ? 1 : 0);
      } else if (cond.op == "=" || cond.op == "!=") {
        return (a == b) == (cond.op == "=");
      } else if ((a.is_literal() && b.is_literal()) || (a.is_iri() && b.is_iri())) {
        int r = a.text().compare(b.text());
        c = r < 0 ? -1 : (r > 0 ? 1 : 0);
      } else {
        return false;
      }
      const auto& op = cond.op;
      if (op == "<") return c < 0;
      if (op == "<=") return c <= 0;
      if (op == "=") return c == 0;
      if (op == "!=") return c != 0;
      if (op == ">=") return c >= 0;
      return c > 0;
    }
    case Condition::Kind::kIsUri:
      return value->is_iri();
    case Condition::Kind::kIsLiteral:
      return value->is_literal();
    case Condition::Kind::kRegex:
      if (value->is_blank()) return false;
      return std::regex_search(value->text(), std::regex(cond.pattern, std::regex::ECMAScript));
    case Condition::Kind::kIn:
      for (const auto& t : cond.list) {
        auto na = numeric_value(*value), nb = numeric_value(t);
        if ((na && nb) ? *na == *nb : *value == t) return true;
      }
      return false;
    case Condition::Kind::kRaw:
      break;
  }
  return false;
}

}  // namespace kgframe
