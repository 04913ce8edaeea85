#include "kgframe/frame/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <regex>

#include "kgframe/error.hpp"

namespace kgframe {

namespace {

enum class Tok { kVar, kIri, kPname, kString, kNumber, kIdent, kPunct, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // variable name, IRI, pname, lexical form, identifier or punctuation
  std::string lang;
  std::string datatype;      // for strings: full IRI or pname (resolved by the parser)
  bool datatype_is_pname = false;
};

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_pn_char(char c) { return is_name_char(c) || c == '-' || c == '.'; }

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) break;
      out.push_back(next());
    }
    out.push_back(Token{});
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(1, std::string(s_.substr(pos_, 20)), "expression: " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool looks_like_iri() const {
    // '<' starts an IRI when a '>' follows before any whitespace.
    for (std::size_t i = pos_ + 1; i < s_.size(); ++i) {
      char c = s_[i];
      if (c == '>') return i > pos_ + 1;
      if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '=' || c == '<') return false;
    }
    return false;
  }

  std::string read_name(std::size_t& i, bool pn) const {
    std::size_t start = i;
    while (i < s_.size() && (pn ? is_pn_char(s_[i]) : is_name_char(s_[i]))) ++i;
    while (pn && i > start && s_[i - 1] == '.') --i;
    return std::string(s_.substr(start, i - start));
  }

  Token next() {
    Token t;
    char c = s_[pos_];
    if (c == '?' || c == '$') {
      ++pos_;
      t.kind = Tok::kVar;
      t.text = read_name(pos_, false);
      if (t.text.empty()) fail("empty variable name");
      return t;
    }
    if (c == '<' && looks_like_iri()) {
      auto end = s_.find('>', pos_);
      t.kind = Tok::kIri;
      t.text = std::string(s_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return t;
    }
    if (c == '"' || c == '\'') {
      char quote = c;
      ++pos_;
      std::string lexical;
      while (true) {
        if (pos_ >= s_.size()) fail("unterminated string");
        char d = s_[pos_++];
        if (d == quote) break;
        if (d == '\\' && pos_ < s_.size()) {
          char e = s_[pos_++];
          switch (e) {
            case 'n': lexical += '\n'; break;
            case 't': lexical += '\t'; break;
            case 'r': lexical += '\r'; break;
            default: lexical += e;
          }
          continue;
        }
        lexical += d;
      }
      t.kind = Tok::kString;
      t.text = std::move(lexical);
      if (pos_ < s_.size() && s_[pos_] == '@') {
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) ++pos_;
        t.lang = std::string(s_.substr(start, pos_ - start));
      } else if (s_.substr(pos_, 2) == "^^") {
        pos_ += 2;
        if (pos_ < s_.size() && s_[pos_] == '<') {
          auto end = s_.find('>', pos_);
          if (end == std::string_view::npos) fail("unterminated datatype IRI");
          t.datatype = std::string(s_.substr(pos_ + 1, end - pos_ - 1));
          pos_ = end + 1;
        } else {
          std::size_t i = pos_;
          std::string prefix = read_name(i, true);
          if (i >= s_.size() || s_[i] != ':') fail("bad datatype");
          ++i;
          std::string local = read_name(i, true);
          t.datatype = prefix + ":" + local;
          t.datatype_is_pname = true;
          pos_ = i;
        }
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                  s_[pos_] == 'e' || s_[pos_] == 'E' ||
                                  ((s_[pos_] == '+' || s_[pos_] == '-') && (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
        ++pos_;
      t.kind = Tok::kNumber;
      t.text = std::string(s_.substr(start, pos_ - start));
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t i = pos_;
      std::string name = read_name(i, true);
      if (i < s_.size() && s_[i] == ':') {
        ++i;
        std::string local = read_name(i, true);
        t.kind = Tok::kPname;
        t.text = name + ":" + local;
        pos_ = i;
        return t;
      }
      i = pos_;
      t.kind = Tok::kIdent;
      t.text = read_name(i, false);
      pos_ = i;
      return t;
    }
    static constexpr std::string_view kTwo[] = {"&&", "||", "!=", "<=", ">="};
    for (auto op : kTwo) {
      if (s_.substr(pos_, 2) == op) {
        pos_ += 2;
        t.kind = Tok::kPunct;
        t.text = std::string(op);
        return t;
      }
    }
    if (std::string_view("()!,=<>+-*/").find(c) != std::string_view::npos) {
      ++pos_;
      t.kind = Tok::kPunct;
      t.text = std::string(1, c);
      return t;
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_builtin(const std::string& lname) {
  static const std::set<std::string> kBuiltins = {
      "str", "lang", "datatype", "bound", "isiri", "isuri", "isliteral", "isblank", "isnumeric", "regex",
      "contains", "strstarts", "strends", "strlen", "lcase", "ucase", "year", "month", "day", "abs"};
  return kBuiltins.count(lname) != 0;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const PrefixMap& prefixes) : toks_(std::move(tokens)), prefixes_(prefixes) {}

  ExprPtr parse() {
    auto e = parse_or();
    if (peek().kind != Tok::kEnd) fail("unexpected trailing input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  bool accept_punct(std::string_view p) {
    if (peek().kind == Tok::kPunct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_ident(std::string_view word) {
    if (peek().kind == Tok::kIdent && lower(peek().text) == word) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(1, peek().text, "expression: " + what);
  }

  static ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

  ExprPtr binary(std::string op, ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = Expr::Kind::kBinary;
    e.op = std::move(op);
    e.args = {std::move(a), std::move(b)};
    return make(std::move(e));
  }

  ExprPtr parse_or() {
    auto left = parse_and();
    while (accept_punct("||")) left = binary("||", left, parse_and());
    return left;
  }

  ExprPtr parse_and() {
    auto left = parse_rel();
    while (accept_punct("&&")) left = binary("&&", left, parse_rel());
    return left;
  }

  ExprPtr parse_list(ExprPtr head, std::string op) {
    expect_punct("(");
    Expr e;
    e.kind = Expr::Kind::kIn;
    e.op = std::move(op);
    e.args.push_back(std::move(head));
    if (!accept_punct(")")) {
      do e.args.push_back(parse_or());
      while (accept_punct(","));
      expect_punct(")");
    }
    return make(std::move(e));
  }

  ExprPtr parse_rel() {
    auto left = parse_add();
    for (std::string_view op : {"=", "!=", "<=", ">=", "<", ">"}) {
      if (accept_punct(op)) return binary(std::string(op), left, parse_add());
    }
    if (accept_ident("in")) return parse_list(left, "IN");
    if (peek().kind == Tok::kIdent && lower(peek().text) == "not" && toks_[pos_ + 1].kind == Tok::kIdent &&
        lower(toks_[pos_ + 1].text) == "in") {
      pos_ += 2;
      return parse_list(left, "NOT IN");
    }
    return left;
  }

  ExprPtr parse_add() {
    auto left = parse_mul();
    while (true) {
      if (accept_punct("+")) left = binary("+", left, parse_mul());
      else if (accept_punct("-")) left = binary("-", left, parse_mul());
      else return left;
    }
  }

  ExprPtr parse_mul() {
    auto left = parse_unary();
    while (true) {
      if (accept_punct("*")) left = binary("*", left, parse_unary());
      else if (accept_punct("/")) left = binary("/", left, parse_unary());
      else return left;
    }
  }

  ExprPtr parse_unary() {
    for (std::string_view op : {"!", "-", "+"}) {
      if (accept_punct(op)) {
        Expr e;
        e.kind = Expr::Kind::kUnary;
        e.op = std::string(op);
        e.args = {parse_unary()};
        return make(std::move(e));
      }
    }
    return parse_primary();
  }

  std::string resolve(const std::string& pname) {
    auto iri = prefixes_.expand(pname);
    if (!iri) fail("unknown prefix in '" + pname + "'");
    return *iri;
  }

  ExprPtr call(std::string name) {
    expect_punct("(");
    Expr e;
    e.kind = Expr::Kind::kCall;
    e.op = std::move(name);
    if (!accept_punct(")")) {
      do e.args.push_back(parse_or());
      while (accept_punct(","));
      expect_punct(")");
    }
    return make(std::move(e));
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    Expr e;
    switch (t.kind) {
      case Tok::kPunct:
        if (accept_punct("(")) {
          auto inner = parse_or();
          expect_punct(")");
          return inner;
        }
        fail("unexpected token");
      case Tok::kVar:
        e.kind = Expr::Kind::kVariable;
        e.variable = take().text;
        return make(std::move(e));
      case Tok::kIri:
        e.constant = Term::iri(take().text);
        return make(std::move(e));
      case Tok::kPname: {
        std::string iri = resolve(take().text);
        if (accept_punct("(") ) {
          --pos_;
          if (!iri.starts_with(vocab::kXsd)) fail("unsupported function <" + iri + ">");
          return call(iri);
        }
        e.constant = Term::iri(std::move(iri));
        return make(std::move(e));
      }
      case Tok::kString: {
        Token s = take();
        if (!s.lang.empty()) e.constant = Term::lang_literal(s.text, s.lang);
        else if (!s.datatype.empty())
          e.constant = Term::literal(s.text, s.datatype_is_pname ? resolve(s.datatype) : s.datatype);
        else e.constant = Term::literal(s.text);
        return make(std::move(e));
      }
      case Tok::kNumber: {
        std::string text = take().text;
        std::string dt = text.find_first_of("eE") != std::string::npos ? "double"
                         : text.find('.') != std::string::npos      ? "decimal"
                                                                     : "integer";
        e.constant = Term::literal(text, vocab::xsd(dt));
        return make(std::move(e));
      }
      case Tok::kIdent: {
        std::string name = lower(take().text);
        if (name == "true" || name == "false") {
          e.constant = boolean_term(name == "true");
          return make(std::move(e));
        }
        if (!is_builtin(name)) fail("unknown function '" + name + "'");
        return call(name);
      }
      case Tok::kEnd:
        fail("unexpected end of expression");
    }
    fail("unexpected token");
  }

  std::vector<Token> toks_;
  const PrefixMap& prefixes_;
  std::size_t pos_ = 0;
};

// ---- evaluation ----

using Value = std::optional<Term>;

bool is_string_like(const Term& t) {
  if (!t.is_literal()) return false;
  const auto& l = t.as_literal();
  return l.datatype.empty() || l.datatype == vocab::xsd("string") || !l.language.empty();
}

bool is_integer_typed(const Term& t) {
  if (!t.is_literal()) return false;
  const auto& dt = t.as_literal().datatype;
  return is_numeric_datatype(dt) && dt != vocab::xsd("decimal") && dt != vocab::xsd("double") &&
         dt != vocab::xsd("float");
}

std::optional<bool> ebv(const Value& v) {
  if (!v) return std::nullopt;
  if (!v->is_literal()) return std::nullopt;
  const auto& l = v->as_literal();
  if (l.datatype == vocab::xsd("boolean")) return l.lexical == "true" || l.lexical == "1";
  if (auto n = numeric_value(*v)) return *n != 0 && !std::isnan(*n);
  if (is_numeric_datatype(l.datatype)) return false;
  if (is_string_like(*v)) return !l.lexical.empty();
  return std::nullopt;
}

Term number_term(double value, bool integer) {
  if (integer && std::isfinite(value) && std::abs(value) < 9.2e18) return Term::integer(static_cast<std::int64_t>(value));
  return Term::decimal(value);
}

// -1/0/1 for ordered comparison, nullopt on a type error.
std::optional<int> order_compare(const Term& a, const Term& b) {
  auto na = numeric_value(a), nb = numeric_value(b);
  if (na && nb) return *na < *nb ? -1 : (*na > *nb ? 1 : 0);
  if (a.is_literal() && b.is_literal() && !na && !nb) {
    const auto& la = a.as_literal();
    const auto& lb = b.as_literal();
    bool same_type = (is_string_like(a) && is_string_like(b) && la.language == lb.language) ||
                     (la.datatype == lb.datatype && la.language == lb.language);
    if (!same_type) return std::nullopt;
    int c = la.lexical.compare(lb.lexical);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  return std::nullopt;
}

std::optional<bool> equals(const Term& a, const Term& b) {
  auto na = numeric_value(a), nb = numeric_value(b);
  if (na && nb) return *na == *nb;
  return a == b;
}

std::optional<int> date_part(const Term& t, int part) {
  if (!t.is_literal()) return std::nullopt;
  const auto& l = t.as_literal();
  if (l.datatype != vocab::xsd("dateTime") && l.datatype != vocab::xsd("date")) return std::nullopt;
  const std::string& s = l.lexical;
  std::size_t i = 0;
  bool neg = !s.empty() && s[0] == '-';
  if (neg) ++i;
  std::size_t dash = s.find('-', i);
  if (dash == std::string::npos || dash + 6 > s.size()) return std::nullopt;
  int year = 0, month = 0, day = 0;
  if (std::from_chars(s.data() + i, s.data() + dash, year).ec != std::errc()) return std::nullopt;
  if (std::from_chars(s.data() + dash + 1, s.data() + dash + 3, month).ec != std::errc()) return std::nullopt;
  if (std::from_chars(s.data() + dash + 4, s.data() + dash + 6, day).ec != std::errc()) return std::nullopt;
  if (part == 0) return neg ? -year : year;
  return part == 1 ? month : day;
}

Value cast_to(const std::string& target, const Term& v) {
  std::string local = target.substr(vocab::kXsd.size());
  if (v.is_blank()) return std::nullopt;
  if (local == "string") return Term::literal(v.text(), vocab::xsd("string"));
  if (v.is_iri()) return std::nullopt;
  const std::string& lex = v.as_literal().lexical;
  if (local == "dateTime" || local == "date") {
    static const std::regex kDate(R"(-?\d{4,}-\d{2}-\d{2}(T\d{2}:\d{2}:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:\d{2})?)");
    if (!std::regex_match(lex, kDate)) return std::nullopt;
    return Term::literal(lex, target);
  }
  if (local == "integer" || local == "decimal" || local == "double" || local == "float") {
    auto n = numeric_value(Term::literal(lex, vocab::xsd("double")));
    if (!n) return std::nullopt;
    if (local == "integer") return Term::integer(static_cast<std::int64_t>(*n));
    return Term::literal(lex, target);
  }
  if (local == "boolean") {
    if (lex == "true" || lex == "1") return boolean_term(true);
    if (lex == "false" || lex == "0") return boolean_term(false);
    return std::nullopt;
  }
  return std::nullopt;
}

Value eval(const Expr& e, const Bindings& b);

Value eval_call(const Expr& e, const Bindings& b) {
  const std::string& f = e.op;
  if (f == "bound") {
    if (e.args.size() != 1 || e.args[0]->kind != Expr::Kind::kVariable) return std::nullopt;
    return boolean_term(b(e.args[0]->variable) != nullptr);
  }
  std::vector<Term> args;
  for (const auto& a : e.args) {
    auto v = eval(*a, b);
    if (!v) return std::nullopt;
    args.push_back(std::move(*v));
  }
  auto arity = [&](std::size_t n) { return args.size() == n; };
  if (f.starts_with(vocab::kXsd)) return arity(1) ? cast_to(f, args[0]) : std::nullopt;
  if (f == "str") {
    if (!arity(1) || args[0].is_blank()) return std::nullopt;
    return Term::literal(args[0].text());
  }
  if (f == "lang") {
    if (!arity(1) || !args[0].is_literal()) return std::nullopt;
    return Term::literal(args[0].as_literal().language);
  }
  if (f == "datatype") {
    if (!arity(1) || !args[0].is_literal()) return std::nullopt;
    const auto& l = args[0].as_literal();
    if (!l.language.empty()) return Term::iri(vocab::rdf("langString"));
    return Term::iri(l.datatype.empty() ? vocab::xsd("string") : l.datatype);
  }
  if (f == "isiri" || f == "isuri") return arity(1) ? Value(boolean_term(args[0].is_iri())) : std::nullopt;
  if (f == "isliteral") return arity(1) ? Value(boolean_term(args[0].is_literal())) : std::nullopt;
  if (f == "isblank") return arity(1) ? Value(boolean_term(args[0].is_blank())) : std::nullopt;
  if (f == "isnumeric") return arity(1) ? Value(boolean_term(numeric_value(args[0]).has_value())) : std::nullopt;
  if (f == "regex") {
    if (args.size() < 2 || args.size() > 3 || !is_string_like(args[0]) || !is_string_like(args[1]))
      return std::nullopt;
    auto flags = std::regex::ECMAScript;
    if (args.size() == 3 && args[2].text().find('i') != std::string::npos) flags |= std::regex::icase;
    try {
      return boolean_term(std::regex_search(args[0].text(), std::regex(args[1].text(), flags)));
    } catch (const std::regex_error&) {
      return std::nullopt;
    }
  }
  if (f == "contains" || f == "strstarts" || f == "strends") {
    if (!arity(2) || !is_string_like(args[0]) || !is_string_like(args[1])) return std::nullopt;
    const auto& h = args[0].text();
    const auto& n = args[1].text();
    bool r = f == "contains" ? h.find(n) != std::string::npos : f == "strstarts" ? h.starts_with(n) : h.ends_with(n);
    return boolean_term(r);
  }
  if (f == "strlen") {
    if (!arity(1) || !is_string_like(args[0])) return std::nullopt;
    std::int64_t n = 0;
    for (unsigned char c : args[0].text())
      if ((c & 0xC0) != 0x80) ++n;
    return Term::integer(n);
  }
  if (f == "lcase" || f == "ucase") {
    if (!arity(1) || !is_string_like(args[0])) return std::nullopt;
    std::string s = args[0].text();
    for (auto& c : s) c = static_cast<char>(f == "lcase" ? std::tolower(static_cast<unsigned char>(c))
                                                          : std::toupper(static_cast<unsigned char>(c)));
    auto lit = args[0].as_literal();
    lit.lexical = std::move(s);
    return Term(lit);
  }
  if (f == "year" || f == "month" || f == "day") {
    if (!arity(1)) return std::nullopt;
    auto part = date_part(args[0], f == "year" ? 0 : f == "month" ? 1 : 2);
    if (!part) return std::nullopt;
    return Term::integer(*part);
  }
  if (f == "abs") {
    if (!arity(1)) return std::nullopt;
    auto n = numeric_value(args[0]);
    if (!n) return std::nullopt;
    return number_term(std::abs(*n), is_integer_typed(args[0]));
  }
  return std::nullopt;
}

Value eval(const Expr& e, const Bindings& b) {
  switch (e.kind) {
    case Expr::Kind::kConstant:
      return e.constant;
    case Expr::Kind::kVariable: {
      const Term* t = b(e.variable);
      if (!t) return std::nullopt;
      return *t;
    }
    case Expr::Kind::kUnary: {
      auto v = eval(*e.args[0], b);
      if (e.op == "!") {
        auto bv = ebv(v);
        if (!bv) return std::nullopt;
        return boolean_term(!*bv);
      }
      if (!v) return std::nullopt;
      auto n = numeric_value(*v);
      if (!n) return std::nullopt;
      return number_term(e.op == "-" ? -*n : *n, is_integer_typed(*v));
    }
    case Expr::Kind::kBinary: {
      if (e.op == "||" || e.op == "&&") {
        auto l = ebv(eval(*e.args[0], b));
        auto r = ebv(eval(*e.args[1], b));
        if (e.op == "||") {
          if ((l && *l) || (r && *r)) return boolean_term(true);
          if (l && r) return boolean_term(false);
          return std::nullopt;
        }
        if ((l && !*l) || (r && !*r)) return boolean_term(false);
        if (l && r) return boolean_term(true);
        return std::nullopt;
      }
      auto l = eval(*e.args[0], b);
      auto r = eval(*e.args[1], b);
      if (!l || !r) return std::nullopt;
      if (e.op == "=" || e.op == "!=") {
        auto eq = equals(*l, *r);
        if (!eq) return std::nullopt;
        return boolean_term(e.op == "=" ? *eq : !*eq);
      }
      if (e.op == "<" || e.op == "<=" || e.op == ">" || e.op == ">=") {
        auto c = order_compare(*l, *r);
        if (!c) return std::nullopt;
        bool res = e.op == "<" ? *c < 0 : e.op == "<=" ? *c <= 0 : e.op == ">" ? *c > 0 : *c >= 0;
        return boolean_term(res);
      }
      auto nl = numeric_value(*l), nr = numeric_value(*r);
      if (!nl || !nr) return std::nullopt;
      bool ints = is_integer_typed(*l) && is_integer_typed(*r);
      if (e.op == "+") return number_term(*nl + *nr, ints);
      if (e.op == "-") return number_term(*nl - *nr, ints);
      if (e.op == "*") return number_term(*nl * *nr, ints);
      if (e.op == "/") {
        if (*nr == 0) return std::nullopt;
        return number_term(*nl / *nr, false);
      }
      return std::nullopt;
    }
    case Expr::Kind::kIn: {
      auto head = eval(*e.args[0], b);
      if (!head) return std::nullopt;
      bool found = false, error = false;
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        auto v = eval(*e.args[i], b);
        if (!v) {
          error = true;
          continue;
        }
        auto eq = equals(*head, *v);
        if (eq && *eq) found = true;
      }
      if (found) return boolean_term(e.op == "IN");
      if (error) return std::nullopt;
      return boolean_term(e.op != "IN");
    }
    case Expr::Kind::kCall:
      return eval_call(e, b);
  }
  return std::nullopt;
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::kVariable) out.insert(e.variable);
  for (const auto& a : e.args) collect_vars(*a, out);
}

}  // namespace

Term boolean_term(bool value) { return Term::literal(value ? "true" : "false", vocab::xsd("boolean")); }

ExprPtr parse_expression(std::string_view text, const PrefixMap& prefixes) {
  return Parser(Lexer(text).run(), prefixes).parse();
}

std::optional<Term> evaluate_expression(const Expr& expr, const Bindings& bindings) { return eval(expr, bindings); }

bool expression_holds(const Expr& expr, const Bindings& bindings) {
  auto v = ebv(eval(expr, bindings));
  return v && *v;
}

std::set<std::string> expression_variables(const Expr& expr) {
  std::set<std::string> out;
  collect_vars(expr, out);
  return out;
}

std::set<std::string> prefixes_in_text(std::string_view text) {
  std::set<std::string> out;
  for (const auto& t : Lexer(text).run()) {
    if (t.kind == Tok::kPname) out.insert(t.text.substr(0, t.text.find(':')));
    if (t.kind == Tok::kString && t.datatype_is_pname) out.insert(t.datatype.substr(0, t.datatype.find(':')));
  }
  return out;
}

ExprPtr rename_expression_variable(const ExprPtr& expr, const std::string& from, const std::string& to) {
  Expr copy = *expr;
  if (copy.kind == Expr::Kind::kVariable && copy.variable == from) copy.variable = to;
  for (auto& a : copy.args) a = rename_expression_variable(a, from, to);
  return std::make_shared<const Expr>(std::move(copy));
}

std::string rename_variable_in_text(std::string_view text, const std::string& from, const std::string& to) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != c) j += text[j] == '\\' ? 2 : 1;
      j = std::min(j + 1, text.size());
      out.append(text.substr(i, j - i));
      i = j;
      continue;
    }
    if ((c == '?' || c == '$') && text.substr(i + 1, from.size()) == from &&
        (i + 1 + from.size() == text.size() || !is_name_char(text[i + 1 + from.size()]))) {
      out += c;
      out += to;
      i += 1 + from.size();
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

}  // namespace kgframe
