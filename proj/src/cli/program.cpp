#include "kgframe/cli/program.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <variant>

#include "kgframe/error.hpp"

namespace kgframe {

namespace {

// ---- values of the call syntax ----

struct Value {
  enum class Kind { kString, kNumber, kIdent, kList, kDict };
  Kind kind = Kind::kString;
  std::string text;
  std::vector<Value> items;                          // kList (lists and tuples)
  std::vector<std::pair<Value, Value>> entries;      // kDict
};

struct Call {
  std::string name;
  std::vector<Value> args;
  std::vector<std::pair<std::string, Value>> kwargs;
};

struct Token {
  enum class Kind { kIdent, kString, kNumber, kPunct, kEnd };
  Kind kind;
  std::string text;
};

class Lexer {
 public:
  Lexer(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s_.size()) {
      char c = s_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '\'' || c == '"') {
        std::string v;
        std::size_t j = i + 1;
        while (j < s_.size() && s_[j] != c) {
          if (s_[j] == '\\' && j + 1 < s_.size()) {
            char e = s_[j + 1];
            // keep escapes other than the quote itself so regex patterns survive
            if (e == c || e == '\\') v += e;
            else {
              v += '\\';
              v += e;
            }
            j += 2;
            continue;
          }
          v += s_[j++];
        }
        if (j >= s_.size()) throw ParseError(line_, std::string(s_.substr(i, 10)), "unterminated string");
        out.push_back({Token::Kind::kString, v});
        i = j + 1;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && i + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i + 1])))) {
        std::size_t j = i + 1;
        while (j < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[j])) || s_[j] == '.')) ++j;
        out.push_back({Token::Kind::kNumber, std::string(s_.substr(i, j - i))});
        i = j;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i + 1;
        while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
        out.push_back({Token::Kind::kIdent, std::string(s_.substr(i, j - i))});
        i = j;
      } else if (std::string_view("()[]{},:.=").find(c) != std::string_view::npos) {
        out.push_back({Token::Kind::kPunct, std::string(1, c)});
        ++i;
      } else {
        throw ParseError(line_, std::string(1, c), "unexpected character");
      }
    }
    out.push_back({Token::Kind::kEnd, ""});
    return out;
  }

 private:
  std::string_view s_;
  std::size_t line_;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::size_t line) : t_(std::move(toks)), line_(line) {}

  const Token& peek() const { return t_[i_]; }
  bool at_punct(const char* p) const { return peek().kind == Token::Kind::kPunct && peek().text == p; }
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }

  void expect(const char* p) {
    if (!at_punct(p)) fail(std::string("expected '") + p + "'");
    ++i_;
  }

  std::string ident() {
    if (peek().kind != Token::Kind::kIdent) fail("expected a name");
    return t_[i_++].text;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, peek().text, what); }

  Value value() {
    const Token& tk = peek();
    Value v;
    switch (tk.kind) {
      case Token::Kind::kString:
        v.kind = Value::Kind::kString;
        v.text = t_[i_++].text;
        return v;
      case Token::Kind::kNumber:
        v.kind = Value::Kind::kNumber;
        v.text = t_[i_++].text;
        return v;
      case Token::Kind::kIdent:
        v.kind = Value::Kind::kIdent;
        v.text = t_[i_++].text;
        return v;
      case Token::Kind::kPunct:
        if (tk.text == "[" || tk.text == "(") {
          std::string close = tk.text == "[" ? "]" : ")";
          ++i_;
          v.kind = Value::Kind::kList;
          while (!at_punct(close.c_str())) {
            v.items.push_back(value());
            if (!at_punct(close.c_str())) expect(",");
          }
          ++i_;
          return v;
        }
        if (tk.text == "{") {
          ++i_;
          v.kind = Value::Kind::kDict;
          while (!at_punct("}")) {
            Value k = value();
            expect(":");
            v.entries.emplace_back(std::move(k), value());
            if (!at_punct("}")) expect(",");
          }
          ++i_;
          return v;
        }
        break;
      case Token::Kind::kEnd:
        break;
    }
    fail("expected a value");
  }

  Call call() {
    Call c;
    c.name = ident();
    expect("(");
    while (!at_punct(")")) {
      if (peek().kind == Token::Kind::kIdent && t_[i_ + 1].kind == Token::Kind::kPunct && t_[i_ + 1].text == "=") {
        std::string k = ident();
        expect("=");
        c.kwargs.emplace_back(k, value());
      } else {
        if (!c.kwargs.empty()) fail("positional argument after keyword argument");
        c.args.push_back(value());
      }
      if (!at_punct(")")) expect(",");
    }
    expect(")");
    return c;
  }

 private:
  std::vector<Token> t_;
  std::size_t i_ = 0;
  std::size_t line_;
};

// ---- statement evaluation ----

class Builder {
 public:
  FrameProgram& program() { return p_; }

  void statement(const std::string& text, std::size_t line) {
    line_ = line;
    static const std::regex kPrefix(R"(^prefix\s+([A-Za-z_][A-Za-z0-9_.\-]*)?:\s*<([^>]*)>\s*$)");
    static const std::regex kGraph(R"(^graph\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*<([^>]+)>\s*$)");
    static const std::regex kResult(R"(^result\s+([A-Za-z_][A-Za-z0-9_]*)\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, kPrefix)) {
      p_.prefixes.add(m[1].str(), m[2].str());
      return;
    }
    if (std::regex_match(text, m, kGraph)) {
      if (p_.graphs.count(m[1].str()) || p_.frames.count(m[1].str())) fail(m[1].str(), "name already defined");
      p_.graphs[m[1].str()] = m[2].str();
      return;
    }
    if (std::regex_match(text, m, kResult)) {
      if (!p_.result.empty()) fail(m[1].str(), "result already declared");
      if (!p_.frames.count(m[1].str())) fail(m[1].str(), "undefined frame");
      p_.result = m[1].str();
      return;
    }
    Parser ps(Lexer(text, line).run(), line);
    if (ps.peek().kind == Token::Kind::kIdent && ps.peek().text == "frame") ps.ident();
    std::string target = ps.ident();
    std::string base = target;
    if (ps.at_punct("=")) {
      ps.expect("=");
      base = ps.ident();
    } else if (!ps.at_punct(".")) {
      ps.fail("expected '=' or '.'");
    }
    std::vector<Call> calls;
    while (ps.at_punct(".")) {
      ps.expect(".");
      calls.push_back(ps.call());
    }
    if (!ps.at_end()) ps.fail("unexpected text after statement");
    if (calls.empty()) {
      if (!p_.frames.count(base)) fail(base, "undefined frame");
      p_.frames.insert_or_assign(target, p_.frames.at(base));
      return;
    }
    try {
      FrameDescriptor f = start(base, calls.front());
      for (std::size_t k = 1; k < calls.size(); ++k) f = apply(f, calls[k]);
      p_.frames.insert_or_assign(target, std::move(f));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_, "", e.what());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& tok, const std::string& what) const { throw ParseError(line_, tok, what); }

  std::string str(const Value& v, const char* what) const {
    if (v.kind == Value::Kind::kList || v.kind == Value::Kind::kDict) fail(v.text, std::string("expected ") + what);
    return v.text;
  }

  std::vector<std::string> str_list(const Value& v) const {
    if (v.kind != Value::Kind::kList) return {str(v, "a name")};
    std::vector<std::string> out;
    for (const auto& i : v.items) out.push_back(str(i, "a name"));
    return out;
  }

  const Value* kwarg(const Call& c, const std::string& name) const {
    for (const auto& [k, v] : c.kwargs)
      if (k == name) return &v;
    return nullptr;
  }

  static bool truthy(const Value& v) { return v.text == "True" || v.text == "true" || v.text == "1"; }

  void arity(const Call& c, std::size_t lo, std::size_t hi) const {
    if (c.args.size() < lo || c.args.size() > hi)
      fail(c.name, "wrong number of arguments (" + std::to_string(c.args.size()) + ")");
  }

  static bool plain_name(const std::string& s) { return is_valid_column_name(s); }

  PatternTerm position(const Value& v, const KnowledgeGraph& g) const {
    std::string s = str(v, "a term");
    if (v.kind == Value::Kind::kNumber) return parse_term_value(s, g.prefixes());
    if (!s.empty() && s.front() == '?') return Variable{s.substr(1)};
    if (v.kind == Value::Kind::kIdent || plain_name(s)) return Variable{s};
    if (!s.empty() && (s.front() == '"' || s.front() == '\'')) return parse_term_value(s, g.prefixes());
    return Term::iri(g.resolve(s));
  }

  FrameDescriptor start(const std::string& base, const Call& c) {
    if (p_.frames.count(base)) return apply(p_.frames.at(base), c);
    auto it = p_.graphs.find(base);
    if (it == p_.graphs.end()) fail(base, "undefined graph or frame");
    KnowledgeGraph g(it->second, p_.prefixes);
    if (c.name == "seed") {
      arity(c, 3, 3);
      return g.seed(position(c.args[0], g), position(c.args[1], g), position(c.args[2], g));
    }
    if (c.name == "feature_domain_range") {
      arity(c, 3, 3);
      std::string pred = str(c.args[0], "a predicate");
      // all three plain names: (subject, predicate, object) columns
      if (plain_name(pred)) return g.seed(Variable{pred}, position(c.args[1], g), position(c.args[2], g));
      return g.feature_domain_range(pred, str(c.args[1], "a column"), str(c.args[2], "a column"));
    }
    if (c.name == "entities") {
      arity(c, 2, 2);
      return g.entities(str(c.args[0], "a class"), str(c.args[1], "a column"));
    }
    if (c.name == "explore_classes") {
      arity(c, 0, 0);
      return g.explore_classes();
    }
    fail(c.name, "unknown graph operation");
  }

  static JoinType join_type(const std::string& s) {
    std::string l;
    for (char ch : s)
      if (ch != '_') l += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (l == "innerjoin" || l == "inner") return JoinType::kInner;
    if (l == "leftouterjoin" || l == "leftouter" || l == "left" || l == "leftjoin") return JoinType::kLeftOuter;
    if (l == "rightouterjoin" || l == "rightouter" || l == "right" || l == "rightjoin") return JoinType::kRightOuter;
    if (l == "outerjoin" || l == "fullouterjoin" || l == "fullouter" || l == "full" || l == "outer")
      return JoinType::kFullOuter;
    throw FrameError("unknown join type '" + s + "'");
  }

  static void flag(const std::string& f, ExpandStep& step) {
    std::string l;
    for (char ch : f) l += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (l == "incoming" || l == "in") step.dir = Direction::kIn;
    else if (l == "outgoing" || l == "out") step.dir = Direction::kOut;
    else if (l == "optional") step.optional = true;
    else throw FrameError("unknown expand flag '" + f + "'");
  }

  std::vector<Condition> conditions(const Value& v, const FrameDescriptor& f) const {
    std::vector<Condition> out;
    auto one = [&](const Value& x) { out.push_back(parse_condition(str(x, "a condition"), f.prefixes())); };
    if (v.kind == Value::Kind::kList)
      for (const auto& x : v.items) one(x);
    else
      one(v);
    return out;
  }

  bool distinct_flag(const Call& c, std::size_t pos) const {
    if (const Value* u = kwarg(c, "unique")) return truthy(*u);
    if (const Value* u = kwarg(c, "distinct")) return truthy(*u);
    return c.args.size() > pos && truthy(c.args[pos]);
  }

  FrameDescriptor apply(const FrameDescriptor& f, const Call& c) {
    const std::string& n = c.name;
    if (n == "expand") {
      if (c.args.size() >= 2 && c.args[1].kind == Value::Kind::kList) {
        arity(c, 2, 2);
        std::vector<ExpandStep> steps;
        for (const auto& item : c.args[1].items) {
          if (item.kind != Value::Kind::kList || item.items.size() < 2) fail(n, "expand steps are (predicate, column[, flags])");
          ExpandStep s{str(item.items[0], "a predicate"), str(item.items[1], "a column")};
          for (std::size_t k = 2; k < item.items.size(); ++k) flag(str(item.items[k], "a flag"), s);
          steps.push_back(s);
        }
        return f.expand(str(c.args[0], "a column"), steps);
      }
      if (c.args.size() < 3) fail(n, "expand needs a column, a predicate and a new column");
      ExpandStep s{str(c.args[1], "a predicate"), str(c.args[2], "a column")};
      for (std::size_t k = 3; k < c.args.size(); ++k) flag(str(c.args[k], "a flag"), s);
      return f.expand(str(c.args[0], "a column"), s.predicate, s.new_col, s.dir, s.optional);
    }
    if (n == "filter") {
      arity(c, 1, 1);
      if (c.args[0].kind != Value::Kind::kDict) fail(n, "filter takes a {column: [conditions]} map");
      std::vector<std::pair<std::string, std::vector<Condition>>> conds;
      for (const auto& [k, v] : c.args[0].entries) conds.emplace_back(str(k, "a column"), conditions(v, f));
      return f.filter(conds);
    }
    if (n == "select_cols") {
      arity(c, 1, 1);
      return f.select_cols(str_list(c.args[0]));
    }
    if (n == "join") {
      arity(c, 3, 5);
      std::string other_name = str(c.args[0], "a frame name");
      if (!p_.frames.count(other_name)) fail(other_name, "undefined frame");
      const FrameDescriptor& other = p_.frames.at(other_name);
      std::string col = str(c.args[1], "a column");
      std::string col2 = col, type_text, new_col;
      if (c.args.size() == 3) {
        type_text = str(c.args[2], "a join type");
      } else {
        col2 = str(c.args[2], "a column");
        type_text = str(c.args[3], "a join type");
        if (c.args.size() == 5) new_col = str(c.args[4], "a column");
      }
      if (const Value* v = kwarg(c, "new_col")) new_col = str(*v, "a column");
      if (new_col.empty()) new_col = col;
      return f.join(other, col, col2, join_type(type_text), new_col);
    }
    if (n == "group_by") {
      arity(c, 1, 1);
      return f.group_by(str_list(c.args[0]));
    }
    if (n == "count" || n == "sum" || n == "avg" || n == "average" || n == "min" || n == "max" || n == "sample") {
      arity(c, 2, 3);
      AggFn fn = agg_fn_from_string(n == "average" ? "avg" : n);
      return f.aggregation(fn, str(c.args[0], "a column"), str(c.args[1], "a column"), distinct_flag(c, 2));
    }
    if (n == "aggregation" || n == "aggregate") {
      arity(c, 3, 4);
      AggFn fn = agg_fn_from_string(str(c.args[0], "a function name"));
      std::string col = str(c.args[1], "a column"), out = str(c.args[2], "a column");
      bool d = distinct_flag(c, 3);
      return n == "aggregation" ? f.aggregation(fn, col, out, d) : f.aggregate(fn, col, out, d);
    }
    if (n == "sort") {
      arity(c, 1, 1);
      std::vector<std::pair<std::string, SortOrder>> keys;
      auto order = [&](const Value& v) {
        std::string s = str(v, "asc or desc");
        for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (s == "asc" || s == "ascending") return SortOrder::kAsc;
        if (s == "desc" || s == "descending") return SortOrder::kDesc;
        fail(v.text, "sort order must be asc or desc");
      };
      const Value& a = c.args[0];
      if (a.kind == Value::Kind::kDict) {
        for (const auto& [k, v] : a.entries) keys.emplace_back(str(k, "a column"), order(v));
      } else if (a.kind == Value::Kind::kList) {
        for (const auto& item : a.items) {
          if (item.kind == Value::Kind::kList && item.items.size() == 2)
            keys.emplace_back(str(item.items[0], "a column"), order(item.items[1]));
          else
            keys.emplace_back(str(item, "a column"), SortOrder::kAsc);
        }
      } else {
        keys.emplace_back(str(a, "a column"), SortOrder::kAsc);
      }
      return f.sort(keys);
    }
    if (n == "head") {
      arity(c, 1, 2);
      auto num = [&](const Value& v) {
        if (v.kind != Value::Kind::kNumber) fail(v.text, "expected an integer");
        return static_cast<std::int64_t>(std::stoll(v.text));
      };
      std::int64_t off = c.args.size() > 1 ? num(c.args[1]) : 0;
      if (const Value* v = kwarg(c, "offset")) off = num(*v);
      return f.head(num(c.args[0]), off);
    }
    if (n == "cache") {
      arity(c, 0, 0);
      return f.cache();
    }
    fail(n, "unknown frame operation");
  }

  FrameProgram p_;
  std::size_t line_ = 0;
};

// Strips a comment that starts outside strings and <...> IRIs.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  bool iri = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
    } else if (iri) {
      if (c == '>') iri = false;
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == '<') {
      iri = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

int depth_change(const std::string& s) {
  int d = 0;
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == '(' || c == '[' || c == '{') {
      ++d;
    } else if (c == ')' || c == ']' || c == '}') {
      --d;
    }
  }
  return d;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

FrameProgram parse_program(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> statements;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  std::string current;
  std::size_t start = 0;
  int depth = 0;
  bool continued = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string l = trim(strip_comment(raw));
    if (l.empty()) continue;
    bool joins = !current.empty() && (depth > 0 || continued || l.front() == '.');
    if (!joins && !current.empty()) {
      statements.emplace_back(start, current);
      current.clear();
    }
    if (current.empty()) start = lineno;
    continued = l.back() == '\\';
    if (continued) l = trim(l.substr(0, l.size() - 1));
    current += (current.empty() ? "" : " ") + l;
    depth += depth_change(l);
  }
  if (!current.empty()) statements.emplace_back(start, current);
  if (depth != 0) throw ParseError(start, "", "unbalanced brackets");

  Builder b;
  for (const auto& [line, s] : statements) b.statement(s, line);
  FrameProgram p = std::move(b.program());
  if (p.frames.empty()) throw ParseError(lineno, "", "program defines no frame");
  if (p.result.empty()) throw ParseError(lineno, "", "program has no 'result' line");
  return p;
}

FrameProgram load_program(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read program file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_program(ss.str());
}

}  // namespace kgframe
