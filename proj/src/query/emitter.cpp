#include "kgframe/query/emitter.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "kgframe/frame/expression.hpp"

namespace kgframe {

namespace {

std::string agg_text(const Aggregation& a) {
  return std::string(to_string(a.fn)) + "(" + (a.distinct ? "DISTINCT " : "") + "?" + a.source + ")";
}

// Replaces ?var in SPARQL text by `replacement`, leaving strings alone.
std::string substitute(const std::string& text, const std::string& var, const std::string& replacement) {
  static const std::string kMark = "kgframe_agg_placeholder";
  std::string marked = rename_variable_in_text(text, var, kMark);
  std::string out;
  const std::string needle = "?" + kMark;
  std::size_t pos = 0;
  for (;;) {
    auto hit = marked.find(needle, pos);
    if (hit == std::string::npos) break;
    out.append(marked, pos, hit - pos);
    out += replacement;
    pos = hit + needle.size();
  }
  out.append(marked, pos, std::string::npos);
  return out;
}

class Emitter {
 public:
  explicit Emitter(const QueryModel& top) : prefixes_(top.prefixes), named_(top.from.size() > 1) {}

  std::string run(const QueryModel& m) {
    query(m, 0, true);
    std::string body;
    for (const auto& l : lines_) body += l + "\n";
    std::set<std::string> names;
    for (const auto& p : used_)
      if (prefixes_.lookup(p)) names.insert(p);
    std::string head;
    for (const auto& p : names) head += "PREFIX " + p + ": <" + *prefixes_.lookup(p) + ">\n";
    if (!head.empty()) head += "\n";
    return head + body;
  }

 private:
  void line(int ind, const std::string& s) { lines_.push_back(std::string(static_cast<std::size_t>(ind), ' ') + s); }
  void append(const std::string& s) { lines_.back() += s; }

  std::string term(const PatternTerm& t) {
    if (const auto* v = std::get_if<Variable>(&t)) return "?" + v->name;
    return render_term(std::get<Term>(t), prefixes_, &used_);
  }

  std::string projection(const QueryModel& m) {
    std::string s;
    auto add = [&](const std::string& piece) { s += (s.empty() ? "" : " ") + piece; };
    auto agg_for = [&](const std::string& v) -> const Aggregation* {
      for (const auto& a : m.aggregations)
        if (a.target == v) return &a;
      return nullptr;
    };
    if (m.select.empty()) {
      if (!m.grouped()) return "*";
      for (const auto& g : m.group_by) add("?" + g);
      for (const auto& a : m.aggregations) add("(" + agg_text(a) + " AS ?" + a.target + ")");
      return s;
    }
    for (const auto& v : m.select) {
      const Aggregation* a = m.grouped() ? agg_for(v) : nullptr;
      add(a ? "(" + agg_text(*a) + " AS ?" + v + ")" : "?" + v);
    }
    return s;
  }

  std::string clause(const FilterClause& c, const QueryModel* grouped) {
    std::vector<std::string> parts;
    for (const auto& t : c.terms) {
      std::string text = render_condition(t.var, t.cond, prefixes_, &used_);
      if (grouped)
        for (const auto& a : grouped->aggregations) text = substitute(text, a.target, agg_text(a));
      parts.push_back(text);
    }
    if (parts.size() == 1) return "( " + parts[0] + " )";
    std::string s = "( ";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " && ( " : "( ") + parts[i] + " )";
    return s + " )";
  }

  void filter_line(const FilterClause& c, int ind) {
    if (c.terms.size() == 1 && c.terms[0].cond.kind == Condition::Kind::kRegex) {
      line(ind, "FILTER " + render_condition(c.terms[0].var, c.terms[0].cond, prefixes_, &used_));
      return;
    }
    line(ind, "FILTER " + clause(c, nullptr));
  }

  void query(const QueryModel& m, int ind, bool top) {
    line(ind, std::string("SELECT ") + (m.distinct ? "DISTINCT " : "") + projection(m));
    if (top) {
      if (m.from.size() == 1) line(ind, "FROM <" + m.from[0] + ">");
      else
        for (const auto& g : m.from) line(ind, "FROM NAMED <" + g + ">");
    }
    line(ind, "WHERE");
    group(m.where, ind + 2);
    if (!m.group_by.empty()) {
      std::string s = "GROUP BY";
      for (const auto& g : m.group_by) s += " ?" + g;
      line(ind, s);
    }
    if (!m.having.empty()) {
      std::string s = "HAVING";
      for (const auto& h : m.having) s += " " + clause(h, &m);
      line(ind, s);
    }
    if (!m.order.empty()) {
      std::string s = "ORDER BY";
      for (const auto& o : m.order) s += std::string(o.order == SortOrder::kAsc ? " ASC(?" : " DESC(?") + o.var + ")";
      line(ind, s);
    }
    if (m.limit) line(ind, "LIMIT " + std::to_string(*m.limit));
    if (m.offset) line(ind, "OFFSET " + std::to_string(*m.offset));
  }

  void subquery(const QueryModel& q, int ind) {
    line(ind, "{");
    query(q, ind + 2, false);
    line(ind, "}");
  }

  // Consecutive triples, same-subject ones abbreviated with ';'.
  void triple_run(const std::vector<const TripleElem*>& run, int ind) {
    std::string last_subject;
    for (std::size_t i = 0; i < run.size(); ++i) {
      const auto& p = run[i]->pattern;
      std::string s = term(p.subject), pr = term(p.predicate), o = term(p.object);
      if (i > 0 && s == last_subject) {
        append(" ;");
        line(ind + static_cast<int>(s.size()) + 1, pr + " " + o);
      } else {
        if (i > 0) append(" .");
        line(ind, s + " " + pr + " " + o);
      }
      last_subject = s;
    }
  }

  void group(const PatternGroup& g, int ind) {
    line(ind, "{");
    const int in = ind + 2;
    bool filters_done = false;
    auto flush_filters = [&] {
      if (filters_done) return;
      filters_done = true;
      for (const auto& f : g.filters) filter_line(f, in);
    };
    std::size_t i = 0;
    while (i < g.elements.size()) {
      if (std::holds_alternative<TripleElem>(g.elements[i])) {
        std::vector<const TripleElem*> run;
        const std::string graph = std::get<TripleElem>(g.elements[i]).graph;
        while (i < g.elements.size()) {
          const auto* t = std::get_if<TripleElem>(&g.elements[i]);
          if (!t || (named_ && t->graph != graph)) break;
          run.push_back(t);
          ++i;
        }
        if (named_ && !graph.empty()) {
          line(in, "GRAPH <" + graph + ">");
          line(in + 2, "{");
          triple_run(run, in + 4);
          line(in + 2, "}");
        } else {
          triple_run(run, in);
        }
        // filters follow the leading run of triples
        if (i == g.elements.size() || !std::holds_alternative<TripleElem>(g.elements[i])) flush_filters();
        continue;
      }
      flush_filters();
      const Element& e = g.elements[i++];
      if (const auto* o = std::get_if<OptionalElem>(&e)) {
        line(in, "OPTIONAL");
        const PatternGroup& og = *o->group;
        const auto* only = og.elements.size() == 1 && og.filters.empty() ? std::get_if<SubqueryElem>(&og.elements[0])
                                                                         : nullptr;
        if (only) subquery(*only->query, in + 2);
        else group(og, in + 2);
      } else if (const auto* s = std::get_if<SubqueryElem>(&e)) {
        subquery(*s->query, in);
      } else if (const auto* u = std::get_if<UnionElem>(&e)) {
        line(in, "{");
        for (std::size_t b = 0; b < u->branches.size(); ++b) {
          if (b) line(in + 2, "UNION");
          subquery(*u->branches[b], in + 2);
        }
        line(in, "}");
      }
    }
    flush_filters();
    line(ind, "}");
  }

  const PrefixMap& prefixes_;
  bool named_;
  std::vector<std::string> lines_;
  std::vector<std::string> used_;
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '%' ||
         static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

std::string emit_sparql(const QueryModel& m) { return Emitter(m).run(m); }

std::vector<std::string> sparql_tokens(std::string_view text) {
  std::vector<std::string> raw;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (c == '<') {
      std::size_t j = i + 1;
      while (j < n && text[j] != '>' && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '<' &&
             text[j] != '"' && text[j] != '{' && text[j] != '}')
        ++j;
      if (j < n && text[j] == '>') {
        raw.emplace_back(text.substr(i, j + 1 - i));
        i = j + 1;
        continue;
      }
      bool eq = i + 1 < n && text[i + 1] == '=';
      raw.emplace_back(eq ? "<=" : "<");
      i += eq ? 2 : 1;
      continue;
    }
    if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < n && text[j] != c) j += text[j] == '\\' ? 2 : 1;
      j = std::min(j + 1, n);
      if (j < n && text[j] == '@') {
        ++j;
        while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '-')) ++j;
      }
      raw.emplace_back(text.substr(i, j - i));
      i = j;
      continue;
    }
    if ((c == '?' || c == '$') && i + 1 < n && name_char(text[i + 1])) {
      std::size_t j = i + 1;
      while (j < n && name_char(text[j])) ++j;
      raw.push_back("?" + std::string(text.substr(i + 1, j - i - 1)));
      i = j;
      continue;
    }
    if (name_char(c)) {
      std::size_t j = i;
      while (j < n && (name_char(text[j]) || (text[j] == '.' && j + 1 < n && name_char(text[j + 1])))) ++j;
      std::string w(text.substr(i, j - i));
      if (w.find(':') == std::string::npos)
        std::transform(w.begin(), w.end(), w.begin(), [](unsigned char ch) { return std::toupper(ch); });
      raw.push_back(std::move(w));
      i = j;
      continue;
    }
    static const char* kTwo[] = {"&&", "||", "!=", ">=", "^^"};
    bool matched = false;
    for (const char* two : kTwo)
      if (text.substr(i, 2) == two) {
        raw.emplace_back(two);
        i += 2;
        matched = true;
        break;
      }
    if (matched) continue;
    raw.emplace_back(1, c);
    ++i;
  }

  std::size_t start = 0;
  while (start < raw.size()) {
    if (raw[start] == "PREFIX" && start + 2 < raw.size()) start += 3;
    else if (raw[start] == "BASE" && start + 1 < raw.size()) start += 2;
    else break;
  }
  static const std::set<std::string> kAfterDot = {"}", "FILTER", "OPTIONAL", "{", "UNION"};
  std::vector<std::string> out;
  for (std::size_t k = start; k < raw.size(); ++k) {
    if (raw[k] == "." && k + 1 < raw.size() && kAfterDot.count(raw[k + 1])) continue;
    out.push_back(raw[k]);
  }
  return out;
}

bool token_equal(std::string_view a, std::string_view b) { return sparql_tokens(a) == sparql_tokens(b); }

}  // namespace kgframe
