#include "kgframe/query/model.hpp"

#include <algorithm>
#include <sstream>

#include "kgframe/error.hpp"

namespace kgframe {

namespace {

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

void rename_pattern_term(PatternTerm& t, const std::string& from, const std::string& to) {
  if (auto* v = std::get_if<Variable>(&t); v && v->name == from) v->name = to;
}

void rename_clause(FilterClause& c, const std::string& from, const std::string& to) {
  for (auto& term : c.terms) {
    if (term.var == from) term.var = to;
    term.cond = term.cond.renamed(from, to);
  }
}

void rename_all(QueryModel& m, const std::string& from, const std::string& to);

void rename_group(PatternGroup& g, const std::string& from, const std::string& to) {
  for (auto& e : g.elements) {
    if (auto* t = std::get_if<TripleElem>(&e)) {
      rename_pattern_term(t->pattern.subject, from, to);
      rename_pattern_term(t->pattern.predicate, from, to);
      rename_pattern_term(t->pattern.object, from, to);
    } else if (auto* o = std::get_if<OptionalElem>(&e)) {
      rename_group(*o->group, from, to);
    } else if (auto* s = std::get_if<SubqueryElem>(&e)) {
      if (contains(visible_vars(*s->query), from)) rename_variable(*s->query, from, to);
    } else if (auto* u = std::get_if<UnionElem>(&e)) {
      for (auto& b : u->branches)
        if (contains(visible_vars(*b), from)) rename_variable(*b, from, to);
    }
  }
  for (auto& f : g.filters) rename_clause(f, from, to);
}

void rename_all(QueryModel& m, const std::string& from, const std::string& to) {
  for (auto& v : m.select)
    if (v == from) v = to;
  for (auto& v : m.group_by)
    if (v == from) v = to;
  for (auto& a : m.aggregations) {
    if (a.source == from) a.source = to;
    if (a.target == from) a.target = to;
  }
  for (auto& h : m.having) rename_clause(h, from, to);
  for (auto& o : m.order)
    if (o.var == from) o.var = to;
  rename_group(m.where, from, to);
}

void merge_prefixes(PrefixMap& into, const PrefixMap& from) {
  for (const auto& [p, ns] : from.entries())
    if (!into.lookup(p)) into.add(p, ns);
}

std::string term_text(const PatternTerm& t) {
  if (const auto* v = std::get_if<Variable>(&t)) return "?" + v->name;
  return std::get<Term>(t).to_ntriples();
}

const char* kind_name(Condition::Kind k) {
  switch (k) {
    case Condition::Kind::kCompare: return "compare";
    case Condition::Kind::kIsUri: return "isIRI";
    case Condition::Kind::kIsLiteral: return "isLiteral";
    case Condition::Kind::kRegex: return "regex";
    case Condition::Kind::kIn: return "in";
    case Condition::Kind::kRaw: return "raw";
  }
  return "?";
}

std::string clause_text(const FilterClause& c) {
  std::string out;
  for (std::size_t i = 0; i < c.terms.size(); ++i) {
    const auto& t = c.terms[i];
    if (i) out += " && ";
    out += std::string(kind_name(t.cond.kind)) + "(";
    if (t.cond.kind == Condition::Kind::kRaw) {
      out += t.cond.raw;
    } else {
      out += "?" + t.var;
      if (t.cond.kind == Condition::Kind::kCompare) out += " " + t.cond.op + " " + t.cond.operand.to_ntriples();
      if (t.cond.kind == Condition::Kind::kRegex) out += ", \"" + t.cond.pattern + "\"";
      for (const auto& l : t.cond.list) out += ", " + l.to_ntriples();
    }
    out += ")";
  }
  return out;
}

void dump_group(std::ostringstream& os, const PatternGroup& g, int depth);

void dump_query(std::ostringstream& os, const QueryModel& m, int depth) {
  std::string pad(depth * 2, ' ');
  os << pad << "query";
  if (m.distinct) os << " distinct";
  os << " select=[";
  for (std::size_t i = 0; i < m.select.size(); ++i) os << (i ? " " : "") << m.select[i];
  os << "]";
  if (!m.from.empty()) {
    os << " from=[";
    for (std::size_t i = 0; i < m.from.size(); ++i) os << (i ? " " : "") << m.from[i];
    os << "]";
  }
  os << "\n";
  dump_group(os, m.where, depth + 1);
  if (m.grouped()) {
    os << pad << "  group_by [";
    for (std::size_t i = 0; i < m.group_by.size(); ++i) os << (i ? " " : "") << m.group_by[i];
    os << "]";
    for (const auto& a : m.aggregations)
      os << " " << to_string(a.fn) << "(" << (a.distinct ? "DISTINCT " : "") << "?" << a.source << ")->?" << a.target;
    os << "\n";
  }
  for (const auto& h : m.having) os << pad << "  having " << clause_text(h) << "\n";
  if (!m.order.empty()) {
    os << pad << "  order";
    for (const auto& o : m.order) os << " " << (o.order == SortOrder::kAsc ? "asc" : "desc") << "(?" << o.var << ")";
    os << "\n";
  }
  if (m.limit) os << pad << "  limit " << *m.limit << "\n";
  if (m.offset) os << pad << "  offset " << *m.offset << "\n";
}

void dump_group(std::ostringstream& os, const PatternGroup& g, int depth) {
  std::string pad(depth * 2, ' ');
  for (const auto& e : g.elements) {
    if (const auto* t = std::get_if<TripleElem>(&e)) {
      os << pad << "triple " << term_text(t->pattern.subject) << " " << term_text(t->pattern.predicate) << " "
         << term_text(t->pattern.object) << " @<" << t->graph << ">\n";
    } else if (const auto* o = std::get_if<OptionalElem>(&e)) {
      os << pad << "optional\n";
      dump_group(os, *o->group, depth + 1);
    } else if (const auto* s = std::get_if<SubqueryElem>(&e)) {
      os << pad << "subquery\n";
      dump_query(os, *s->query, depth + 1);
    } else if (const auto* u = std::get_if<UnionElem>(&e)) {
      os << pad << "union\n";
      for (const auto& b : u->branches) {
        os << pad << "  branch\n";
        dump_query(os, *b, depth + 2);
      }
    }
  }
  for (const auto& f : g.filters) os << pad << "filter " << clause_text(f) << "\n";
}

void validate_group(const PatternGroup& g);

void validate_query(const QueryModel& m) {
  validate_group(m.where);
  auto scope = scope_vars(m.where);
  std::vector<std::string> targets;
  for (const auto& a : m.aggregations) {
    if (!contains(scope, a.source)) throw ModelError("aggregation source ?" + a.source + " not in scope");
    if (contains(scope, a.target)) throw ModelError("aggregation target ?" + a.target + " already in scope");
    targets.push_back(a.target);
  }
  for (const auto& g : m.group_by)
    if (!contains(scope, g)) throw ModelError("group-by variable ?" + g + " not in scope");
  for (const auto& v : m.select) {
    bool ok = m.grouped() ? (contains(m.group_by, v) || contains(targets, v)) : contains(scope, v);
    if (!ok) throw ModelError("selected variable ?" + v + " not in scope");
  }
  for (const auto& h : m.having)
    for (const auto& v : clause_vars(h))
      if (!contains(targets, v) && !contains(m.group_by, v))
        throw ModelError("having condition names ?" + v + " which is not grouped or aggregated");
  if (!m.having.empty() && !m.grouped()) throw ModelError("having without grouping");
  auto visible = visible_vars(m);
  for (const auto& o : m.order)
    if (!contains(visible, o.var)) throw ModelError("order variable ?" + o.var + " not visible");
  if ((m.limit && *m.limit < 0) || (m.offset && *m.offset < 0)) throw ModelError("negative limit/offset");
}

void validate_group(const PatternGroup& g) {
  for (const auto& e : g.elements) {
    if (const auto* o = std::get_if<OptionalElem>(&e)) {
      if (o->group->empty()) throw ModelError("empty OPTIONAL block");
      validate_group(*o->group);
    } else if (const auto* s = std::get_if<SubqueryElem>(&e)) {
      validate_query(*s->query);
    } else if (const auto* u = std::get_if<UnionElem>(&e)) {
      if (u->branches.size() < 2) throw ModelError("union node needs at least two branches");
      std::set<std::string> first;
      for (std::size_t i = 0; i < u->branches.size(); ++i) {
        validate_query(*u->branches[i]);
        auto vis = visible_vars(*u->branches[i]);
        std::set<std::string> vs(vis.begin(), vis.end());
        if (i == 0) first = vs;
        else if (vs != first) throw ModelError("union branches expose different variables");
      }
    }
  }
}

}  // namespace

void PatternGroup::add_triple(TripleElem t) {
  auto it = elements.end();
  for (auto i = elements.begin(); i != elements.end(); ++i)
    if (std::holds_alternative<TripleElem>(*i) || std::holds_alternative<OptionalElem>(*i)) it = i;
  if (it == elements.end()) {
    elements.insert(elements.begin(), std::move(t));
  } else {
    elements.insert(it + 1, std::move(t));
  }
}

void PatternGroup::add_element(Element e) {
  if (auto* t = std::get_if<TripleElem>(&e)) add_triple(std::move(*t));
  else elements.push_back(std::move(e));
}

void QueryModel::add_triple(const TriplePattern& p, const std::string& graph) { where.add_triple({p, graph}); }

void QueryModel::add_filter(FilterClause f) { where.add_filter(std::move(f)); }

void QueryModel::add_optional_block(PatternGroup g) {
  if (g.empty()) throw ModelError("empty OPTIONAL block");
  where.add_element(OptionalElem{std::move(g)});
}

void QueryModel::set_grouping(std::vector<std::string> vars, std::vector<Aggregation> aggs) {
  if (grouped()) throw ModelError("grouping already set on this model");
  group_by = std::move(vars);
  aggregations = std::move(aggs);
}

void QueryModel::add_having(FilterClause f) {
  if (!grouped()) throw ModelError("having on an ungrouped model");
  having.push_back(std::move(f));
}

void QueryModel::set_modifiers(std::vector<OrderSpec> o, std::optional<std::int64_t> l,
                               std::optional<std::int64_t> off) {
  if ((l && *l < 0) || (off && *off < 0)) throw ModelError("limit and offset must be non-negative");
  order = std::move(o);
  limit = l;
  offset = off;
}

QueryModel new_model(PrefixMap prefixes, std::vector<std::string> from) {
  QueryModel m;
  m.prefixes = std::move(prefixes);
  m.from = std::move(from);
  return m;
}

QueryModel wrap_as_subquery(QueryModel inner) {
  QueryModel outer = new_model(inner.prefixes, std::move(inner.from));
  inner.from.clear();
  outer.where.elements.push_back(SubqueryElem{std::move(inner)});
  return outer;
}

QueryModel union_models(QueryModel a, QueryModel b) {
  auto va = visible_vars(a), vb = visible_vars(b);
  if (std::set<std::string>(va.begin(), va.end()) != std::set<std::string>(vb.begin(), vb.end()))
    throw ModelError("union branches expose different variables");
  QueryModel out = new_model(a.prefixes, a.from);
  merge_prefixes(out.prefixes, b.prefixes);
  for (const auto& g : b.from) push_unique(out.from, g);
  a.from.clear();
  b.from.clear();
  UnionElem u;
  u.branches.emplace_back(std::move(a));
  u.branches.emplace_back(std::move(b));
  out.where.elements.push_back(std::move(u));
  return out;
}

QueryModel merge_models(QueryModel a, const QueryModel& b) {
  if (a.grouped() || b.grouped()) throw ModelError("cannot merge a grouped model; nest it instead");
  bool project = !a.select.empty() || !b.select.empty();
  std::vector<std::string> select;
  if (project) {
    select = visible_vars(a);
    for (const auto& v : visible_vars(b)) push_unique(select, v);
  }
  merge_prefixes(a.prefixes, b.prefixes);
  for (const auto& g : b.from) push_unique(a.from, g);
  for (const auto& e : b.where.elements) a.where.add_element(e);
  for (const auto& f : b.where.filters) a.where.add_filter(f);
  a.select = std::move(select);
  if (b.limit) a.limit = a.limit ? std::max(*a.limit, *b.limit) : *b.limit;
  if (b.offset) a.offset = a.offset ? std::min(*a.offset, *b.offset) : *b.offset;
  return a;
}

std::vector<std::string> scope_vars(const PatternGroup& g) {
  std::vector<std::string> out;
  for (const auto& e : g.elements) {
    if (const auto* t = std::get_if<TripleElem>(&e)) {
      for (const auto& v : t->pattern.variables()) push_unique(out, v);
    } else if (const auto* o = std::get_if<OptionalElem>(&e)) {
      for (const auto& v : scope_vars(*o->group)) push_unique(out, v);
    } else if (const auto* s = std::get_if<SubqueryElem>(&e)) {
      for (const auto& v : visible_vars(*s->query)) push_unique(out, v);
    } else if (const auto* u = std::get_if<UnionElem>(&e)) {
      for (const auto& b : u->branches)
        for (const auto& v : visible_vars(*b)) push_unique(out, v);
    }
  }
  return out;
}

std::set<std::string> certain_vars(const PatternGroup& g) {
  std::set<std::string> out;
  for (const auto& e : g.elements) {
    if (const auto* t = std::get_if<TripleElem>(&e)) {
      for (const auto& v : t->pattern.variables()) out.insert(v);
    } else if (const auto* s = std::get_if<SubqueryElem>(&e)) {
      auto c = certain_vars(*s->query);
      out.insert(c.begin(), c.end());
    } else if (const auto* u = std::get_if<UnionElem>(&e)) {
      std::set<std::string> common;
      for (std::size_t i = 0; i < u->branches.size(); ++i) {
        auto c = certain_vars(*u->branches[i]);
        if (i == 0) {
          common = c;
        } else {
          std::set<std::string> keep;
          std::set_intersection(common.begin(), common.end(), c.begin(), c.end(), std::inserter(keep, keep.end()));
          common = std::move(keep);
        }
      }
      out.insert(common.begin(), common.end());
    }
  }
  return out;
}

std::vector<std::string> visible_vars(const QueryModel& m) {
  if (!m.select.empty()) return m.select;
  if (m.grouped()) {
    std::vector<std::string> out = m.group_by;
    for (const auto& a : m.aggregations) push_unique(out, a.target);
    return out;
  }
  return scope_vars(m.where);
}

std::set<std::string> certain_vars(const QueryModel& m) {
  auto inner = certain_vars(m.where);
  std::set<std::string> out;
  auto vis = visible_vars(m);
  for (const auto& v : vis) {
    if (m.grouped()) {
      bool is_count = std::any_of(m.aggregations.begin(), m.aggregations.end(),
                                  [&](const Aggregation& a) { return a.target == v && a.fn == AggFn::kCount; });
      if (is_count || (contains(m.group_by, v) && inner.count(v))) out.insert(v);
    } else if (inner.count(v)) {
      out.insert(v);
    }
  }
  return out;
}

std::set<std::string> clause_vars(const FilterClause& c) {
  std::set<std::string> out;
  for (const auto& t : c.terms) {
    if (t.cond.kind == Condition::Kind::kRaw) {
      auto vs = expression_variables(*t.cond.expr);
      out.insert(vs.begin(), vs.end());
    } else {
      out.insert(t.var);
    }
  }
  return out;
}

std::set<std::string> filter_vars(const PatternGroup& g) {
  std::set<std::string> out;
  for (const auto& f : g.filters) {
    auto vs = clause_vars(f);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

std::set<std::string> all_vars(const PatternGroup& g) {
  std::set<std::string> out;
  for (const auto& e : g.elements) {
    if (const auto* t = std::get_if<TripleElem>(&e)) {
      for (const auto& v : t->pattern.variables()) out.insert(v);
    } else if (const auto* o = std::get_if<OptionalElem>(&e)) {
      auto vs = all_vars(*o->group);
      out.insert(vs.begin(), vs.end());
    } else if (const auto* s = std::get_if<SubqueryElem>(&e)) {
      auto vs = all_vars(*s->query);
      out.insert(vs.begin(), vs.end());
    } else if (const auto* u = std::get_if<UnionElem>(&e)) {
      for (const auto& b : u->branches) {
        auto vs = all_vars(*b);
        out.insert(vs.begin(), vs.end());
      }
    }
  }
  auto fv = filter_vars(g);
  out.insert(fv.begin(), fv.end());
  return out;
}

std::set<std::string> all_vars(const QueryModel& m) {
  auto out = all_vars(m.where);
  out.insert(m.select.begin(), m.select.end());
  out.insert(m.group_by.begin(), m.group_by.end());
  for (const auto& a : m.aggregations) {
    out.insert(a.source);
    out.insert(a.target);
  }
  for (const auto& h : m.having) {
    auto vs = clause_vars(h);
    out.insert(vs.begin(), vs.end());
  }
  for (const auto& o : m.order) out.insert(o.var);
  return out;
}

std::set<std::string> hidden_vars(const QueryModel& m) {
  auto scope = scope_vars(m.where);
  for (const auto& a : m.aggregations) push_unique(scope, a.target);
  auto vis = visible_vars(m);
  std::set<std::string> out;
  for (const auto& v : scope)
    if (!contains(vis, v)) out.insert(v);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (std::size_t n = 1;; ++n) {
    std::string candidate = base + "_" + std::to_string(n);
    if (!taken.count(candidate)) return candidate;
  }
}

void rename_variable(QueryModel& m, const std::string& from, const std::string& to) {
  if (from == to) return;
  if (contains(visible_vars(m), to)) throw ModelError("cannot rename ?" + from + " to visible ?" + to);
  if (hidden_vars(m).count(to)) {
    auto taken = all_vars(m);
    taken.insert(from);
    taken.insert(to);
    rename_all(m, to, fresh_name(to, taken));
  }
  rename_all(m, from, to);
}

void separate_hidden(QueryModel& m, const std::set<std::string>& avoid) {
  for (const auto& h : hidden_vars(m)) {
    if (!avoid.count(h)) continue;
    auto taken = all_vars(m);
    taken.insert(avoid.begin(), avoid.end());
    rename_all(m, h, fresh_name(h, taken));
  }
}

std::size_t subquery_count(const QueryModel& m);

namespace {
std::size_t group_subqueries(const PatternGroup& g) {
  std::size_t n = 0;
  for (const auto& e : g.elements) {
    if (const auto* o = std::get_if<OptionalElem>(&e)) n += group_subqueries(*o->group);
    else if (const auto* s = std::get_if<SubqueryElem>(&e)) n += 1 + subquery_count(*s->query);
    else if (const auto* u = std::get_if<UnionElem>(&e))
      for (const auto& b : u->branches) n += subquery_count(*b);
  }
  return n;
}
}  // namespace

std::size_t subquery_count(const QueryModel& m) { return group_subqueries(m.where); }

void validate(const QueryModel& m) { validate_query(m); }

std::string dump(const QueryModel& m) {
  std::ostringstream os;
  dump_query(os, m, 0);
  return os.str();
}

}  // namespace kgframe
