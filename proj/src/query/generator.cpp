#include "kgframe/query/generator.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "kgframe/error.hpp"

namespace kgframe {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::set<std::string> to_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::set<std::string> minus(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  for (const auto& s : a)
    if (!b.count(s)) out.insert(s);
  return out;
}

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

void merge_from(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& g : from) push_unique(into, g);
}

void merge_prefixes(PrefixMap& into, const PrefixMap& from) {
  for (const auto& [p, ns] : from.entries())
    if (!into.lookup(p)) into.add(p, ns);
}

TriplePattern seed_pattern(const SeedOp& s) { return {s.subject, s.predicate, s.object}; }

TriplePattern expand_pattern(const ExpandOp& e) {
  Variable col{e.col}, fresh{e.new_col};
  Term pred = Term::iri(e.predicate);
  if (e.dir == Direction::kOut) return {col, pred, fresh};
  return {fresh, pred, col};
}

FilterClause clause_of(const std::vector<FilterEntry>& entries) {
  FilterClause c;
  for (const auto& e : entries)
    for (const auto& cond : e.conditions) c.terms.push_back({e.col, cond});
  return c;
}

QueryModel wrap(QueryModel m) { return wrap_as_subquery(std::move(m)); }

SubqueryElem as_subquery(QueryModel m) {
  m.from.clear();
  return SubqueryElem{std::move(m)};
}

bool has_top_triples(const PatternGroup& g) {
  return std::any_of(g.elements.begin(), g.elements.end(),
                     [](const Element& e) { return std::holds_alternative<TripleElem>(e); });
}

std::set<std::string> nullable(const PatternGroup& g) {
  auto scope = scope_vars(g);
  return minus(to_set(scope), certain_vars(g));
}

// A group-scoped FILTER sees every binding of its group. Adding an element
// that can bind a variable the FILTER tests while that variable is still
// unbound in some rows would change the filter's verdict, so seal first.
void seal_if_needed(QueryModel& m, const std::set<std::string>& binds) {
  auto risky = nullable(m.where);
  auto fv = filter_vars(m.where);
  for (const auto& v : binds)
    if (risky.count(v) && fv.count(v)) {
      m = wrap(std::move(m));
      return;
    }
}

// Renames a hidden variable that would clash with a new visible name.
void introduce(QueryModel& m, const std::string& name) {
  auto hidden = hidden_vars(m);
  if (hidden.count(name)) separate_hidden(m, {name});
  else if (!m.grouped() && m.select.empty()) return;
  auto scope = scope_vars(m.where);
  if (std::find(scope.begin(), scope.end(), name) != scope.end()) separate_hidden(m, {name});
}

bool keeps_order_keys(const QueryModel& m, const std::vector<std::string>& cols) {
  return std::all_of(m.order.begin(), m.order.end(), [&](const OrderSpec& o) {
    return std::find(cols.begin(), cols.end(), o.var) != cols.end();
  });
}

QueryModel open(QueryModel m) { return m.flat() ? m : wrap(std::move(m)); }

// Certain variables of the elements before index k.
std::set<std::string> certain_prefix(const PatternGroup& g, std::size_t k) {
  PatternGroup prefix;
  prefix.elements.assign(g.elements.begin(), g.elements.begin() + static_cast<std::ptrdiff_t>(k));
  return certain_vars(prefix);
}

// Folding first's elements followed by second's equals Join(first, second)
// only when no FILTER or OPTIONAL of one side can observe bindings made by
// the other side to one of its possibly-unbound variables.
bool second_mergeable(const QueryModel& first, const QueryModel& second) {
  auto first_scope = to_set(scope_vars(first.where));
  auto fv = filter_vars(second.where);
  auto certain = certain_vars(second.where);
  for (const auto& v : fv)
    if (first_scope.count(v) && !certain.count(v)) return false;
  for (std::size_t k = 0; k < second.where.elements.size(); ++k) {
    const auto* o = std::get_if<OptionalElem>(&second.where.elements[k]);
    if (!o) continue;
    auto before = certain_prefix(second.where, k);
    for (const auto& v : all_vars(*o->group))
      if (first_scope.count(v) && !before.count(v)) return false;
  }
  return true;
}

bool first_mergeable(const QueryModel& first, const QueryModel& second) {
  auto second_scope = to_set(scope_vars(second.where));
  auto certain = certain_vars(first.where);
  for (const auto& v : filter_vars(first.where))
    if (second_scope.count(v) && !certain.count(v)) return false;
  return true;
}

QueryModel inner_join(QueryModel l, QueryModel r) {
  QueryModel a = open(std::move(l));
  QueryModel b = open(std::move(r));
  if (!has_top_triples(a.where) && has_top_triples(b.where)) std::swap(a, b);
  separate_hidden(a, to_set(scope_vars(b.where)));
  separate_hidden(b, to_set(scope_vars(a.where)));
  if (!first_mergeable(a, b)) a = wrap(std::move(a));
  if (!second_mergeable(a, b)) b = wrap(std::move(b));
  return merge_models(std::move(a), b);
}

// l LEFT OUTER JOIN r.
QueryModel left_join(QueryModel l, QueryModel r) {
  QueryModel a = open(std::move(l));
  bool pure = r.flat() && r.select.empty() && r.where.filters.empty() &&
              std::all_of(r.where.elements.begin(), r.where.elements.end(),
                          [](const Element& e) { return std::holds_alternative<TripleElem>(e); });
  auto exposed = pure ? to_set(scope_vars(r.where)) : to_set(visible_vars(r));
  auto r_visible = visible_vars(r);
  separate_hidden(a, exposed);
  seal_if_needed(a, exposed);
  merge_prefixes(a.prefixes, r.prefixes);
  merge_from(a.from, r.from);
  PatternGroup og;
  if (pure) og.elements = r.where.elements;
  else og.elements.push_back(as_subquery(std::move(r)));
  a.add_optional_block(std::move(og));
  if (!a.select.empty())
    for (const auto& v : r_visible) push_unique(a.select, v);
  return a;
}

// (l LEFT OUTER JOIN r) UNION (r LEFT OUTER JOIN l), both sides nested.
QueryModel full_outer_join(QueryModel l, QueryModel r) {
  PrefixMap prefixes = l.prefixes;
  merge_prefixes(prefixes, r.prefixes);
  std::vector<std::string> from = l.from;
  merge_from(from, r.from);
  auto branch = [&](const QueryModel& x, const QueryModel& y) {
    QueryModel b = new_model(prefixes);
    b.where.elements.push_back(as_subquery(x));
    PatternGroup og;
    og.elements.push_back(as_subquery(y));
    b.add_optional_block(std::move(og));
    return b;
  };
  QueryModel out = union_models(branch(l, r), branch(r, l));
  out.prefixes = prefixes;
  out.from = from;
  return out;
}

class Generator {
 public:
  explicit Generator(GeneratorHooks hooks) : hooks_(hooks) {}

  QueryModel run(const FrameDescriptor& f) {
    if (f.ops().empty() || !std::holds_alternative<SeedOp>(f.ops().front()))
      throw FrameError("operator queue must start with a seed");
    QueryModel m;
    for (const auto& op : f.ops()) {
      std::visit(Overloaded{
                     [&](const SeedOp& s) {
                       m = new_model(f.prefixes(), {s.graph});
                       m.add_triple(seed_pattern(s), s.graph);
                     },
                     [&](const ExpandOp& e) { expand(m, e); },
                     [&](const FilterOp& fo) { filter(m, fo); },
                     [&](const SelectColsOp& s) { select(m, s.cols); },
                     [&](const JoinOp& j) { join(m, j); },
                     [&](const GroupByOp& g) {
                       if (m.grouped() || m.has_modifiers()) m = wrap(std::move(m));
                       m.select.clear();
                       m.group_by = g.cols;
                     },
                     [&](const AggregationOp& a) {
                       introduce(m, a.new_col);
                       m.aggregations.push_back({a.fn, a.col, a.new_col, a.distinct});
                       if (a.distinct) m.distinct = true;
                     },
                     [&](const AggregateOp& a) {
                       if (m.grouped() || m.has_modifiers()) m = wrap(std::move(m));
                       introduce(m, a.new_col);
                       m.select.clear();
                       m.group_by.clear();
                       m.aggregations = {{a.fn, a.col, a.new_col, a.distinct}};
                     },
                     [&](const SortOp& s) {
                       if (m.has_modifiers()) m = wrap(std::move(m));
                       m.order.clear();
                       for (const auto& [c, o] : s.keys) m.order.push_back({c, o});
                     },
                     [&](const HeadOp& h) {
                       if (m.limit || m.offset) m = wrap(std::move(m));
                       m.limit = h.k;
                       if (h.offset > 0) m.offset = h.offset;
                     },
                 },
                 op);
    }
    m.from = f.graphs();
    merge_prefixes(m.prefixes, f.prefixes());
    return m;
  }

 private:
  void expand(QueryModel& m, const ExpandOp& e) {
    m = open(std::move(m));
    introduce(m, e.new_col);
    seal_if_needed(m, {e.col, e.new_col});
    TripleElem t{expand_pattern(e), e.graph};
    if (e.optional && !hooks_.optional_as_mandatory) {
      PatternGroup g;
      g.elements.push_back(std::move(t));
      m.add_optional_block(std::move(g));
    } else {
      m.where.add_triple(std::move(t));
    }
    if (!m.select.empty()) m.select.push_back(e.new_col);
  }

  void filter(QueryModel& m, const FilterOp& f) {
    std::vector<FilterEntry> having, plain;
    for (const auto& e : f.entries) {
      bool is_target = std::any_of(m.aggregations.begin(), m.aggregations.end(),
                                   [&](const Aggregation& a) { return a.target == e.col; });
      if (m.grouped() && is_target && !m.limit && !m.offset) having.push_back(e);
      else plain.push_back(e);
    }
    if (!having.empty()) m.having.push_back(clause_of(having));
    if (plain.empty()) return;
    // a bare ORDER BY does not block a FILTER in the same query
    if (m.grouped() || m.limit || m.offset || m.distinct) m = wrap(std::move(m));
    m.add_filter(clause_of(plain));
  }

  void select(QueryModel& m, const std::vector<std::string>& cols) {
    if (m.has_modifiers() && !keeps_order_keys(m, cols)) m = wrap(std::move(m));
    if (m.grouped() && m.distinct) {
      bool keeps_keys = std::all_of(m.group_by.begin(), m.group_by.end(), [&](const std::string& g) {
        return std::find(cols.begin(), cols.end(), g) != cols.end();
      });
      if (!keeps_keys) m.distinct = false;
    }
    m.select = cols;
  }

  void join(QueryModel& m, const JoinOp& j) {
    QueryModel other = Generator(hooks_).run(*j.other);
    rename_variable(m, j.col, j.new_col);
    rename_variable(other, j.other_col, j.new_col);
    switch (j.type) {
      case JoinType::kInner: m = inner_join(std::move(m), std::move(other)); break;
      case JoinType::kLeftOuter: m = left_join(std::move(m), std::move(other)); break;
      case JoinType::kRightOuter: m = left_join(std::move(other), std::move(m)); break;
      case JoinType::kFullOuter: m = full_outer_join(std::move(m), std::move(other)); break;
    }
  }

  GeneratorHooks hooks_;
};

// ---- naive generation ----

class NaiveGenerator {
 public:
  QueryModel run(const FrameDescriptor& f) {
    if (f.ops().empty() || !std::holds_alternative<SeedOp>(f.ops().front()))
      throw FrameError("operator queue must start with a seed");
    for (const auto& op : f.ops()) {
      std::visit(Overloaded{
                     [&](const SeedOp& s) {
                       acc_ = new_model(f.prefixes(), {s.graph});
                       graph_ = s.graph;
                       TriplePattern t = seed_pattern(s);
                       acc_.where.elements.push_back(leaf(t));
                       for (const auto& v : t.variables()) producers_[v] = t;
                       acc_.select = t.variables();
                     },
                     [&](const ExpandOp& e) {
                       reopen();
                       TriplePattern t = expand_pattern(e);
                       if (e.optional) {
                         PatternGroup g;
                         g.elements.push_back(leaf(t));
                         acc_.add_optional_block(std::move(g));
                       } else {
                         acc_.where.elements.push_back(leaf(t));
                         producers_[e.new_col] = t;
                       }
                       acc_.select.push_back(e.new_col);
                     },
                     [&](const FilterOp& fo) { filter(fo); },
                     [&](const SelectColsOp& s) {
                       if (acc_.has_modifiers()) reopen(true, keeps_order_keys(acc_, s.cols));
                       acc_.select = s.cols;
                       sealed_ = true;
                     },
                     [&](const JoinOp& j) { join(j); },
                     [&](const GroupByOp& g) {
                       reopen();
                       acc_.select.clear();
                       acc_.group_by = g.cols;
                     },
                     [&](const AggregationOp& a) {
                       acc_.aggregations.push_back({a.fn, a.col, a.new_col, a.distinct});
                     },
                     [&](const AggregateOp& a) {
                       reopen();
                       acc_.select.clear();
                       acc_.aggregations = {{a.fn, a.col, a.new_col, a.distinct}};
                     },
                     [&](const SortOp& s) {
                       if (acc_.has_modifiers()) reopen(true);
                       acc_.order.clear();
                       for (const auto& [c, o] : s.keys) acc_.order.push_back({c, o});
                       sealed_ = true;
                     },
                     [&](const HeadOp& h) {
                       if (acc_.limit || acc_.offset) reopen(true);
                       acc_.limit = h.k;
                       if (h.offset > 0) acc_.offset = h.offset;
                       sealed_ = true;
                     },
                 },
                 op);
    }
    acc_.from = f.graphs();
    merge_prefixes(acc_.prefixes, f.prefixes());
    return std::move(acc_);
  }

 private:
  SubqueryElem leaf(const TriplePattern& t) const {
    QueryModel q;
    q.select = t.variables();
    q.add_triple(t, graph_);
    return SubqueryElem{std::move(q)};
  }

  // Starts a new outer level when the accumulated model can no longer take
  // sibling subqueries.
  // A bare ORDER BY moves outward when `lift_order` is set.
  void reopen(bool force = false, bool lift_order = false) {
    if (!force && !sealed_ && !acc_.grouped() && !acc_.has_modifiers()) return;
    auto vis = visible_vars(acc_);
    std::vector<OrderSpec> order;
    if (lift_order && !acc_.limit && !acc_.offset) order = std::exchange(acc_.order, {});
    acc_ = wrap(std::move(acc_));
    acc_.select = vis;
    acc_.order = std::move(order);
    producers_.clear();
    sealed_ = false;
  }

  void filter(const FilterOp& fo) {
    reopen(false, true);
    std::set<std::string> needed;
    for (const auto& e : fo.entries) {
      needed.insert(e.col);
      for (const auto& c : e.conditions)
        if (c.kind == Condition::Kind::kRaw) {
          auto vs = expression_variables(*c.expr);
          needed.insert(vs.begin(), vs.end());
        }
    }
    bool produced = std::all_of(needed.begin(), needed.end(), [&](const std::string& v) { return producers_.count(v); });
    if (produced) {
      QueryModel q;
      for (const auto& v : needed) {
        const auto& t = producers_.at(v);
        TripleElem te{t, graph_};
        bool seen = std::any_of(q.where.elements.begin(), q.where.elements.end(), [&](const Element& e) {
          return std::get<TripleElem>(e) == te;
        });
        if (!seen) q.where.add_triple(te);
      }
      q.select = scope_vars(q.where);
      q.add_filter(clause_of(fo.entries));
      acc_.where.elements.push_back(SubqueryElem{std::move(q)});
      return;
    }
    acc_.add_filter(clause_of(fo.entries));
    sealed_ = true;
  }

  void join(const JoinOp& j) {
    QueryModel l = std::move(acc_);
    QueryModel r = NaiveGenerator().run(*j.other);
    rename_variable(l, j.col, j.new_col);
    rename_variable(r, j.other_col, j.new_col);
    PrefixMap prefixes = l.prefixes;
    merge_prefixes(prefixes, r.prefixes);
    std::vector<std::string> from = l.from;
    merge_from(from, r.from);
    auto lv = visible_vars(l), rv = visible_vars(r);
    switch (j.type) {
      case JoinType::kInner:
      case JoinType::kLeftOuter:
      case JoinType::kRightOuter: {
        if (j.type == JoinType::kRightOuter) {
          std::swap(l, r);
          std::swap(lv, rv);
        }
        acc_ = new_model(prefixes, from);
        acc_.where.elements.push_back(as_subquery(std::move(l)));
        if (j.type == JoinType::kInner) {
          acc_.where.elements.push_back(as_subquery(std::move(r)));
        } else {
          PatternGroup og;
          og.elements.push_back(as_subquery(std::move(r)));
          acc_.add_optional_block(std::move(og));
        }
        acc_.select = lv;
        for (const auto& v : rv) push_unique(acc_.select, v);
        break;
      }
      case JoinType::kFullOuter:
        acc_ = full_outer_join(std::move(l), std::move(r));
        acc_.select = lv;
        for (const auto& v : rv) push_unique(acc_.select, v);
        break;
    }
    producers_.clear();
    sealed_ = false;
  }

  QueryModel acc_;
  std::string graph_;
  std::map<std::string, TriplePattern> producers_;
  bool sealed_ = false;
};

}  // namespace

QueryModel generate(const FrameDescriptor& frame, const GeneratorHooks& hooks) { return Generator(hooks).run(frame); }

QueryModel naive_generate(const FrameDescriptor& frame) { return NaiveGenerator().run(frame); }

}  // namespace kgframe
