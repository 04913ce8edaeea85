#include "kgframe/oracle/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "kgframe/error.hpp"
#include "kgframe/oracle/aggregate.hpp"

namespace kgframe {

namespace algebra {

namespace {
std::shared_ptr<AlgebraNode> make(AlgebraNode::Kind k) {
  auto n = std::make_shared<AlgebraNode>();
  n->kind = k;
  return n;
}
}  // namespace

NodePtr unit() { return make(AlgebraNode::Kind::kUnit); }

NodePtr triple(TriplePattern p, std::string graph) {
  auto n = make(AlgebraNode::Kind::kTriple);
  n->pattern = std::move(p);
  n->graph = std::move(graph);
  return n;
}

NodePtr join(NodePtr a, NodePtr b) {
  auto n = make(AlgebraNode::Kind::kJoin);
  n->left = std::move(a);
  n->right = std::move(b);
  return n;
}

NodePtr left_join(NodePtr a, NodePtr b, std::vector<FilterTerm> condition) {
  auto n = make(AlgebraNode::Kind::kLeftJoin);
  n->left = std::move(a);
  n->right = std::move(b);
  n->condition = std::move(condition);
  return n;
}

NodePtr union_of(NodePtr a, NodePtr b) {
  auto n = make(AlgebraNode::Kind::kUnion);
  n->left = std::move(a);
  n->right = std::move(b);
  return n;
}

NodePtr filter(NodePtr a, std::vector<FilterTerm> condition) {
  auto n = make(AlgebraNode::Kind::kFilter);
  n->left = std::move(a);
  n->condition = std::move(condition);
  return n;
}

NodePtr project(NodePtr a, std::vector<std::string> vars) {
  auto n = make(AlgebraNode::Kind::kProject);
  n->left = std::move(a);
  n->vars = std::move(vars);
  return n;
}

NodePtr distinct(NodePtr a) {
  auto n = make(AlgebraNode::Kind::kDistinct);
  n->left = std::move(a);
  return n;
}

NodePtr extend(NodePtr a, std::string var, ExprPtr expr) {
  auto n = make(AlgebraNode::Kind::kExtend);
  n->left = std::move(a);
  n->var = std::move(var);
  n->expr = std::move(expr);
  return n;
}

NodePtr group_agg(NodePtr a, std::vector<std::string> group, std::vector<Aggregation> aggs) {
  auto n = make(AlgebraNode::Kind::kGroupAgg);
  n->left = std::move(a);
  n->vars = std::move(group);
  n->aggregations = std::move(aggs);
  return n;
}

NodePtr slice(NodePtr a, std::vector<OrderSpec> order, std::optional<std::int64_t> limit,
              std::optional<std::int64_t> offset) {
  auto n = make(AlgebraNode::Kind::kSlice);
  n->left = std::move(a);
  n->order = std::move(order);
  n->limit = limit;
  n->offset = offset;
  return n;
}

}  // namespace algebra

bool conjunction_holds(const std::vector<FilterTerm>& terms, const Mapping& m) {
  Bindings lookup = [&](const std::string& v) { return m.find(v); };
  for (const auto& t : terms)
    if (!condition_holds(t.cond, m.find(t.var), lookup)) return false;
  return true;
}

std::vector<std::size_t> slice_order(const std::vector<std::vector<std::optional<Term>>>& rows,
                                     const std::vector<std::size_t>& key_columns,
                                     const std::vector<bool>& descending, std::optional<std::int64_t> limit,
                                     std::optional<std::int64_t> offset) {
  auto cmp = [](const std::optional<Term>& a, const std::optional<Term>& b) {
    auto c = compare_for_order(a, b);
    if (c != 0) return c;
    if (a == b) return std::strong_ordering::equal;
    return a < b ? std::strong_ordering::less : std::strong_ordering::greater;
  };
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  // the row's values as a sorted list come first: that key survives column
  // renames, which happen freely between a slice and the final result
  std::vector<std::vector<std::optional<Term>>> sorted_values = rows;
  for (auto& r : sorted_values) std::sort(r.begin(), r.end(), [&](const auto& a, const auto& b) { return cmp(a, b) < 0; });
  auto lex = [&](const std::vector<std::optional<Term>>& a, const std::vector<std::optional<Term>>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto c = cmp(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return false;
  };
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    if (lex(sorted_values[x], sorted_values[y])) return true;
    if (lex(sorted_values[y], sorted_values[x])) return false;
    return lex(rows[x], rows[y]);
  });
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    for (std::size_t k = 0; k < key_columns.size(); ++k) {
      auto c = compare_for_order(rows[x][key_columns[k]], rows[y][key_columns[k]]);
      if (c != 0) return descending[k] ? c > 0 : c < 0;
    }
    return false;
  });
  std::size_t from = offset ? static_cast<std::size_t>(std::max<std::int64_t>(0, *offset)) : 0;
  if (from >= idx.size()) return {};
  std::size_t to = idx.size();
  if (limit) to = std::min(to, from + static_cast<std::size_t>(std::max<std::int64_t>(0, *limit)));
  return {idx.begin() + static_cast<std::ptrdiff_t>(from), idx.begin() + static_cast<std::ptrdiff_t>(to)};
}

namespace {

const GraphStore& store_for(const Dataset& data, const std::string& graph) {
  if (graph.empty()) {
    if (data.graphs().size() == 1) return data.graphs().begin()->second;
    throw EvalError("triple pattern without a graph over a dataset of " + std::to_string(data.graphs().size()) +
                    " graphs");
  }
  const GraphStore* g = data.find(graph);
  if (!g) throw EvalError("unknown graph <" + graph + ">");
  return *g;
}

SolutionBag eval_group_agg(const AlgebraNode& n, const SolutionBag& in) {
  std::set<std::string> keys(n.vars.begin(), n.vars.end());
  std::map<Mapping, std::vector<std::pair<const Mapping*, std::size_t>>> groups;
  for (const auto& [m, c] : in) groups[m.restrict_to(keys)].emplace_back(&m, c);
  if (groups.empty() && n.vars.empty()) groups[Mapping{}];
  SolutionBag out;
  for (const auto& [key, members] : groups) {
    Mapping row = key;
    for (const auto& a : n.aggregations) {
      std::vector<Term> values;
      for (const auto& [m, c] : members)
        if (const Term* v = m->find(a.source))
          for (std::size_t k = 0; k < c; ++k) values.push_back(*v);
      if (auto r = aggregate_values(a.fn, std::move(values), a.distinct)) row.bind(a.target, *r);
    }
    out.add(row, 1);
  }
  return out;
}

SolutionBag eval_slice(const AlgebraNode& n, const SolutionBag& in) {
  auto varset = in.variables();
  std::vector<std::string> vars(varset.begin(), varset.end());
  std::vector<std::vector<std::optional<Term>>> rows;
  std::vector<const Mapping*> source;
  for (const auto& [m, c] : in)
    for (std::size_t k = 0; k < c; ++k) {
      std::vector<std::optional<Term>> r;
      for (const auto& v : vars) r.push_back(m.get(v));
      rows.push_back(std::move(r));
      source.push_back(&m);
    }
  std::vector<std::size_t> keys;
  std::vector<bool> desc;
  for (const auto& o : n.order) {
    auto it = std::find(vars.begin(), vars.end(), o.var);
    if (it == vars.end()) continue;  // never bound: a constant key
    keys.push_back(static_cast<std::size_t>(it - vars.begin()));
    desc.push_back(o.order == SortOrder::kDesc);
  }
  SolutionBag out;
  for (auto i : slice_order(rows, keys, desc, n.limit, n.offset)) out.add(*source[i]);
  return out;
}

}  // namespace

SolutionBag eval_pattern(const AlgebraNode& n, const Dataset& data) {
  using K = AlgebraNode::Kind;
  switch (n.kind) {
    case K::kUnit: {
      SolutionBag b;
      b.add(Mapping{});
      return b;
    }
    case K::kTriple:
      return match_triples(store_for(data, n.graph), n.pattern);
    case K::kJoin: {
      auto a = eval_pattern(*n.left, data), b = eval_pattern(*n.right, data);
      SolutionBag out;
      for (const auto& [m1, c1] : a)
        for (const auto& [m2, c2] : b)
          if (compatible(m1, m2)) out.add(merge(m1, m2), c1 * c2);
      return out;
    }
    case K::kLeftJoin: {
      auto a = eval_pattern(*n.left, data), b = eval_pattern(*n.right, data);
      SolutionBag out;
      for (const auto& [m1, c1] : a) {
        bool extended = false;
        for (const auto& [m2, c2] : b) {
          if (!compatible(m1, m2)) continue;
          Mapping mu = merge(m1, m2);
          if (!conjunction_holds(n.condition, mu)) continue;
          out.add(mu, c1 * c2);
          extended = true;
        }
        if (!extended) out.add(m1, c1);
      }
      return out;
    }
    case K::kUnion:
      return bag_union(eval_pattern(*n.left, data), eval_pattern(*n.right, data));
    case K::kFilter: {
      SolutionBag out;
      for (const auto& [m, c] : eval_pattern(*n.left, data))
        if (conjunction_holds(n.condition, m)) out.add(m, c);
      return out;
    }
    case K::kProject: {
      std::set<std::string> keep(n.vars.begin(), n.vars.end());
      SolutionBag out;
      for (const auto& [m, c] : eval_pattern(*n.left, data)) out.add(m.restrict_to(keep), c);
      return out;
    }
    case K::kDistinct: {
      SolutionBag out;
      for (const auto& [m, c] : eval_pattern(*n.left, data)) out.add(m, 1);
      return out;
    }
    case K::kExtend: {
      SolutionBag out;
      for (const auto& [m, c] : eval_pattern(*n.left, data)) {
        Mapping mu = m;
        auto v = evaluate_expression(*n.expr, [&](const std::string& name) { return m.find(name); });
        if (v && !m.binds(n.var)) mu.bind(n.var, *v);
        out.add(mu, c);
      }
      return out;
    }
    case K::kGroupAgg:
      return eval_group_agg(n, eval_pattern(*n.left, data));
    case K::kSlice:
      return eval_slice(n, eval_pattern(*n.left, data));
  }
  throw EvalError("unknown algebra node");
}

NodePtr lower_group(const PatternGroup& g) {
  NodePtr acc;
  auto add = [&](NodePtr n) { acc = acc ? algebra::join(acc, std::move(n)) : std::move(n); };
  for (const auto& e : g.elements) {
    if (const auto* t = std::get_if<TripleElem>(&e)) {
      add(algebra::triple(t->pattern, t->graph));
    } else if (const auto* o = std::get_if<OptionalElem>(&e)) {
      PatternGroup inner = *o->group;
      std::vector<FilterTerm> cond;
      for (const auto& f : inner.filters) cond.insert(cond.end(), f.terms.begin(), f.terms.end());
      inner.filters.clear();
      acc = algebra::left_join(acc ? acc : algebra::unit(), lower_group(inner), std::move(cond));
    } else if (const auto* s = std::get_if<SubqueryElem>(&e)) {
      add(lower_model(*s->query));
    } else if (const auto* u = std::get_if<UnionElem>(&e)) {
      if (u->branches.empty()) throw EvalError("union without branches");
      NodePtr un = lower_model(*u->branches[0]);
      for (std::size_t i = 1; i < u->branches.size(); ++i) un = algebra::union_of(un, lower_model(*u->branches[i]));
      add(std::move(un));
    }
  }
  if (!acc) acc = algebra::unit();
  std::vector<FilterTerm> cond;
  for (const auto& f : g.filters) cond.insert(cond.end(), f.terms.begin(), f.terms.end());
  if (!cond.empty()) acc = algebra::filter(acc, std::move(cond));
  return acc;
}

NodePtr lower_model(const QueryModel& m) {
  NodePtr n = lower_group(m.where);
  if (m.grouped()) n = algebra::group_agg(n, m.group_by, m.aggregations);
  for (const auto& h : m.having) n = algebra::filter(n, h.terms);
  n = algebra::project(n, visible_vars(m));
  if (m.distinct) n = algebra::distinct(n);
  if (m.has_modifiers()) n = algebra::slice(n, m.order, m.limit, m.offset);
  return n;
}

}  // namespace kgframe
