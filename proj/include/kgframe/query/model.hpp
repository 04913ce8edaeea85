#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "kgframe/frame/condition.hpp"
#include "kgframe/frame/frame.hpp"
#include "kgframe/rdf/graph_store.hpp"
#include "kgframe/rdf/term.hpp"

namespace kgframe {

// Owning pointer with value semantics (deep copy, deep equality); lets the
// recursive model types stay plain values.
template <class T>
class Box {
 public:
  Box() : p_(std::make_unique<T>()) {}
  Box(T value) : p_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& o) : p_(std::make_unique<T>(*o.p_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& o) {
    if (this != &o) p_ = std::make_unique<T>(*o.p_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *p_; }
  const T& operator*() const { return *p_; }
  T* operator->() { return p_.get(); }
  const T* operator->() const { return p_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.p_ == *b.p_; }

 private:
  std::unique_ptr<T> p_;
};

// One conjunct of a FILTER / HAVING clause: `cond` applied to ?var (raw
// conditions carry their own variables).
struct FilterTerm {
  std::string var;
  Condition cond;
  friend bool operator==(const FilterTerm&, const FilterTerm&) = default;
};

// One FILTER clause; its terms are conjoined.
struct FilterClause {
  std::vector<FilterTerm> terms;
  friend bool operator==(const FilterClause&, const FilterClause&) = default;
};

struct QueryModel;
struct PatternGroup;

struct TripleElem {
  TriplePattern pattern;
  std::string graph;  // source graph IRI
  friend bool operator==(const TripleElem&, const TripleElem&) = default;
};

struct OptionalElem {
  Box<PatternGroup> group;
  friend bool operator==(const OptionalElem&, const OptionalElem&) = default;
};

struct SubqueryElem {
  Box<QueryModel> query;
  friend bool operator==(const SubqueryElem&, const SubqueryElem&) = default;
};

struct UnionElem {
  std::vector<Box<QueryModel>> branches;
  friend bool operator==(const UnionElem&, const UnionElem&) = default;
};

using Element = std::variant<TripleElem, OptionalElem, SubqueryElem, UnionElem>;

// A group graph pattern. Elements keep evaluation order (it matters for
// OPTIONAL); filters are group-scoped, so they live apart.
struct PatternGroup {
  std::vector<Element> elements;
  std::vector<FilterClause> filters;

  // Inserts after the last triple or OPTIONAL, so triples gather ahead of
  // subqueries and unions but never move across an OPTIONAL.
  void add_triple(TripleElem t);
  void add_element(Element e);
  void add_filter(FilterClause f) { filters.push_back(std::move(f)); }

  bool empty() const { return elements.empty(); }
  friend bool operator==(const PatternGroup&, const PatternGroup&) = default;
};

struct Aggregation {
  AggFn fn = AggFn::kCount;
  std::string source;
  std::string target;
  bool distinct = false;
  friend bool operator==(const Aggregation&, const Aggregation&) = default;
};

struct OrderSpec {
  std::string var;
  SortOrder order = SortOrder::kAsc;
  friend bool operator==(const OrderSpec&, const OrderSpec&) = default;
};

// The intermediate representation of one SELECT query.
struct QueryModel {
  PrefixMap prefixes;
  std::vector<std::string> from;    // only meaningful on the outermost model
  std::vector<std::string> select;  // empty: every visible variable (SELECT *)
  bool distinct = false;
  PatternGroup where;
  std::vector<std::string> group_by;
  std::vector<Aggregation> aggregations;
  std::vector<FilterClause> having;  // terms name aggregation targets
  std::vector<OrderSpec> order;
  std::optional<std::int64_t> limit;
  std::optional<std::int64_t> offset;

  bool grouped() const { return !group_by.empty() || !aggregations.empty(); }
  bool has_modifiers() const { return !order.empty() || limit.has_value() || offset.has_value(); }
  // No grouping, modifiers or DISTINCT: its group can be merged into another.
  bool flat() const { return !grouped() && !has_modifiers() && !distinct; }

  friend bool operator==(const QueryModel&, const QueryModel&) = default;

  // ---- builder surface ----
  void add_triple(const TriplePattern& p, const std::string& graph);
  void add_filter(FilterClause f);
  void add_optional_block(PatternGroup g);
  // Throws ModelError when grouping is already set.
  void set_grouping(std::vector<std::string> vars, std::vector<Aggregation> aggs);
  void add_having(FilterClause f);
  // Throws ModelError on negative values.
  void set_modifiers(std::vector<OrderSpec> order, std::optional<std::int64_t> limit,
                     std::optional<std::int64_t> offset);
};

QueryModel new_model(PrefixMap prefixes = {}, std::vector<std::string> from = {});

// Fresh outer model whose only element is `inner` as a subquery. FROM moves
// to the outer model; inner modifiers and aggregations stay inside.
QueryModel wrap_as_subquery(QueryModel inner);

// Union node over two branches; throws ModelError unless both expose the same
// variable set.
QueryModel union_models(QueryModel a, QueryModel b);

// Concatenates the groups of two flat models; throws ModelError when either
// is grouped. Limit is the max and offset the min of those present.
QueryModel merge_models(QueryModel a, const QueryModel& b);

// ---- scope analysis ----

// Variables a group binds, in first-occurrence order.
std::vector<std::string> scope_vars(const PatternGroup& g);
// Variables bound in every solution of the group.
std::set<std::string> certain_vars(const PatternGroup& g);
// Variables the query exposes to an enclosing pattern, in SELECT order.
std::vector<std::string> visible_vars(const QueryModel& m);
std::set<std::string> certain_vars(const QueryModel& m);
// Variables named in the group's own FILTER clauses.
std::set<std::string> filter_vars(const PatternGroup& g);
// Every variable name used anywhere, nested scopes included.
std::set<std::string> all_vars(const QueryModel& m);
std::set<std::string> all_vars(const PatternGroup& g);
// Variables of the model's own scope that are not visible outside it.
std::set<std::string> hidden_vars(const QueryModel& m);

std::set<std::string> clause_vars(const FilterClause& c);

// `base` or base_1, base_2, ... avoiding `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

// Renames variable `from` to `to` in the model's scope (select list, group,
// modifiers and every nested scope that sees `from`). A hidden variable that
// already uses the name `to` is renamed apart first. Throws ModelError when
// `to` is already visible.
void rename_variable(QueryModel& m, const std::string& from, const std::string& to);

// Renames every hidden variable of `m` that occurs in `avoid` to a fresh name.
void separate_hidden(QueryModel& m, const std::set<std::string>& avoid);

// Subquery nodes counted recursively; union branches themselves are not
// counted, subqueries inside them are.
std::size_t subquery_count(const QueryModel& m);

// Scope soundness: throws ModelError when select, grouping, having or order
// names a variable that is not in scope, or a union node is malformed.
void validate(const QueryModel& m);

// Stable indented tree dump for debugging and structural golden tests.
std::string dump(const QueryModel& m);

}  // namespace kgframe
