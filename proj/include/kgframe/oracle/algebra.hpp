#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kgframe/frame/expression.hpp"
#include "kgframe/query/model.hpp"
#include "kgframe/rdf/graph_store.hpp"
#include "kgframe/rdf/solution.hpp"

namespace kgframe {

struct AlgebraNode;
using NodePtr = std::shared_ptr<const AlgebraNode>;

// Pattern algebra with bag semantics.
struct AlgebraNode {
  enum class Kind { kUnit, kTriple, kJoin, kLeftJoin, kUnion, kFilter, kProject, kDistinct, kExtend, kGroupAgg, kSlice };

  Kind kind = Kind::kUnit;
  TriplePattern pattern;  // kTriple
  std::string graph;      // kTriple; empty: the dataset's only graph
  NodePtr left, right;    // binary nodes; unary nodes use `left`
  std::vector<FilterTerm> condition;  // kFilter, kLeftJoin (conjunction; empty = true)
  std::vector<std::string> vars;      // kProject; kGroupAgg group variables
  std::string var;                    // kExtend target
  ExprPtr expr;                       // kExtend
  std::vector<Aggregation> aggregations;  // kGroupAgg
  std::vector<OrderSpec> order;           // kSlice
  std::optional<std::int64_t> limit, offset;  // kSlice
};

namespace algebra {
NodePtr unit();
NodePtr triple(TriplePattern p, std::string graph = {});
NodePtr join(NodePtr a, NodePtr b);
NodePtr left_join(NodePtr a, NodePtr b, std::vector<FilterTerm> condition = {});
NodePtr union_of(NodePtr a, NodePtr b);
NodePtr filter(NodePtr a, std::vector<FilterTerm> condition);
NodePtr project(NodePtr a, std::vector<std::string> vars);
NodePtr distinct(NodePtr a);
NodePtr extend(NodePtr a, std::string var, ExprPtr expr);
NodePtr group_agg(NodePtr a, std::vector<std::string> group, std::vector<Aggregation> aggs);
NodePtr slice(NodePtr a, std::vector<OrderSpec> order, std::optional<std::int64_t> limit,
              std::optional<std::int64_t> offset);
}  // namespace algebra

// True when every conjunct holds for the mapping (SPARQL error = false).
bool conjunction_holds(const std::vector<FilterTerm>& terms, const Mapping& m);

// ⟦node⟧ over the dataset. Throws EvalError for an unknown graph.
SolutionBag eval_pattern(const AlgebraNode& node, const Dataset& data);

// Lowers a query model to the algebra: elements fold left to right into
// Join/LeftJoin chains starting from the unit pattern, group filters apply
// last, then GroupAgg, HAVING, Project onto the visible variables,
// Distinct and Slice.
NodePtr lower_model(const QueryModel& m);
NodePtr lower_group(const PatternGroup& g);

// Rows of `rows` sorted canonically (by the sorted list of their values, then
// every variable in name order), then stably by `order`, then sliced. Shared by both evaluators so ties break
// the same way.
std::vector<std::size_t> slice_order(const std::vector<std::vector<std::optional<Term>>>& rows,
                                     const std::vector<std::size_t>& key_columns,
                                     const std::vector<bool>& descending, std::optional<std::int64_t> limit,
                                     std::optional<std::int64_t> offset);

}  // namespace kgframe
