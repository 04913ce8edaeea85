#pragma once

#include <string>
#include <vector>

#include "kgframe/frame/frame.hpp"
#include "kgframe/oracle/table.hpp"
#include "kgframe/query/model.hpp"
#include "kgframe/rdf/graph_store.hpp"

namespace kgframe {

// Evaluates a frame's operator queue directly over the stores with bag
// relational semantics, one operator at a time. Independent of query models.
// Throws EvalError for a graph missing from the dataset.
ResultTable eval_frame_relational(const FrameDescriptor& frame, const Dataset& data);

namespace relational {

// Rows of the seed pattern; one column per distinct variable.
ResultTable scan(const GraphStore& store, const SeedOp& seed);

// Natural join on the shared columns. A null cell is compatible with any
// value and takes the other side's value (SPARQL compatibility). kFullOuter
// is the padded bag union of both one-sided outer joins, so rows matched on
// both sides appear twice.
ResultTable join(const ResultTable& a, const ResultTable& b, JoinType type);

ResultTable select(const ResultTable& t, const std::vector<FilterEntry>& entries);
ResultTable project(const ResultTable& t, const std::vector<std::string>& cols);
ResultTable rename(ResultTable t, const std::string& from, const std::string& to);
// Columns: group columns then one per aggregation target.
ResultTable group(const ResultTable& t, const std::vector<std::string>& cols, const std::vector<Aggregation>& aggs);
// Columns of a then b's extra columns; missing cells are null.
ResultTable padded_union(const ResultTable& a, const ResultTable& b);
// Canonical tie-break, stable sort by keys, then offset/limit.
ResultTable sort_slice(const ResultTable& t, const std::vector<OrderSpec>& keys, std::optional<std::int64_t> limit,
                       std::optional<std::int64_t> offset);

}  // namespace relational

}  // namespace kgframe
