#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kgframe/frame/condition.hpp"
#include "kgframe/rdf/term.hpp"

namespace kgframe {

enum class Direction { kOut, kIn };
enum class JoinType { kInner, kLeftOuter, kRightOuter, kFullOuter };
enum class AggFn { kCount, kSum, kAvg, kMin, kMax, kSample };
enum class SortOrder { kAsc, kDesc };

// How a filter entry relates to the grouping that is open when it is recorded.
enum class FilterRole {
  kPlain,      // ordinary row filter
  kHaving,     // on an aggregation result of the open grouping
  kPostGroup,  // on a grouping column of the open grouping (forces nesting)
};

const char* to_string(JoinType t);
const char* to_string(AggFn fn);
AggFn agg_fn_from_string(const std::string& name);  // throws FrameError

class FrameDescriptor;
using FramePtr = std::shared_ptr<const FrameDescriptor>;

struct SeedOp {
  PatternTerm subject, predicate, object;
  std::string graph;
};

struct ExpandOp {
  std::string col;
  std::string predicate;  // full IRI
  std::string new_col;
  Direction dir = Direction::kOut;
  bool optional = false;
  std::string graph;  // source graph; filled in when the record is appended
};

struct FilterEntry {
  std::string col;
  std::vector<Condition> conditions;  // conjoined
  FilterRole role = FilterRole::kPlain;
  friend bool operator==(const FilterEntry&, const FilterEntry&) = default;
};

struct FilterOp {
  std::vector<FilterEntry> entries;  // in call order
};

struct SelectColsOp {
  std::vector<std::string> cols;
};

struct JoinOp {
  FramePtr other;
  std::string col, other_col, new_col;
  JoinType type = JoinType::kInner;
};

struct GroupByOp {
  std::vector<std::string> cols;
};

struct AggregationOp {
  AggFn fn = AggFn::kCount;
  std::string col, new_col;
  bool distinct = false;
};

// Whole-frame aggregation; terminal.
struct AggregateOp {
  AggFn fn = AggFn::kCount;
  std::string col, new_col;
  bool distinct = false;
};

struct SortOp {
  std::vector<std::pair<std::string, SortOrder>> keys;
};

// Terminal.
struct HeadOp {
  std::int64_t k = 0;
  std::int64_t offset = 0;
};

using OpRecord =
    std::variant<SeedOp, ExpandOp, FilterOp, SelectColsOp, JoinOp, GroupByOp, AggregationOp, AggregateOp, SortOp, HeadOp>;

// One (predicate, new column) step of the list form of expand.
struct ExpandStep {
  std::string predicate;  // prefixed name, <iri> or full IRI
  std::string new_col;
  Direction dir = Direction::kOut;
  bool optional = false;
};

// Lazy description of a table: column names plus the FIFO queue of operator
// records that produces it. Every derivation returns a new descriptor and
// never touches a store or an endpoint.
class FrameDescriptor {
 public:
  const std::vector<std::string>& graphs() const noexcept { return graphs_; }
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<OpRecord>& ops() const noexcept { return ops_; }
  const PrefixMap& prefixes() const noexcept { return prefixes_; }
  bool grouped() const noexcept { return grouped_; }
  const std::vector<std::string>& group_columns() const noexcept { return group_cols_; }
  bool terminal() const noexcept { return terminal_; }
  bool cached() const noexcept { return cached_; }
  bool has_column(const std::string& c) const;
  // Graph whose triples produced the column (the seed graph by default).
  std::string column_graph(const std::string& c) const;

  FrameDescriptor expand(const std::string& col, const std::string& predicate, const std::string& new_col,
                         Direction dir = Direction::kOut, bool optional = false) const;
  FrameDescriptor expand(const std::string& col, const std::vector<ExpandStep>& steps) const;

  // Conditions per column; within a column they are conjoined.
  FrameDescriptor filter(const std::vector<std::pair<std::string, std::vector<Condition>>>& conditions) const;
  // Same, with conditions in their string form (see parse_condition).
  FrameDescriptor filter_text(const std::vector<std::pair<std::string, std::vector<std::string>>>& conditions) const;

  FrameDescriptor select_cols(const std::vector<std::string>& cols) const;
  FrameDescriptor join(const FrameDescriptor& other, const std::string& col, const std::string& other_col,
                       JoinType type, const std::string& new_col) const;
  // Joins on a column of the same name in both frames, keeping the name.
  FrameDescriptor join(const FrameDescriptor& other, const std::string& col, JoinType type) const;

  FrameDescriptor group_by(const std::vector<std::string>& cols) const;
  FrameDescriptor aggregation(AggFn fn, const std::string& col, const std::string& new_col, bool distinct = false) const;
  FrameDescriptor count(const std::string& col, const std::string& new_col, bool distinct = false) const {
    return aggregation(AggFn::kCount, col, new_col, distinct);
  }
  FrameDescriptor aggregate(AggFn fn, const std::string& col, const std::string& new_col, bool distinct = false) const;

  FrameDescriptor sort(const std::vector<std::pair<std::string, SortOrder>>& keys) const;
  FrameDescriptor head(std::int64_t k, std::int64_t offset = 0) const;

  // Marks a branch point. Descriptors are values, so derivations from a
  // cached frame never affect each other; no data is materialized.
  FrameDescriptor cache() const;

  // Column set recomputed by replaying the queue; always equals columns().
  std::vector<std::string> replay_columns() const;

 private:
  friend class KnowledgeGraph;
  friend struct FrameAccess;

  FrameDescriptor appended(OpRecord op) const;
  void require_open() const;
  void require_column(const std::string& c) const;

  std::vector<std::string> graphs_;
  PrefixMap prefixes_;
  std::vector<std::string> columns_;
  std::vector<OpRecord> ops_;
  bool grouped_ = false;
  bool open_group_ = false;  // the last records belong to an unconsumed grouping
  std::vector<std::string> group_cols_;
  std::vector<std::string> agg_cols_;
  std::vector<std::string> pre_group_cols_;
  std::map<std::string, std::string> column_graphs_;
  bool terminal_ = false;
  bool cached_ = false;
};

// Entry point: a named graph plus the prefix table used to resolve prefixed
// names in operator arguments.
class KnowledgeGraph {
 public:
  explicit KnowledgeGraph(std::string iri, PrefixMap prefixes = {});

  const std::string& iri() const noexcept { return iri_; }
  const PrefixMap& prefixes() const noexcept { return prefixes_; }

  // Each position is a Variable (column) or a Term; at least one column.
  FrameDescriptor seed(PatternTerm s, PatternTerm p, PatternTerm o) const;
  // seed(?c1, pred, ?c2)
  FrameDescriptor feature_domain_range(const std::string& predicate, const std::string& c1,
                                       const std::string& c2) const;
  // seed(?c, rdf:type, class)
  FrameDescriptor entities(const std::string& class_iri, const std::string& c) const;
  // seed(?instance, rdf:type, ?class).group_by([class]).count(instance, frequency)
  FrameDescriptor explore_classes() const;

  // Resolves a prefixed name, <iri> or absolute IRI; throws FrameError.
  std::string resolve(const std::string& name) const;

 private:
  std::string iri_;
  PrefixMap prefixes_;
};

bool is_valid_column_name(const std::string& name);

// Resolves "p:l", "<iri>" or an absolute IRI against a prefix table.
std::string resolve_iri(const std::string& name, const PrefixMap& prefixes);

}  // namespace kgframe
