#include "kgframe/frame/frame.hpp"

#include <algorithm>
#include <regex>

#include "kgframe/error.hpp"

namespace kgframe {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_name(const std::string& name) {
  if (!is_valid_column_name(name)) throw FrameError("invalid column name '" + name + "'");
}

}  // namespace

const char* to_string(JoinType t) {
  switch (t) {
    case JoinType::kInner: return "inner";
    case JoinType::kLeftOuter: return "left_outer";
    case JoinType::kRightOuter: return "right_outer";
    case JoinType::kFullOuter: return "full_outer";
  }
  return "?";
}

const char* to_string(AggFn fn) {
  switch (fn) {
    case AggFn::kCount: return "COUNT";
    case AggFn::kSum: return "SUM";
    case AggFn::kAvg: return "AVG";
    case AggFn::kMin: return "MIN";
    case AggFn::kMax: return "MAX";
    case AggFn::kSample: return "SAMPLE";
  }
  return "?";
}

AggFn agg_fn_from_string(const std::string& name) {
  std::string n = name;
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "count") return AggFn::kCount;
  if (n == "sum") return AggFn::kSum;
  if (n == "avg" || n == "average") return AggFn::kAvg;
  if (n == "min") return AggFn::kMin;
  if (n == "max") return AggFn::kMax;
  if (n == "sample") return AggFn::kSample;
  throw FrameError("unknown aggregation function '" + name + "'");
}

bool is_valid_column_name(const std::string& name) {
  static const std::regex kName("[A-Za-z_][A-Za-z0-9_]*");
  return std::regex_match(name, kName);
}

std::string resolve_iri(const std::string& name, const PrefixMap& prefixes) {
  if (name.size() >= 2 && name.front() == '<' && name.back() == '>') return name.substr(1, name.size() - 2);
  if (auto iri = prefixes.expand(name)) return *iri;
  if (name.find("://") != std::string::npos || name.starts_with("urn:")) return name;
  throw FrameError("cannot resolve IRI '" + name + "' (unknown prefix?)");
}

bool FrameDescriptor::has_column(const std::string& c) const { return contains(columns_, c); }

std::string FrameDescriptor::column_graph(const std::string& c) const {
  auto it = column_graphs_.find(c);
  if (it != column_graphs_.end()) return it->second;
  return graphs_.empty() ? std::string() : graphs_.front();
}

void FrameDescriptor::require_open() const {
  if (terminal_) throw FrameError("frame is terminal (after aggregate/head); no further operators allowed");
}

void FrameDescriptor::require_column(const std::string& c) const {
  if (!has_column(c)) throw FrameError("unknown column '" + c + "'");
}

// Validates `op` against the current state and applies its effect on the
// column set and grouping flags.
void apply_op(FrameDescriptor& d, OpRecord& op);

FrameDescriptor FrameDescriptor::appended(OpRecord op) const {
  require_open();
  FrameDescriptor next = *this;
  next.cached_ = false;
  apply_op(next, op);
  next.ops_.push_back(std::move(op));
  return next;
}

struct FrameAccess {
  static void apply(FrameDescriptor& d, OpRecord& op) {
    std::visit(Overloaded{
                   [&](SeedOp& s) {
                     if (!d.ops_.empty()) throw FrameError("seed must be the first operator");
                     if (s.graph.empty() && !d.graphs_.empty()) s.graph = d.graphs_.front();
                     for (const PatternTerm* p : {&s.subject, &s.predicate, &s.object}) {
                       if (const auto* v = std::get_if<Variable>(p)) {
                         require_name(v->name);
                         if (!contains(d.columns_, v->name)) d.columns_.push_back(v->name);
                         d.column_graphs_[v->name] = s.graph;
                       } else if (std::get<Term>(*p).is_blank()) {
                         throw FrameError("blank nodes are not allowed in patterns");
                       }
                     }
                     if (d.columns_.empty()) throw FrameError("seed needs at least one column");
                     if (auto* t = std::get_if<Term>(&s.predicate); t && !t->is_iri())
                       throw FrameError("seed predicate must be an IRI");
                     if (auto* t = std::get_if<Term>(&s.subject); t && t->is_literal())
                       throw FrameError("seed subject cannot be a literal");
                   },
                   [&](ExpandOp& e) {
                     d.require_column(e.col);
                     require_name(e.new_col);
                     if (d.has_column(e.new_col)) throw FrameError("column '" + e.new_col + "' already exists");
                     if (e.graph.empty()) e.graph = d.column_graph(e.col);
                     d.columns_.push_back(e.new_col);
                     d.column_graphs_[e.new_col] = e.graph;
                     d.open_group_ = false;
                   },
                   [&](const FilterOp& f) {
                     bool close = false;
                     for (const auto& entry : f.entries) {
                       d.require_column(entry.col);
                       for (const auto& c : entry.conditions)
                         if (c.kind == Condition::Kind::kRaw && c.expr)
                           for (const auto& v : expression_variables(*c.expr))
                             if (!d.has_column(v)) throw FrameError("filter expression uses unknown column '" + v + "'");
                       if (entry.role == FilterRole::kPostGroup) close = true;
                     }
                     bool having = std::all_of(f.entries.begin(), f.entries.end(),
                                               [](const FilterEntry& e) { return e.role == FilterRole::kHaving; });
                     if (close || !having) d.open_group_ = false;
                   },
                   [&](const SelectColsOp& s) {
                     if (s.cols.empty()) throw FrameError("select_cols needs at least one column");
                     std::vector<std::string> cols;
                     for (const auto& c : s.cols) {
                       d.require_column(c);
                       if (contains(cols, c)) throw FrameError("duplicate column '" + c + "' in select_cols");
                       cols.push_back(c);
                     }
                     d.columns_ = std::move(cols);
                   },
                   [&](const JoinOp& j) {
                     d.require_column(j.col);
                     if (!j.other || !j.other->has_column(j.other_col))
                       throw FrameError("unknown column '" + j.other_col + "' in joined frame");
                     require_name(j.new_col);
                     std::vector<std::string> cols;
                     for (const auto& c : d.columns_) cols.push_back(c == j.col ? j.new_col : c);
                     for (const auto& c : j.other->columns()) {
                       if (c == j.other_col) continue;
                       if (c == j.new_col) throw FrameError("join column '" + j.new_col + "' collides with a column");
                       if (!contains(cols, c)) cols.push_back(c);
                     }
                     if (std::count(cols.begin(), cols.end(), j.new_col) > 1)
                       throw FrameError("join column '" + j.new_col + "' collides with a column");
                     d.columns_ = std::move(cols);
                     auto key_graph = d.column_graph(j.col);
                     d.column_graphs_[j.new_col] = key_graph;
                     for (const auto& c : j.other->columns())
                       if (c != j.other_col && !d.column_graphs_.count(c)) d.column_graphs_[c] = j.other->column_graph(c);
                     for (const auto& g : j.other->graphs())
                       if (!contains(d.graphs_, g)) d.graphs_.push_back(g);
                     for (const auto& [p, ns] : j.other->prefixes().entries())
                       if (!d.prefixes_.lookup(p)) d.prefixes_.add(p, ns);
                     d.grouped_ = d.grouped_ || j.other->grouped();
                     d.open_group_ = false;
                   },
                   [&](const GroupByOp& g) {
                     if (g.cols.empty()) throw FrameError("group_by needs at least one column");
                     for (const auto& c : g.cols) d.require_column(c);
                     d.pre_group_cols_ = d.columns_;
                     d.columns_ = g.cols;
                     d.group_cols_ = g.cols;
                     d.agg_cols_.clear();
                     d.grouped_ = true;
                     d.open_group_ = true;
                   },
                   [&](const AggregationOp& a) {
                     if (d.ops_.empty() || !(std::holds_alternative<GroupByOp>(d.ops_.back()) ||
                                             std::holds_alternative<AggregationOp>(d.ops_.back())))
                       throw FrameError("aggregation must directly follow group_by");
                     if (!contains(d.pre_group_cols_, a.col)) throw FrameError("unknown column '" + a.col + "'");
                     require_name(a.new_col);
                     if (d.has_column(a.new_col) || contains(d.pre_group_cols_, a.new_col))
                       throw FrameError("column '" + a.new_col + "' already exists");
                     d.columns_.push_back(a.new_col);
                     d.agg_cols_.push_back(a.new_col);
                     d.column_graphs_[a.new_col] = d.column_graph(a.col);
                   },
                   [&](const AggregateOp& a) {
                     d.require_column(a.col);
                     require_name(a.new_col);
                     if (d.has_column(a.new_col)) throw FrameError("column '" + a.new_col + "' already exists");
                     d.column_graphs_[a.new_col] = d.column_graph(a.col);
                     d.columns_ = {a.new_col};
                     d.terminal_ = true;
                     d.grouped_ = false;
                     d.open_group_ = false;
                   },
                   [&](const SortOp& s) {
                     if (s.keys.empty()) throw FrameError("sort needs at least one column");
                     for (const auto& [c, o] : s.keys) d.require_column(c);
                     d.open_group_ = false;
                   },
                   [&](const HeadOp& h) {
                     if (h.k < 0 || h.offset < 0) throw FrameError("head needs k >= 0 and offset >= 0");
                     d.terminal_ = true;
                     d.open_group_ = false;
                   },
               },
               op);
  }

  static FilterRole role_for(const FrameDescriptor& d, const std::string& col) {
    if (!d.open_group_) return FilterRole::kPlain;
    if (contains(d.agg_cols_, col)) return FilterRole::kHaving;
    if (contains(d.group_cols_, col)) return FilterRole::kPostGroup;
    return FilterRole::kPlain;
  }

  static FrameDescriptor start(const std::string& graph, const PrefixMap& prefixes, SeedOp seed) {
    FrameDescriptor d;
    d.graphs_ = {graph};
    d.prefixes_ = prefixes;
    return d.appended(std::move(seed));
  }
};

void apply_op(FrameDescriptor& d, OpRecord& op) { FrameAccess::apply(d, op); }

FrameDescriptor FrameDescriptor::expand(const std::string& col, const std::string& predicate,
                                        const std::string& new_col, Direction dir, bool optional) const {
  require_open();
  return appended(ExpandOp{col, resolve_iri(predicate, prefixes_), new_col, dir, optional, {}});
}

FrameDescriptor FrameDescriptor::expand(const std::string& col, const std::vector<ExpandStep>& steps) const {
  FrameDescriptor d = *this;
  for (const auto& s : steps) d = d.expand(col, s.predicate, s.new_col, s.dir, s.optional);
  return d;
}

FrameDescriptor FrameDescriptor::filter(
    const std::vector<std::pair<std::string, std::vector<Condition>>>& conditions) const {
  require_open();
  FilterOp f;
  for (const auto& [col, conds] : conditions) {
    require_column(col);
    if (conds.empty()) continue;
    f.entries.push_back(FilterEntry{col, conds, FrameAccess::role_for(*this, col)});
  }
  if (f.entries.empty()) return *this;
  return appended(std::move(f));
}

FrameDescriptor FrameDescriptor::filter_text(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& conditions) const {
  std::vector<std::pair<std::string, std::vector<Condition>>> parsed;
  for (const auto& [col, texts] : conditions) {
    std::vector<Condition> conds;
    for (const auto& t : texts) conds.push_back(parse_condition(t, prefixes_));
    parsed.emplace_back(col, std::move(conds));
  }
  return filter(parsed);
}

FrameDescriptor FrameDescriptor::select_cols(const std::vector<std::string>& cols) const {
  return appended(SelectColsOp{cols});
}

FrameDescriptor FrameDescriptor::join(const FrameDescriptor& other, const std::string& col,
                                      const std::string& other_col, JoinType type, const std::string& new_col) const {
  return appended(JoinOp{std::make_shared<const FrameDescriptor>(other), col, other_col, new_col, type});
}

FrameDescriptor FrameDescriptor::join(const FrameDescriptor& other, const std::string& col, JoinType type) const {
  return join(other, col, col, type, col);
}

FrameDescriptor FrameDescriptor::group_by(const std::vector<std::string>& cols) const {
  return appended(GroupByOp{cols});
}

FrameDescriptor FrameDescriptor::aggregation(AggFn fn, const std::string& col, const std::string& new_col,
                                             bool distinct) const {
  return appended(AggregationOp{fn, col, new_col, distinct});
}

FrameDescriptor FrameDescriptor::aggregate(AggFn fn, const std::string& col, const std::string& new_col,
                                           bool distinct) const {
  return appended(AggregateOp{fn, col, new_col, distinct});
}

FrameDescriptor FrameDescriptor::sort(const std::vector<std::pair<std::string, SortOrder>>& keys) const {
  return appended(SortOp{keys});
}

FrameDescriptor FrameDescriptor::head(std::int64_t k, std::int64_t offset) const {
  return appended(HeadOp{k, offset});
}

FrameDescriptor FrameDescriptor::cache() const {
  FrameDescriptor d = *this;
  d.cached_ = true;
  return d;
}

std::vector<std::string> FrameDescriptor::replay_columns() const {
  FrameDescriptor d;
  d.graphs_ = graphs_.empty() ? std::vector<std::string>{} : std::vector<std::string>{graphs_.front()};
  d.prefixes_ = prefixes_;
  for (OpRecord op : ops_) {
    apply_op(d, op);
    d.ops_.push_back(std::move(op));
  }
  return d.columns_;
}

KnowledgeGraph::KnowledgeGraph(std::string iri, PrefixMap prefixes)
    : iri_(std::move(iri)), prefixes_(std::move(prefixes)) {
  if (iri_.empty()) throw FrameError("graph IRI must not be empty");
}

std::string KnowledgeGraph::resolve(const std::string& name) const { return resolve_iri(name, prefixes_); }

FrameDescriptor KnowledgeGraph::seed(PatternTerm s, PatternTerm p, PatternTerm o) const {
  return FrameAccess::start(iri_, prefixes_, SeedOp{std::move(s), std::move(p), std::move(o), iri_});
}

FrameDescriptor KnowledgeGraph::feature_domain_range(const std::string& predicate, const std::string& c1,
                                                     const std::string& c2) const {
  return seed(Variable{c1}, Term::iri(resolve(predicate)), Variable{c2});
}

FrameDescriptor KnowledgeGraph::entities(const std::string& class_iri, const std::string& c) const {
  return seed(Variable{c}, Term::iri(vocab::rdf("type")), Term::iri(resolve(class_iri)));
}

FrameDescriptor KnowledgeGraph::explore_classes() const {
  return seed(Variable{"instance"}, Term::iri(vocab::rdf("type")), Variable{"class"})
      .group_by({"class"})
      .count("instance", "frequency");
}

}  // namespace kgframe
