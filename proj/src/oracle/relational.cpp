#include "kgframe/oracle/relational.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kgframe/error.hpp"
#include "kgframe/oracle/aggregate.hpp"
#include "kgframe/oracle/algebra.hpp"

namespace kgframe {

namespace relational {

ResultTable scan(const GraphStore& store, const SeedOp& seed) {
  ResultTable t;
  const PatternTerm* pos[3] = {&seed.subject, &seed.predicate, &seed.object};
  for (const PatternTerm* p : pos)
    if (const auto* v = std::get_if<Variable>(p))
      if (!t.index_of(v->name)) t.columns.push_back(v->name);
  for (const Triple& tr : store.triples()) {
    const Term* vals[3] = {&tr.subject, &tr.predicate, &tr.object};
    Row r(t.columns.size());
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      if (const auto* term = std::get_if<Term>(pos[i])) {
        ok = *term == *vals[i];
        continue;
      }
      auto idx = *t.index_of(std::get<Variable>(*pos[i]).name);
      if (r[idx]) ok = *r[idx] == *vals[i];
      else r[idx] = *vals[i];
    }
    if (ok) t.rows.push_back(std::move(r));
  }
  return t;
}

namespace {

struct JoinPlan {
  std::vector<std::string> columns;
  std::vector<std::pair<std::size_t, std::size_t>> shared;  // (a index, b index)
  std::vector<std::size_t> b_extra;
};

JoinPlan plan(const ResultTable& a, const ResultTable& b) {
  JoinPlan p;
  p.columns = a.columns;
  for (std::size_t j = 0; j < b.columns.size(); ++j) {
    if (auto i = a.index_of(b.columns[j])) {
      p.shared.emplace_back(*i, j);
    } else {
      p.columns.push_back(b.columns[j]);
      p.b_extra.push_back(j);
    }
  }
  return p;
}

bool rows_compatible(const JoinPlan& p, const Row& x, const Row& y) {
  for (auto [i, j] : p.shared)
    if (x[i] && y[j] && *x[i] != *y[j]) return false;
  return true;
}

Row merged(const JoinPlan& p, const Row& x, const Row& y) {
  Row r = x;
  for (auto [i, j] : p.shared)
    if (!r[i]) r[i] = y[j];
  for (auto j : p.b_extra) r.push_back(y[j]);
  return r;
}

ResultTable left_outer(const ResultTable& a, const ResultTable& b) {
  JoinPlan p = plan(a, b);
  ResultTable out;
  out.columns = p.columns;
  for (const auto& x : a.rows) {
    bool matched = false;
    for (const auto& y : b.rows)
      if (rows_compatible(p, x, y)) {
        out.rows.push_back(merged(p, x, y));
        matched = true;
      }
    if (!matched) {
      Row r = x;
      r.resize(p.columns.size());
      out.rows.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace

ResultTable join(const ResultTable& a, const ResultTable& b, JoinType type) {
  switch (type) {
    case JoinType::kInner: {
      JoinPlan p = plan(a, b);
      ResultTable out;
      out.columns = p.columns;
      for (const auto& x : a.rows)
        for (const auto& y : b.rows)
          if (rows_compatible(p, x, y)) out.rows.push_back(merged(p, x, y));
      return out;
    }
    case JoinType::kLeftOuter:
      return left_outer(a, b);
    case JoinType::kRightOuter:
      return left_outer(b, a);
    case JoinType::kFullOuter:
      return padded_union(left_outer(a, b), left_outer(b, a));
  }
  throw EvalError("unknown join type");
}

ResultTable select(const ResultTable& t, const std::vector<FilterEntry>& entries) {
  ResultTable out;
  out.columns = t.columns;
  for (const auto& r : t.rows) {
    Bindings lookup = [&](const std::string& v) -> const Term* {
      auto i = t.index_of(v);
      return i && r[*i] ? &*r[*i] : nullptr;
    };
    bool keep = true;
    for (const auto& e : entries) {
      const Term* value = lookup(e.col);
      for (const auto& c : e.conditions)
        if (!condition_holds(c, value, lookup)) keep = false;
    }
    if (keep) out.rows.push_back(r);
  }
  return out;
}

ResultTable project(const ResultTable& t, const std::vector<std::string>& cols) {
  std::vector<std::size_t> idx;
  for (const auto& c : cols) {
    auto i = t.index_of(c);
    if (!i) throw EvalError("unknown column '" + c + "'");
    idx.push_back(*i);
  }
  ResultTable out;
  out.columns = cols;
  for (const auto& r : t.rows) {
    Row n;
    for (auto i : idx) n.push_back(r[i]);
    out.rows.push_back(std::move(n));
  }
  return out;
}

ResultTable rename(ResultTable t, const std::string& from, const std::string& to) {
  for (auto& c : t.columns)
    if (c == from) c = to;
  return t;
}

ResultTable group(const ResultTable& t, const std::vector<std::string>& cols, const std::vector<Aggregation>& aggs) {
  std::vector<std::size_t> key_idx;
  for (const auto& c : cols) key_idx.push_back(*t.index_of(c));
  std::map<Row, std::vector<const Row*>> groups;
  for (const auto& r : t.rows) {
    Row key;
    for (auto i : key_idx) key.push_back(r[i]);
    groups[key].push_back(&r);
  }
  if (groups.empty() && cols.empty()) groups[Row{}];
  ResultTable out;
  out.columns = cols;
  for (const auto& a : aggs) out.columns.push_back(a.target);
  for (const auto& [key, members] : groups) {
    Row r = key;
    for (const auto& a : aggs) {
      auto src = t.index_of(a.source);
      if (!src) throw EvalError("unknown column '" + a.source + "'");
      std::vector<Term> values;
      for (const Row* m : members)
        if ((*m)[*src]) values.push_back(*(*m)[*src]);
      r.push_back(aggregate_values(a.fn, std::move(values), a.distinct));
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

ResultTable padded_union(const ResultTable& a, const ResultTable& b) {
  ResultTable out;
  out.columns = a.columns;
  for (const auto& c : b.columns)
    if (!out.index_of(c)) out.columns.push_back(c);
  for (const ResultTable* t : {&a, &b})
    for (const auto& r : t->rows) {
      Row n(out.columns.size());
      for (std::size_t i = 0; i < t->columns.size(); ++i) n[*out.index_of(t->columns[i])] = r[i];
      out.rows.push_back(std::move(n));
    }
  return out;
}

ResultTable sort_slice(const ResultTable& t, const std::vector<OrderSpec>& keys, std::optional<std::int64_t> limit,
                       std::optional<std::int64_t> offset) {
  // same row layout as the algebra side: columns in name order
  std::vector<std::string> names = t.columns;
  std::sort(names.begin(), names.end());
  std::vector<std::vector<std::optional<Term>>> rows;
  for (const auto& r : t.rows) {
    std::vector<std::optional<Term>> n;
    for (const auto& c : names) n.push_back(r[*t.index_of(c)]);
    rows.push_back(std::move(n));
  }
  std::vector<std::size_t> key_idx;
  std::vector<bool> desc;
  for (const auto& k : keys) {
    auto it = std::find(names.begin(), names.end(), k.var);
    if (it == names.end()) throw EvalError("unknown sort column '" + k.var + "'");
    key_idx.push_back(static_cast<std::size_t>(it - names.begin()));
    desc.push_back(k.order == SortOrder::kDesc);
  }
  ResultTable out;
  out.columns = t.columns;
  for (auto i : slice_order(rows, key_idx, desc, limit, offset)) out.rows.push_back(t.rows[i]);
  return out;
}

}  // namespace relational

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

class RelationalEvaluator {
 public:
  explicit RelationalEvaluator(const Dataset& data) : data_(data) {}

  ResultTable run(const FrameDescriptor& f) {
    for (const auto& op : f.ops()) {
      if (!std::holds_alternative<AggregationOp>(op)) close_group();
      std::visit(Overloaded{
                     [&](const SeedOp& s) { t_ = relational::scan(store(s.graph), s); },
                     [&](const ExpandOp& e) {
                       ResultTable step;
                       step.columns = {e.col, e.new_col};
                       for (const Triple& tr : store(e.graph).triples()) {
                         if (!tr.predicate.is_iri() || tr.predicate.as_iri().value != e.predicate) continue;
                         if (e.dir == Direction::kOut) step.rows.push_back({tr.subject, tr.object});
                         else step.rows.push_back({tr.object, tr.subject});
                       }
                       t_ = relational::join(t_, step, e.optional ? JoinType::kLeftOuter : JoinType::kInner);
                       order_.clear();
                     },
                     [&](const FilterOp& fo) { t_ = relational::select(t_, fo.entries); },
                     [&](const SelectColsOp& s) {
                       t_ = relational::project(t_, s.cols);
                       bool keys_kept = std::all_of(order_.begin(), order_.end(), [&](const OrderSpec& o) {
                         return std::find(s.cols.begin(), s.cols.end(), o.var) != s.cols.end();
                       });
                       if (!keys_kept) order_.clear();
                     },
                     [&](const JoinOp& j) {
                       ResultTable other = RelationalEvaluator(data_).run(*j.other);
                       ResultTable self = relational::rename(std::move(t_), j.col, j.new_col);
                       other = relational::rename(std::move(other), j.other_col, j.new_col);
                       t_ = relational::join(self, other, j.type);
                       order_.clear();
                     },
                     [&](const GroupByOp& g) {
                       pending_input_ = t_;
                       pending_cols_ = g.cols;
                       pending_aggs_.clear();
                       grouping_ = true;
                       order_.clear();
                     },
                     [&](const AggregationOp& a) { pending_aggs_.push_back({a.fn, a.col, a.new_col, a.distinct}); },
                     [&](const AggregateOp& a) {
                       t_ = relational::group(t_, {}, {{a.fn, a.col, a.new_col, a.distinct}});
                       order_.clear();
                     },
                     [&](const SortOp& s) {
                       order_.clear();
                       for (const auto& [c, o] : s.keys) order_.push_back({c, o});
                     },
                     [&](const HeadOp& h) {
                       t_ = relational::sort_slice(t_, order_, h.k,
                                                   h.offset > 0 ? std::optional<std::int64_t>(h.offset) : std::nullopt);
                     },
                 },
                 op);
    }
    close_group();
    // column order of the frame
    return relational::project(t_, f.columns());
  }

 private:
  void close_group() {
    if (!grouping_) return;
    t_ = relational::group(pending_input_, pending_cols_, pending_aggs_);
    grouping_ = false;
  }

  const GraphStore& store(const std::string& g) {
    const GraphStore* s = data_.find(g);
    if (!s) throw EvalError("unknown graph <" + g + ">");
    return *s;
  }

  const Dataset& data_;
  ResultTable t_;
  bool grouping_ = false;
  ResultTable pending_input_;
  std::vector<std::string> pending_cols_;
  std::vector<Aggregation> pending_aggs_;
  std::vector<OrderSpec> order_;
};

}  // namespace

ResultTable eval_frame_relational(const FrameDescriptor& frame, const Dataset& data) {
  return RelationalEvaluator(data).run(frame);
}

}  // namespace kgframe
