#include "kgframe/oracle/table.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace kgframe {

namespace {

bool row_less(const Row& a, const Row& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    auto c = compare_for_order(a[i], b[i]);
    if (c != 0) return c < 0;
    // compare_for_order may tie distinct terms (e.g. 1 and 1.0); break on structure
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

// Rows re-ordered to the sorted column order, then sorted.
std::vector<Row> normalized(const ResultTable& t) {
  std::vector<std::string> cols = t.columns;
  std::sort(cols.begin(), cols.end());
  std::vector<std::size_t> idx;
  for (const auto& c : cols) idx.push_back(*t.index_of(c));
  std::vector<Row> rows;
  rows.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    Row n;
    for (auto i : idx) n.push_back(r[i]);
    rows.push_back(std::move(n));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::string row_text(const std::vector<std::string>& cols, const Row& r) {
  std::string s = "{";
  for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? ", " : "") + cols[i] + "=" + cell_text(r[i]);
  return s + "}";
}

}  // namespace

std::optional<std::size_t> ResultTable::index_of(const std::string& column) const {
  auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns.begin());
}

ResultTable solution_to_table(const SolutionBag& bag, const std::vector<std::string>* columns) {
  ResultTable t;
  if (columns) {
    t.columns = *columns;
  } else {
    auto vars = bag.variables();
    t.columns.assign(vars.begin(), vars.end());
  }
  for (const auto& [m, count] : bag) {
    Row r;
    for (const auto& c : t.columns) r.push_back(m.get(c));
    for (std::size_t k = 0; k < count; ++k) t.rows.push_back(r);
  }
  return t;
}

SolutionBag table_to_solution(const ResultTable& table) {
  SolutionBag bag;
  for (const auto& r : table.rows) {
    Mapping m;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      if (r[i]) m.bind(table.columns[i], *r[i]);
    bag.add(m);
  }
  return bag;
}

bool bag_equal(const ResultTable& a, const ResultTable& b) { return !bag_difference(a, b).has_value(); }

std::optional<std::string> bag_difference(const ResultTable& a, const ResultTable& b) {
  std::set<std::string> ca(a.columns.begin(), a.columns.end()), cb(b.columns.begin(), b.columns.end());
  if (ca != cb || ca.size() != a.columns.size() || cb.size() != b.columns.size()) {
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& c : v) s += (s.empty() ? "" : ",") + c;
      return s;
    };
    return "column sets differ: [" + join(a.columns) + "] vs [" + join(b.columns) + "]";
  }
  auto ra = normalized(a), rb = normalized(b);
  if (ra == rb) return std::nullopt;
  std::vector<std::string> cols(ca.begin(), ca.end());
  std::map<Row, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& r : ra) ++counts[r].first;
  for (const auto& r : rb) ++counts[r].second;
  for (const auto& [r, c] : counts)
    if (c.first != c.second)
      return "row " + row_text(cols, r) + " occurs " + std::to_string(c.first) + " time(s) vs " +
             std::to_string(c.second);
  return "tables differ";
}

void canonical_sort(ResultTable& t) { std::stable_sort(t.rows.begin(), t.rows.end(), row_less); }

std::string cell_text(const Cell& c) { return c ? c->to_ntriples() : "null"; }

}  // namespace kgframe
