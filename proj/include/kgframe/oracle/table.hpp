#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgframe/rdf/solution.hpp"
#include "kgframe/rdf/term.hpp"

namespace kgframe {

// A table cell; nullopt is the null marker (unbound variable).
using Cell = std::optional<Term>;
using Row = std::vector<Cell>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<Row> rows;  // a bag: order carries no meaning for equality

  std::optional<std::size_t> index_of(const std::string& column) const;
  std::size_t size() const noexcept { return rows.size(); }
};

// λ: one row per mapping occurrence, unbound variables as null. Columns are
// `columns` when given, otherwise the bag's variables in name order.
ResultTable solution_to_table(const SolutionBag& bag, const std::vector<std::string>* columns = nullptr);

// Inverse of λ for null-free reasoning: each row becomes a mapping that
// binds its non-null cells.
SolutionBag table_to_solution(const ResultTable& table);

// Same column set (any order) and the same multiset of rows once columns
// are aligned by name. Nulls equal nulls.
bool bag_equal(const ResultTable& a, const ResultTable& b);

// Human-readable description of one row whose multiplicity differs between
// the two tables, or of the column mismatch; nullopt when bag_equal.
std::optional<std::string> bag_difference(const ResultTable& a, const ResultTable& b);

// Rows ordered by every column in `columns` order with compare_for_order.
void canonical_sort(ResultTable& t);

std::string cell_text(const Cell& c);

}  // namespace kgframe
