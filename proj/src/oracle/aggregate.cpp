#include "kgframe/oracle/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace kgframe {

namespace {

bool is_integer_term(const Term& t) {
  if (!t.is_literal()) return false;
  const auto& dt = t.as_literal().datatype;
  return dt == vocab::xsd("integer") || dt == vocab::xsd("int") || dt == vocab::xsd("long");
}

}  // namespace

std::optional<Term> aggregate_values(AggFn fn, std::vector<Term> values, bool distinct) {
  if (distinct) {
    std::set<Term> seen;
    std::vector<Term> unique;
    for (auto& v : values)
      if (seen.insert(v).second) unique.push_back(std::move(v));
    values = std::move(unique);
  }
  switch (fn) {
    case AggFn::kCount:
      return Term::integer(static_cast<std::int64_t>(values.size()));
    case AggFn::kSum:
    case AggFn::kAvg: {
      double total = 0;
      bool all_int = true;
      for (const auto& v : values) {
        auto n = numeric_value(v);
        if (!n) return std::nullopt;
        total += *n;
        all_int = all_int && is_integer_term(v);
      }
      if (fn == AggFn::kSum) {
        if (all_int) return Term::integer(static_cast<std::int64_t>(std::llround(total)));
        return Term::decimal(total);
      }
      if (values.empty()) return Term::decimal(0);
      return Term::decimal(total / static_cast<double>(values.size()));
    }
    case AggFn::kMin:
    case AggFn::kMax:
    case AggFn::kSample: {
      if (values.empty()) return std::nullopt;
      auto less = [](const Term& a, const Term& b) {
        auto c = compare_for_order(a, b);
        return c != 0 ? c < 0 : a < b;
      };
      if (fn == AggFn::kMax) return *std::max_element(values.begin(), values.end(), less);
      return *std::min_element(values.begin(), values.end(), less);
    }
  }
  return std::nullopt;
}

}  // namespace kgframe
