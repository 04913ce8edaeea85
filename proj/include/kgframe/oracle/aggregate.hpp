#pragma once

#include <optional>
#include <vector>

#include "kgframe/frame/frame.hpp"
#include "kgframe/rdf/term.hpp"

namespace kgframe {

// Aggregate over the bound values of one group (unbound ones are already
// skipped by the caller). nullopt is the error case: the target stays
// unbound while the row survives.
//   COUNT: integer count. SUM: 0 on empty input; integer when every input
//   is an integer, decimal otherwise. AVG: decimal, 0 on empty input.
//   MIN/MAX/SAMPLE: by compare_for_order, error on empty input (SAMPLE
//   picks the minimum so both evaluators agree).
// Non-numeric input to SUM/AVG is an error.
std::optional<Term> aggregate_values(AggFn fn, std::vector<Term> values, bool distinct);

}  // namespace kgframe
