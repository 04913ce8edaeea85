#pragma once

#include "kgframe/frame/frame.hpp"
#include "kgframe/query/model.hpp"

namespace kgframe {

// Fault injection for mutation tests of the verification path.
struct GeneratorHooks {
  // Emit optional expands as mandatory triples.
  bool optional_as_mandatory = false;
};

// Builds the single query model of a frame by replaying its operator queue
// in FIFO order. Nests only where grouping, modifiers, outer joins or filter
// scoping force it. Throws FrameError for a queue that does not start with a
// seed.
QueryModel generate(const FrameDescriptor& frame, const GeneratorHooks& hooks = {});

// Baseline: one subquery per recorded operator, joined at one outer level.
QueryModel naive_generate(const FrameDescriptor& frame);

}  // namespace kgframe
