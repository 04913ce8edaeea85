#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace kgframe::testing {

// One random program checked against the relational oracle: nullopt when the
// algebra result of the generated query (naive or optimized) bag-equals the
// oracle, else a readable failure with the operator trace.
std::optional<std::string> compilation_case(std::uint64_t seed, bool naive);

inline constexpr std::array<const char*, 7> kLemmaOps = {"Join", "LeftJoin", "Union", "Extend",
                                                         "Filter", "Project", "GroupAgg"};

// One random pattern pair over a random store of at most 20 triples, each
// algebra operator compared with its relational counterpart. Entry i is the
// failure for kLemmaOps[i], nullopt when it holds.
std::array<std::optional<std::string>, 7> operator_case(std::uint64_t seed);

}  // namespace kgframe::testing
