#include <gtest/gtest.h>

#include "checks.hpp"

using namespace kgframe::testing;

// Each algebra operator against its relational counterpart on 200 random
// pattern pairs.
TEST(OperatorEquivalence, AlgebraMatchesRelationalOperators) {
  std::array<int, 7> failures{};
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto r = operator_case(9000 + s);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i]) {
        if (failures[i]++ < 3) ADD_FAILURE() << kLemmaOps[i] << " seed " << 9000 + s << ": " << *r[i];
      }
  }
  for (std::size_t i = 0; i < failures.size(); ++i) EXPECT_EQ(failures[i], 0) << kLemmaOps[i];
}
