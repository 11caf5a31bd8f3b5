// Copyright 2026 The tokfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tokfl/tokfl.hpp"

namespace tokfl {
namespace {

TEST(ForEachString, CountsAndOrder) {
  std::vector<Bytes> seen;
  for_each_string("ab", 2, [&](const Bytes& s) { seen.push_back(s); });
  EXPECT_EQ(seen, (std::vector<Bytes>{"", "a", "b", "aa", "ab", "ba", "bb"}));
  std::size_t n = 0;
  const std::vector<TokenId> five{1, 2, 3, 4, 5};
  for_each_sequence(five, 5, [&](const TokenSequence&) { ++n; });
  EXPECT_EQ(n, 3906u);
}

TEST(HomomorphismSuite, PassesOnToy1) {
  const SuiteReport r = verify_homomorphism(testing::make_toy1(), 10000, 1);
  EXPECT_TRUE(r.passed) << r.counterexample.value_or("");
  EXPECT_GE(r.checked, 10000u);
}

TEST(HomomorphismSuite, NoMergesNeedsNoWitness) {
  // Without merges tokenize is itself the byte homomorphism.
  const SuiteReport r = verify_homomorphism(Tokenizer::byte_identity(), 100, 1);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.notes.back(), "no merges: tokenize is the byte homomorphism");
}

TEST(EquivalenceSuite, DyckToy2) {
  const auto rec =
      TokenRecognizer::build(testing::dyck_bytes(), testing::make_toy2());
  const SuiteReport r = verify_equivalence(rec);
  EXPECT_TRUE(r.passed) << r.counterexample.value_or("");
  ASSERT_FALSE(r.notes.empty());
  EXPECT_EQ(r.notes[0], "3906 sequences checked");
}

TEST(PartitionSuite, Toy1) {
  const SuiteReport r = verify_partition(testing::make_toy1(), 8, 100000);
  EXPECT_TRUE(r.passed) << r.counterexample.value_or("");
  EXPECT_EQ(r.checked, 511u);  // 2^0 + ... + 2^8
}

TEST(PartitionSuite, BudgetLowersLength) {
  const SuiteReport r = verify_partition(testing::make_toy1(), 8, 40);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.checked, 31u);
}

}  // namespace
}  // namespace tokfl
