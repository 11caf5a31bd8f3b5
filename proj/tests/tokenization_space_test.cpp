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

#include <algorithm>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tokfl/tokfl.hpp"

namespace tokfl {
namespace {

using namespace testing::toy1;
using testing::ids;

std::vector<TokenSequence> all_of(TokenizationStream s) {
  std::vector<TokenSequence> out;
  while (auto seq = s.next()) out.push_back(*seq);
  return out;
}

std::set<std::string> vocab_set(const Tokenizer& t) {
  return {t.vocab().begin(), t.vocab().end()};
}

TEST(Enumerate, AaaaInLexicographicOrder) {
  const Tokenizer t = testing::make_toy1();
  EXPECT_EQ(all_of(enumerate_tokenizations(t, "aaaa")),
            (std::vector<TokenSequence>{{a, a, a, a},
                                        {a, a, aa},
                                        {a, aa, a},
                                        {a, aaa},
                                        {aa, a, a},
                                        {aa, aa},
                                        {aaa, a}}));
}

TEST(Enumerate, EmptyAndUnsegmentable) {
  const Tokenizer t = testing::make_toy1();
  EXPECT_EQ(all_of(enumerate_tokenizations(t, "")),
            std::vector<TokenSequence>{TokenSequence{}});
  const Tokenizer only_aa({"aa"}, {});
  EXPECT_TRUE(all_of(enumerate_tokenizations(only_aa, "aaa")).empty());
  EXPECT_EQ(count_tokenizations(only_aa, "aaa"), 0u);
  EXPECT_TRUE(all_of(enumerate_tokenizations(t, "abc")).empty());
}

TEST(Enumerate, Limit) {
  const Tokenizer t = testing::make_toy1();
  EXPECT_EQ(all_of(enumerate_tokenizations(t, "aaabb", 3)).size(), 3u);
  EXPECT_EQ(all_of(enumerate_tokenizations(t, "aaabb", 0)).size(), 0u);
}

TEST(Enumerate, MatchesBruteForceSegmentation) {
  for (const Tokenizer& t : {testing::make_toy1(), testing::make_toy2()}) {
    const auto vocab = vocab_set(t);
    const Bytes alphabet = partition_alphabet(t);
    for_each_string(alphabet, 7, [&](const Bytes& s) {
      std::set<std::vector<std::string>> expected;
      for (auto& seg : testing::brute_force_segmentations(s, vocab)) {
        expected.insert(seg);
      }
      std::set<std::vector<std::string>> got;
      std::size_t n = 0;
      for (const auto& seq : all_of(enumerate_tokenizations(t, s))) {
        std::vector<std::string> pieces;
        for (TokenId id : seq) pieces.push_back(t.bytes(id));
        got.insert(pieces);
        ++n;
      }
      EXPECT_EQ(n, got.size()) << "duplicates for " << s;
      EXPECT_EQ(got, expected) << s;
      EXPECT_EQ(count_tokenizations(t, s), expected.size()) << s;
    });
  }
}

TEST(Count, Constants) {
  const Tokenizer t = testing::make_toy1();
  EXPECT_EQ(count_tokenizations(t, "aaaa"), 7u);
  EXPECT_EQ(count_tokenizations(t, "aaabb"), 10u);
  EXPECT_EQ(count_tokenizations(t, ""), 1u);
}

TEST(Count, Overflow) {
  // Every prefix of a 200-byte run is a tokenization point; parts of length
  // 1..3 give tribonacci growth, past 2^64 well before 200.
  const Tokenizer t = testing::make_toy1();
  EXPECT_THROW(count_tokenizations(t, std::string(200, 'a')),
               CountOverflowError);
  EXPECT_NO_THROW(count_tokenizations(t, std::string(40, 'a')));
}

TEST(Count, StreamIsLazyOnHugeSpaces) {
  const Tokenizer t = testing::make_toy1();
  auto s = enumerate_tokenizations(t, std::string(200, 'a'), 5);
  EXPECT_EQ(s.next(), TokenSequence(200, a));
  EXPECT_EQ(all_of(std::move(s)).size(), 4u);
}

TEST(FindMergeablePair, Examples) {
  const Tokenizer t = testing::make_toy1();
  EXPECT_EQ(find_mergeable_pair(t, ids({a, a, a, b, b})), 0u);
  EXPECT_EQ(find_mergeable_pair(t, ids({aa, ab, b})), std::nullopt);
  EXPECT_EQ(find_mergeable_pair(t, ids({aaa, bb})), std::nullopt);
  EXPECT_EQ(find_mergeable_pair(t, ids({bb, b, b})), 1u);
  EXPECT_THROW(find_mergeable_pair(t, ids({9})), UnknownTokenError);
}

TEST(Unmerge, Examples) {
  const Tokenizer t = testing::make_toy1();
  EXPECT_EQ(unmerge(t, ids({aaa, bb})), ids({a, a, a, b, b}));
  EXPECT_EQ(unmerge(t, ids({aa, ab, b})), ids({a, a, a, b, b}));
  EXPECT_EQ(unmerge(t, ids({a, b})), ids({a, b}));
  const Tokenizer t2 = testing::make_toy2();
  EXPECT_EQ(unmerge(t2, ids({4, 3, 5})), ids({1, 1, 1, 2, 2, 2}));
}

TEST(Unmerge, NeedsByteTokens) {
  const Tokenizer t({"ab"}, {});
  EXPECT_THROW(unmerge(t, ids({0})), TokenizerError);
}

TEST(Classify, WorkedExample) {
  const Tokenizer t = testing::make_toy1();
  const Classification proper = classify(t, ids({aaa, bb}));
  EXPECT_EQ(proper.kind, TokenizationKind::proper);

  const Classification wrong = classify(t, ids({aa, ab, b}));
  EXPECT_EQ(wrong.kind, TokenizationKind::wrong_merge_order);
  EXPECT_EQ(wrong.proper, ids({aaa, bb}));

  const Classification mergeable = classify(t, ids({a, a, a, b, b}));
  EXPECT_EQ(mergeable.kind, TokenizationKind::mergeable);
  EXPECT_EQ(mergeable.mergeable_at, 0u);

  EXPECT_EQ(classify(t, ids({})).kind, TokenizationKind::proper);
  EXPECT_THROW(classify(t, ids({42})), UnknownTokenError);
}

TEST(Classify, SwappedMergeOrderChangesProperForm) {
  // With (a,b) ranked before (a,a), "aaabb" tokenizes as aa, ab, b.
  const Tokenizer swapped({"a", "b", "aa", "ab", "aaa", "bb"},
                          {{a, b, ab}, {a, a, aa}, {aa, a, aaa}, {b, b, bb}});
  EXPECT_EQ(tokenize(swapped, "aaabb"), ids({aa, ab, b}));
  EXPECT_EQ(classify(swapped, ids({aa, ab, b})).kind, TokenizationKind::proper);
  EXPECT_EQ(classify(swapped, ids({aaa, bb})).kind,
            TokenizationKind::wrong_merge_order);
}

TEST(Classify, KindNames) {
  EXPECT_EQ(to_string(TokenizationKind::proper), "Proper");
  EXPECT_EQ(to_string(TokenizationKind::mergeable), "Mergeable");
  EXPECT_EQ(to_string(TokenizationKind::wrong_merge_order), "WrongMergeOrder");
}

TEST(Classify, Toy2ImproperMember) {
  const Tokenizer t = testing::make_toy2();
  const Classification c = classify(t, ids({1, 3, 2}));
  EXPECT_EQ(c.kind, TokenizationKind::wrong_merge_order);
  EXPECT_EQ(c.proper, ids({4, 5}));
  EXPECT_EQ(classify(t, ids({1, 1, 2, 2})).kind, TokenizationKind::mergeable);
}

TEST(Classify, ExactlyOneProperPerString) {
  const Tokenizer t = testing::make_toy1_bytes();
  for_each_string("ab", 7, [&](const Bytes& s) {
    int proper = 0;
    for (const auto& seq : all_of(enumerate_tokenizations(t, s))) {
      proper += classify(t, seq).kind == TokenizationKind::proper;
    }
    EXPECT_EQ(proper, 1) << s;
  });
}

}  // namespace
}  // namespace tokfl
