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

#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tokfl/tokfl.hpp"

namespace tokfl {
namespace {

using namespace testing::toy1;
using testing::ids;

// Straightforward reference: rescan for the lowest-rank pair each step.
TokenSequence naive_tokenize(const Tokenizer& t, const Bytes& s) {
  TokenSequence seq;
  for (char c : s) seq.push_back(*t.byte_token(static_cast<unsigned char>(c)));
  while (true) {
    std::size_t best_rank = SIZE_MAX, best_at = 0;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      for (std::size_t r = 0; r < t.merges().size(); ++r) {
        const MergeRule& m = t.merges()[r];
        if (m.left == seq[i] && m.right == seq[i + 1] && r < best_rank) {
          best_rank = r;
          best_at = i;
        }
      }
    }
    if (best_rank == SIZE_MAX) return seq;
    seq[best_at] = t.merges()[best_rank].merged;
    seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(best_at) + 1);
  }
}

TEST(Tokenizer, Toy1Shape) {
  const Tokenizer t = testing::make_toy1();
  EXPECT_EQ(t.size(), 6u);
  EXPECT_FALSE(t.byte_base());
  EXPECT_EQ(t.max_token_length(), 3u);
  EXPECT_EQ(t.rank_of(a, a), 0u);
  EXPECT_EQ(t.rank_of(aa, a), 1u);
  EXPECT_EQ(t.rank_of(b, b), 3u);
  EXPECT_EQ(t.rank_of(b, a), std::nullopt);
  EXPECT_EQ(t.producing_merge(aaa), 1u);
  EXPECT_EQ(t.producing_merge(a), std::nullopt);
}

TEST(Tokenizer, RejectsBadInvariants) {
  EXPECT_THROW(Tokenizer({"a", "a"}, {}), TokenizerError);
  EXPECT_THROW(Tokenizer({"a", ""}, {}), TokenizerError);
  // Output is not the concatenation of its inputs.
  EXPECT_THROW(Tokenizer({"a", "b", "aa", "ab"}, {{2, 0, 3}}), TokenizerError);
  EXPECT_THROW(Tokenizer({"a", "aa"}, {{0, 0, 1}, {0, 0, 1}}), TokenizerError);
  EXPECT_THROW(Tokenizer({"a"}, {{0, 0, 7}}), TokenizerError);
  EXPECT_THROW(Tokenizer::from_pairs({"a", "b"}, {{0, 1}}), TokenizerError);
}

TEST(Tokenizer, ByteIdentity) {
  const Tokenizer t = Tokenizer::byte_identity();
  EXPECT_TRUE(t.byte_base());
  const Bytes s("\x00\xFFhello", 7);
  const TokenSequence out = tokenize(t, s);
  ASSERT_EQ(out.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(out[i], static_cast<unsigned char>(s[i]));
  }
}

TEST(Tokenize, Toy1Examples) {
  const Tokenizer t = testing::make_toy1();
  EXPECT_EQ(tokenize(t, "aaabb"), ids({aaa, bb}));
  // Rank 0 (a,a) fires again on aa,a,a before rank 1 (aa,a) is considered.
  EXPECT_EQ(tokenize(t, "aaaa"), ids({aa, aa}));
  EXPECT_EQ(tokenize(t, "aaa"), ids({aaa}));
  EXPECT_EQ(tokenize(t, "ab"), ids({ab}));
  EXPECT_EQ(tokenize(t, "ba"), ids({b, a}));
  EXPECT_EQ(tokenize(t, ""), ids({}));
}

TEST(Tokenize, MissingByteToken) {
  const Tokenizer t = testing::make_toy1();
  EXPECT_THROW(tokenize(t, "abc"), TokenizerError);
  EXPECT_THROW(tokenize(t, "\xFF"), TokenizerError);
}

TEST(Tokenize, MatchesNaiveReference) {
  std::vector<Tokenizer> toks;
  toks.push_back(testing::make_toy1());
  toks.push_back(testing::make_toy2());
  toks.push_back(testing::make_toy1_bytes());
  // Chains where later merges re-create earlier strings.
  toks.push_back(Tokenizer::from_pairs({"a", "b", "ab", "ba", "aba", "bab"},
                                       {{2, 0}, {0, 1}, {1, 0}, {1, 2}}));
  for (const Tokenizer& t : toks) {
    const Bytes alphabet = partition_alphabet(t);
    for_each_string(alphabet, 7, [&](const Bytes& s) {
      EXPECT_EQ(tokenize(t, s), naive_tokenize(t, s)) << s;
    });
  }
}

TEST(Detokenize, Examples) {
  const Tokenizer t = testing::make_toy1();
  EXPECT_EQ(detokenize(t, ids({aaa, bb})), "aaabb");
  EXPECT_EQ(detokenize(t, ids({})), "");
  EXPECT_THROW(detokenize(t, ids({6})), UnknownTokenError);
}

TEST(Detokenize, RoundTrip) {
  const Tokenizer t = testing::make_toy2();
  std::mt19937 rng(11);
  for (int i = 0; i < 500; ++i) {
    Bytes s;
    for (int k = rng() % 12; k > 0; --k) s.push_back("[]x"[rng() % 3]);
    EXPECT_EQ(detokenize(t, tokenize(t, s)), s);
  }
}

TEST(Detokenize, IsHomomorphism) {
  const Tokenizer t = testing::make_toy1();
  std::mt19937 rng(5);
  auto random_ids = [&] {
    TokenSequence v;
    for (int k = rng() % 6; k > 0; --k) v.push_back(rng() % 6);
    return v;
  };
  for (int i = 0; i < 1000; ++i) {
    TokenSequence u = random_ids(), v = random_ids(), uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    EXPECT_EQ(detokenize(t, uv), detokenize(t, u) + detokenize(t, v));
  }
}

TEST(Tokenize, NotAHomomorphism) {
  const Tokenizer t = testing::make_toy1();
  TokenSequence split = tokenize(t, "a");
  split.push_back(tokenize(t, "a")[0]);
  EXPECT_NE(tokenize(t, "aa"), split);
  auto w = find_non_homomorphism_witness(t);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->first, "a");
  EXPECT_EQ(w->second, "a");
  EXPECT_FALSE(find_non_homomorphism_witness(Tokenizer::byte_identity()));
}

TEST(Tokenize, OutputHasNoApplicablePair) {
  const Tokenizer t = testing::make_toy1_bytes();
  for_each_string("ab", 8, [&](const Bytes& s) {
    const TokenSequence out = tokenize(t, s);
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
      EXPECT_FALSE(t.rank_of(out[i], out[i + 1])) << s;
    }
  });
}

TEST(Train, LearnsMostFrequentPair) {
  const std::vector<Bytes> corpus{"aaab"};
  const Tokenizer t = train(corpus, 1);
  ASSERT_EQ(t.merges().size(), 1u);
  EXPECT_EQ(t.bytes(t.merges()[0].merged), "aa");
  EXPECT_EQ(t.merges()[0].left, TokenId{'a'});
}

TEST(Train, OnlyRecurringPair) {
  const std::vector<Bytes> corpus{"ab", "ab"};
  const Tokenizer t = train(corpus, 1);
  ASSERT_EQ(t.merges().size(), 1u);
  EXPECT_EQ(t.bytes(t.merges()[0].merged), "ab");
  // Nothing recurs after that.
  EXPECT_EQ(train(corpus, 5).merges().size(), 1u);
}

TEST(Train, ZeroMergesIsByteIdentity) {
  const std::vector<Bytes> corpus{"hello world"};
  const Tokenizer t = train(corpus, 0);
  EXPECT_EQ(t.size(), 256u);
  EXPECT_TRUE(t.merges().empty());
  EXPECT_TRUE(t.byte_base());
}

TEST(Train, CountsAgreeWithOracle) {
  const std::vector<std::string> corpus{"abcabc", "bcbcbc", "xx"};
  const auto counts = testing::pair_counts(corpus);
  std::string best;
  int best_count = 0;
  // First occurrence across the corpus breaks ties.
  for (const auto& s : corpus) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const std::string p = s.substr(i, 2);
      if (counts.at(p) > best_count) {
        best = p;
        best_count = counts.at(p);
      }
    }
  }
  const std::vector<Bytes> bytes(corpus.begin(), corpus.end());
  const Tokenizer t = train(bytes, 1);
  EXPECT_EQ(t.bytes(t.merges()[0].merged), best);
}

TEST(Train, LargerRunIsValidAndCompresses) {
  std::vector<Bytes> corpus;
  std::mt19937 rng(1);
  const char* words[] = {"the ", "token ", "grammar ", "language ", "merge "};
  for (int i = 0; i < 200; ++i) {
    Bytes line;
    for (int k = 0; k < 8; ++k) line += words[rng() % 5];
    corpus.push_back(line);
  }
  const Tokenizer t = train(corpus, 60);
  EXPECT_EQ(t.merges().size(), 60u);
  EXPECT_TRUE(t.byte_base());
  for (const Bytes& line : corpus) {
    const TokenSequence out = tokenize(t, line);
    EXPECT_LT(out.size(), line.size() / 2);
    EXPECT_EQ(detokenize(t, out), line);
  }
}

TEST(Toy2, Shape) {
  const Tokenizer t = testing::make_toy2();
  EXPECT_EQ(t.size(), 259u);
  EXPECT_TRUE(t.byte_base());
  EXPECT_EQ(t.bytes(testing::toy2::open), "[");
  EXPECT_EQ(t.bytes(testing::toy2::close2), "]]");
  EXPECT_EQ(tokenize(t, "[[]]"), ids({4, 5}));
  EXPECT_EQ(tokenize(t, "[]"), ids({3}));
}

}  // namespace
}  // namespace tokfl
