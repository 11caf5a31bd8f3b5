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

// Shared toy grammars and tokenizers.
//
// TOY1: vocab {a, b, aa, ab, aaa, bb} with ids 0..5 in that order and merges
//   (a,a)->aa, (aa,a)->aaa, (a,b)->ab, (b,b)->bb. No byte base.
// TOY2: all 256 byte tokens plus "[]", "[[", "]]"; ids "["=1, "]"=2,
//   "[]"=3, "[["=4, "]]"=5, byte 0x00=0, other bytes 6..258 in byte order.
//   Merges in order ([,[), (],]), ([,]).
// TOY1B: the TOY1 merges over a byte base (bytes at ids 0..255).

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "tokfl/tokfl.hpp"

namespace tokfl::testing {

namespace toy1 {
inline constexpr TokenId a = 0, b = 1, aa = 2, ab = 3, aaa = 4, bb = 5;
}  // namespace toy1

namespace toy2 {
inline constexpr TokenId open = 1, close = 2, pair = 3, open2 = 4, close2 = 5;
}  // namespace toy2

inline Tokenizer make_toy1() {
  using namespace toy1;
  return Tokenizer({"a", "b", "aa", "ab", "aaa", "bb"},
                   {{a, a, aa}, {aa, a, aaa}, {a, b, ab}, {b, b, bb}});
}

inline Tokenizer make_toy2() {
  std::vector<Bytes> vocab(259);
  vocab[0] = Bytes(1, '\0');
  vocab[1] = "[";
  vocab[2] = "]";
  vocab[3] = "[]";
  vocab[4] = "[[";
  vocab[5] = "]]";
  TokenId next = 6;
  for (int b = 1; b < 256; ++b) {
    if (b == '[' || b == ']') continue;
    vocab[next++] = Bytes(1, static_cast<char>(b));
  }
  return Tokenizer::from_pairs(std::move(vocab), {{1, 1}, {2, 2}, {1, 2}});
}

inline Tokenizer make_toy1_bytes() {
  std::vector<Bytes> vocab;
  for (int b = 0; b < 256; ++b) vocab.emplace_back(1, static_cast<char>(b));
  for (const char* s : {"aa", "aaa", "ab", "bb"}) vocab.emplace_back(s);
  const TokenId a = 'a', b = 'b';
  return Tokenizer::from_pairs(std::move(vocab),
                               {{a, a}, {256, a}, {a, b}, {b, b}});
}

inline const char* kDyck = R"(S -> "" | "[" S "]" S ;)";
inline const char* kAnBn = R"(S -> "" | "a" S "b" ;)";
inline const char* kMixed = R"(
S -> "" | Item S ;
Item -> "[" S "]" | "a" | "b" | "é" | "你" ;
)";

inline Grammar dyck_bytes() { return parse_grammar(kDyck, Alphabet::byte); }

inline std::filesystem::path data_dir() { return TOKFL_DATA_DIR; }

/// Bytes of a token-id list, shorthand for tests.
inline TokenSequence ids(std::initializer_list<TokenId> l) { return l; }

}  // namespace tokfl::testing
