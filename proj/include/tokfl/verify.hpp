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

// Executable property suites:
//
//   homomorphism  detokenize is a concatenation homomorphism, round trips
//                 through tokenize, and tokenize itself is not one.
//   equivalence   token-level recognition agrees with byte-level
//                 recognition of the detokenized string, and string
//                 membership is decidable through the proper tokenization.
//   partition     every segmentation of a string classifies into exactly
//                 one kind, exactly one is proper, and the DP count matches
//                 the enumeration.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tokfl/bpe.hpp"
#include "tokfl/common.hpp"
#include "tokfl/grammar.hpp"
#include "tokfl/recognizer.hpp"
#include "tokfl/token_recognizer.hpp"
#include "tokfl/tokenization_space.hpp"

namespace tokfl {

struct SuiteReport {
  std::string suite;
  bool passed = true;
  std::size_t checked = 0;
  std::vector<std::string> notes;
  std::optional<std::string> counterexample;

  void fail(std::string what) {
    if (passed) counterexample = std::move(what);
    passed = false;
  }
};

inline std::string format_ids(std::span<const TokenId> ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(ids[i]);
  }
  return out;
}

/// Calls `fn` with every string of length 0..max_len over `alphabet`,
/// shortest first, lexicographic within a length.
inline void for_each_string(const Bytes& alphabet, std::size_t max_len,
                            const std::function<void(const Bytes&)>& fn) {
  Bytes s;
  fn(s);
  if (alphabet.empty()) return;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> digits(len, 0);
    while (true) {
      s.assign(len, '\0');
      for (std::size_t i = 0; i < len; ++i) s[i] = alphabet[digits[i]];
      fn(s);
      std::size_t i = len;
      while (i > 0 && ++digits[i - 1] == alphabet.size()) digits[--i] = 0;
      if (i == 0) break;
    }
  }
}

/// Calls `fn` with every sequence of length 0..max_len over `alphabet`.
inline void for_each_sequence(
    std::span<const TokenId> alphabet, std::size_t max_len,
    const std::function<void(const TokenSequence&)>& fn) {
  TokenSequence seq;
  fn(seq);
  if (alphabet.empty()) return;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> digits(len, 0);
    while (true) {
      seq.assign(len, 0);
      for (std::size_t i = 0; i < len; ++i) seq[i] = alphabet[digits[i]];
      fn(seq);
      std::size_t i = len;
      while (i > 0 && ++digits[i - 1] == alphabet.size()) digits[--i] = 0;
      if (i == 0) break;
    }
  }
}

/// A pair (x, y) with tokenize(x + y) != tokenize(x) ++ tokenize(y), searched
/// over the byte strings of each merge's inputs in rank order.
inline std::optional<std::pair<Bytes, Bytes>> find_non_homomorphism_witness(
    const Tokenizer& t) {
  auto tokenizable = [&](const Bytes& s) {
    return std::all_of(s.begin(), s.end(), [&](char c) {
      return t.byte_token(static_cast<unsigned char>(c)).has_value();
    });
  };
  for (const MergeRule& m : t.merges()) {
    const Bytes& x = t.bytes(m.left);
    const Bytes& y = t.bytes(m.right);
    if (!tokenizable(x) || !tokenizable(y)) continue;
    TokenSequence split = tokenize(t, x);
    const TokenSequence tail = tokenize(t, y);
    split.insert(split.end(), tail.begin(), tail.end());
    if (split != tokenize(t, x + y)) return std::make_pair(x, y);
  }
  return std::nullopt;
}

inline SuiteReport verify_homomorphism(const Tokenizer& t, std::size_t budget,
                                       std::uint64_t seed) {
  SuiteReport r;
  r.suite = "homomorphism";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len_dist(0, 8);
  std::uniform_int_distribution<TokenId> id_dist(
      0, static_cast<TokenId>(t.size() - 1));
  auto random_seq = [&] {
    TokenSequence s(len_dist(rng));
    for (auto& id : s) id = id_dist(rng);
    return s;
  };
  for (std::size_t i = 0; i < budget; ++i) {
    const TokenSequence u = random_seq(), v = random_seq();
    TokenSequence uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    ++r.checked;
    if (detokenize(t, uv) != detokenize(t, u) + detokenize(t, v)) {
      r.fail("detokenize(u ++ v) != detokenize(u) + detokenize(v) for u = [" +
             format_ids(u) + "], v = [" + format_ids(v) + "]");
    }
  }
  r.notes.push_back(std::to_string(budget) + " random pairs checked");

  Bytes bytes;
  for (int b = 0; b < 256; ++b) {
    if (t.byte_token(static_cast<unsigned char>(b))) bytes.push_back(static_cast<char>(b));
  }
  const std::size_t trips = std::min<std::size_t>(budget, 2000);
  if (!bytes.empty()) {
    std::uniform_int_distribution<std::size_t> byte_dist(0, bytes.size() - 1);
    std::uniform_int_distribution<std::size_t> slen(0, 24);
    for (std::size_t i = 0; i < trips; ++i) {
      Bytes s(slen(rng), '\0');
      for (auto& c : s) c = bytes[byte_dist(rng)];
      ++r.checked;
      if (detokenize(t, tokenize(t, s)) != s) {
        r.fail("round trip fails on \"" + escape_bytes(s) + "\"");
      }
    }
    r.notes.push_back(std::to_string(trips) + " round trips checked");
  }

  if (t.merges().empty()) {
    r.notes.push_back("no merges: tokenize is the byte homomorphism");
  } else if (auto w = find_non_homomorphism_witness(t)) {
    r.notes.push_back("tokenize is not a homomorphism: x = \"" +
                      escape_bytes(w->first) + "\", y = \"" +
                      escape_bytes(w->second) + "\"");
  } else {
    r.fail("no witness found for tokenize being non-homomorphic");
  }
  return r;
}

struct EquivalenceOptions {
  std::size_t max_tokens = 5;  // exhaustive token-sequence length
  std::size_t max_string = 8;  // exhaustive string length
  /// Alphabet for the string part; defaults to the grammar's terminal bytes.
  std::optional<Bytes> string_alphabet;
};

/// Bytes that occur as terminals in `g`, sorted.
inline Bytes terminal_bytes(const Grammar& g) {
  std::set<unsigned char> seen;
  for (const auto& p : g.productions()) {
    for (const Symbol& s : p.body) {
      if (s.is_terminal() && s.value <= 0xFF) seen.insert(static_cast<unsigned char>(s.value));
    }
  }
  return Bytes(seen.begin(), seen.end());
}

inline SuiteReport verify_equivalence(const TokenRecognizer& rec,
                                      const EquivalenceOptions& opt = {}) {
  SuiteReport r;
  r.suite = "equivalence";
  const Tokenizer& t = rec.tokenizer();
  const ChartRecognizer& chart = rec.chart();
  const Bytes terminals = terminal_bytes(chart.grammar());

  // Tokens spelled entirely with grammar terminals; every other token is
  // dead on arrival in any position.
  std::vector<TokenId> alphabet;
  for (TokenId id = 0; id < t.size(); ++id) {
    const Bytes& b = t.bytes(id);
    if (std::all_of(b.begin(), b.end(), [&](char c) {
          return terminals.find(c) != Bytes::npos;
        })) {
      alphabet.push_back(id);
    }
  }
  std::size_t sequences = 0;
  for_each_sequence(alphabet, opt.max_tokens, [&](const TokenSequence& ids) {
    ++sequences;
    const bool via_tokens = rec.accepts_tokens(ids);
    const bool via_bytes =
        chart.recognize(bytes_to_terminals(detokenize(t, ids)));
    if (via_tokens != via_bytes) {
      r.fail("token sequence [" + format_ids(ids) + "]: token recognizer says " +
             (via_tokens ? "accept" : "reject") + ", byte recognizer says " +
             (via_bytes ? "accept" : "reject"));
    }
  });
  r.checked += sequences;
  r.notes.push_back(std::to_string(sequences) + " sequences checked");

  const Bytes strings_over = opt.string_alphabet.value_or(terminals);
  std::size_t strings = 0;
  for_each_string(strings_over, opt.max_string, [&](const Bytes& w) {
    ++strings;
    const bool member = chart.recognize(bytes_to_terminals(w));
    const bool via_tokens = rec.accepts_tokens(tokenize(t, w));
    if (member != via_tokens) {
      r.fail("string \"" + escape_bytes(w) + "\": membership " +
             (member ? "true" : "false") + " but tokenized acceptance " +
             (via_tokens ? "true" : "false"));
    }
  });
  r.checked += strings;
  r.notes.push_back(std::to_string(strings) + " strings checked through tokenize");
  return r;
}

/// Bytes occurring in multi-byte tokens, used as the partition suite's
/// string alphabet; falls back to the first two single-byte tokens.
inline Bytes partition_alphabet(const Tokenizer& t) {
  std::set<unsigned char> seen;
  for (const Bytes& b : t.vocab()) {
    if (b.size() > 1) {
      for (char c : b) {
        if (t.byte_token(static_cast<unsigned char>(c))) seen.insert(static_cast<unsigned char>(c));
      }
    }
  }
  if (seen.empty()) {
    for (int b = 0; b < 256 && seen.size() < 2; ++b) {
      if (t.byte_token(static_cast<unsigned char>(b))) seen.insert(static_cast<unsigned char>(b));
    }
  }
  return Bytes(seen.begin(), seen.end());
}

/// Checks one string; returns false and fills `r` on failure.
inline bool check_partition(const Tokenizer& t, const Bytes& s,
                            SuiteReport& r) {
  const TokenSequence proper = tokenize(t, s);
  const std::uint64_t count = count_tokenizations(t, s);
  std::uint64_t seen = 0, proper_count = 0;
  bool proper_seen = false;
  auto stream = enumerate_tokenizations(t, s);
  while (auto seg = stream.next()) {
    ++seen;
    if (detokenize(t, *seg) != s) {
      r.fail("segmentation [" + format_ids(*seg) + "] does not spell \"" +
             escape_bytes(s) + "\"");
      return false;
    }
    const Classification c = classify(t, *seg);
    const bool is_proper = *seg == proper;
    const bool has_pair = find_mergeable_pair(t, *seg).has_value();
    const bool consistent =
        (c.kind == TokenizationKind::proper && is_proper) ||
        (c.kind == TokenizationKind::mergeable && !is_proper && has_pair &&
         c.mergeable_at) ||
        (c.kind == TokenizationKind::wrong_merge_order && !is_proper &&
         !has_pair && c.proper == proper);
    if (!consistent) {
      r.fail("segmentation [" + format_ids(*seg) + "] of \"" + escape_bytes(s) +
             "\" classified " + std::string(to_string(c.kind)) +
             " inconsistently");
      return false;
    }
    if (c.kind == TokenizationKind::proper) ++proper_count;
    proper_seen |= is_proper;
    if (detokenize(t, unmerge(t, *seg)) != s) {
      r.fail("unmerge changes the bytes of [" + format_ids(*seg) + "]");
      return false;
    }
  }
  if (seen != count) {
    r.fail("\"" + escape_bytes(s) + "\": enumeration yields " +
           std::to_string(seen) + " segmentations, DP counts " +
           std::to_string(count));
    return false;
  }
  if (proper_count != 1 || !proper_seen) {
    r.fail("\"" + escape_bytes(s) + "\": " + std::to_string(proper_count) +
           " segmentations classified Proper");
    return false;
  }
  return true;
}

/// Exhaustive over strings of length <= max_len on partition_alphabet(t);
/// max_len is lowered until the string count fits in `budget`.
inline SuiteReport verify_partition(const Tokenizer& t, std::size_t max_len,
                                    std::size_t budget) {
  SuiteReport r;
  r.suite = "partition";
  const Bytes alphabet = partition_alphabet(t);
  auto strings_up_to = [&](std::size_t n) {
    std::size_t total = 1, power = 1;
    for (std::size_t k = 1; k <= n; ++k) {
      power *= alphabet.size();
      total += power;
      if (total > budget) return total;
    }
    return total;
  };
  while (max_len > 0 && strings_up_to(max_len) > budget) --max_len;
  std::size_t segmentations = 0;
  for_each_string(alphabet, max_len, [&](const Bytes& s) {
    if (!r.passed) return;
    ++r.checked;
    segmentations += count_tokenizations(t, s);
    check_partition(t, s, r);
  });
  r.notes.push_back(std::to_string(r.checked) + " strings up to length " +
                    std::to_string(max_len) + " over \"" +
                    escape_bytes(alphabet) + "\", " +
                    std::to_string(segmentations) + " segmentations classified");
  return r;
}

}  // namespace tokfl
