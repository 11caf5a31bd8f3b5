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

// Byte-level BPE: vocabulary, ordered merge rules, training, tokenization
// and detokenization. No pre-tokenization and no special tokens.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tokfl/common.hpp"

namespace tokfl {

using TokenSequence = std::vector<TokenId>;

/// left + right -> merged. A rule's rank is its index in the merge list.
struct MergeRule {
  TokenId left;
  TokenId right;
  TokenId merged;

  friend bool operator==(const MergeRule&, const MergeRule&) = default;
};

/// Vocabulary plus ordered merges. Token ids are exactly 0..size()-1.
///
/// Invariants checked on construction:
///   - token byte strings are non-empty and pairwise distinct;
///   - every merge's output is the concatenation of its inputs;
///   - no pair appears in two merge rules.
class Tokenizer {
 public:
  Tokenizer(std::vector<Bytes> vocab, std::vector<MergeRule> merges)
      : vocab_(std::move(vocab)), merges_(std::move(merges)) {
    if (vocab_.size() > std::numeric_limits<TokenId>::max()) {
      throw TokenizerError("vocabulary too large");
    }
    byte_token_.fill(kNone);
    for (std::size_t id = 0; id < vocab_.size(); ++id) {
      const Bytes& b = vocab_[id];
      if (b.empty()) {
        throw TokenizerError("token " + std::to_string(id) + " is empty");
      }
      auto [it, inserted] = by_bytes_.emplace(b, static_cast<TokenId>(id));
      if (!inserted) {
        throw TokenizerError("duplicate token string \"" + escape_bytes(b) +
                             "\" (ids " + std::to_string(it->second) + " and " +
                             std::to_string(id) + ")");
      }
      if (b.size() == 1) {
        byte_token_[static_cast<unsigned char>(b[0])] = static_cast<TokenId>(id);
      }
      max_token_length_ = std::max(max_token_length_, b.size());
    }
    byte_base_ = std::none_of(byte_token_.begin(), byte_token_.end(),
                              [](TokenId t) { return t == kNone; });
    produced_by_.assign(vocab_.size(), kNone);
    for (std::size_t rank = 0; rank < merges_.size(); ++rank) {
      const MergeRule& m = merges_[rank];
      for (TokenId id : {m.left, m.right, m.merged}) {
        if (id >= vocab_.size()) {
          throw TokenizerError("merge " + std::to_string(rank) +
                               " references unknown token " + std::to_string(id));
        }
      }
      if (vocab_[m.merged] != vocab_[m.left] + vocab_[m.right]) {
        throw TokenizerError(
            "merge " + std::to_string(rank) + " output \"" +
            escape_bytes(vocab_[m.merged]) + "\" is not \"" +
            escape_bytes(vocab_[m.left]) + "\" + \"" +
            escape_bytes(vocab_[m.right]) + "\"");
      }
      if (!rank_.emplace(pair_key(m.left, m.right), rank).second) {
        throw TokenizerError("duplicate merge pair \"" +
                             escape_bytes(vocab_[m.left]) + "\" \"" +
                             escape_bytes(vocab_[m.right]) + "\"");
      }
      if (produced_by_[m.merged] == kNone) {
        produced_by_[m.merged] = static_cast<TokenId>(rank);
      }
    }
  }

  /// Builds merge rules from (left, right) pairs; each output is looked up
  /// by the concatenated bytes and must already be in `vocab`.
  static Tokenizer from_pairs(
      std::vector<Bytes> vocab,
      const std::vector<std::pair<TokenId, TokenId>>& pairs) {
    std::unordered_map<Bytes, TokenId> index;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      index.emplace(vocab[i], static_cast<TokenId>(i));
    }
    std::vector<MergeRule> merges;
    merges.reserve(pairs.size());
    for (auto [l, r] : pairs) {
      if (l >= vocab.size() || r >= vocab.size()) {
        throw TokenizerError("merge references unknown token");
      }
      auto it = index.find(vocab[l] + vocab[r]);
      if (it == index.end()) {
        throw TokenizerError("merge output \"" +
                             escape_bytes(vocab[l] + vocab[r]) +
                             "\" is not in the vocabulary");
      }
      merges.push_back({l, r, it->second});
    }
    return Tokenizer(std::move(vocab), std::move(merges));
  }

  /// 256 single-byte tokens, id = byte value, no merges.
  static Tokenizer byte_identity() {
    std::vector<Bytes> vocab;
    for (int b = 0; b < 256; ++b) vocab.emplace_back(1, static_cast<char>(b));
    return Tokenizer(std::move(vocab), {});
  }

  std::size_t size() const { return vocab_.size(); }
  bool contains(TokenId id) const { return id < vocab_.size(); }
  const std::vector<Bytes>& vocab() const { return vocab_; }
  const std::vector<MergeRule>& merges() const { return merges_; }
  bool byte_base() const { return byte_base_; }
  std::size_t max_token_length() const { return max_token_length_; }

  const Bytes& bytes(TokenId id) const {
    if (!contains(id)) throw UnknownTokenError(id);
    return vocab_[id];
  }

  std::optional<TokenId> find(std::string_view bytes) const {
    auto it = by_bytes_.find(Bytes(bytes));
    if (it == by_bytes_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<TokenId> byte_token(unsigned char b) const {
    return byte_token_[b] == kNone ? std::nullopt
                                   : std::optional<TokenId>(byte_token_[b]);
  }

  /// Rank of the merge rule whose input pair is (left, right).
  std::optional<std::size_t> rank_of(TokenId left, TokenId right) const {
    auto it = rank_.find(pair_key(left, right));
    if (it == rank_.end()) return std::nullopt;
    return it->second;
  }

  /// Lowest-rank merge producing `id`, if any.
  std::optional<std::size_t> producing_merge(TokenId id) const {
    if (!contains(id)) throw UnknownTokenError(id);
    return produced_by_[id] == kNone ? std::nullopt
                                     : std::optional<std::size_t>(produced_by_[id]);
  }

  void check(std::span<const TokenId> ids) const {
    for (TokenId id : ids) {
      if (!contains(id)) throw UnknownTokenError(id);
    }
  }

 private:
  static constexpr TokenId kNone = std::numeric_limits<TokenId>::max();

  static std::uint64_t pair_key(TokenId l, TokenId r) {
    return (static_cast<std::uint64_t>(l) << 32) | r;
  }

  std::vector<Bytes> vocab_;
  std::vector<MergeRule> merges_;
  std::unordered_map<Bytes, TokenId> by_bytes_;
  std::unordered_map<std::uint64_t, std::size_t> rank_;
  std::vector<TokenId> produced_by_;
  std::array<TokenId, 256> byte_token_{};
  std::size_t max_token_length_ = 0;
  bool byte_base_ = false;
};

/// Concatenates token byte strings. Throws UnknownTokenError.
inline Bytes detokenize(const Tokenizer& t, std::span<const TokenId> ids) {
  Bytes out;
  for (TokenId id : ids) out += t.bytes(id);
  return out;
}

/// Proper tokenization: start from single-byte tokens, then repeatedly merge
/// the leftmost occurrence of the lowest-rank applicable pair until no merge
/// rule applies. Throws TokenizerError for a byte without a token.
inline TokenSequence tokenize(const Tokenizer& t, std::string_view s) {
  const std::size_t n = s.size();
  if (n == 0) return {};
  constexpr std::size_t kEnd = std::numeric_limits<std::size_t>::max();
  std::vector<TokenId> tok(n);
  std::vector<std::size_t> next(n), prev(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto id = t.byte_token(static_cast<unsigned char>(s[i]));
    if (!id) {
      throw TokenizerError("byte " + escape_bytes(s.substr(i, 1)) + " at offset " +
                           std::to_string(i) + " has no token");
    }
    tok[i] = *id;
    next[i] = i + 1 < n ? i + 1 : kEnd;
    prev[i] = i > 0 ? i - 1 : kEnd;
  }
  // (rank, position) of candidate pairs; stale entries are skipped on pop.
  std::set<std::pair<std::size_t, std::size_t>> queue;
  auto push = [&](std::size_t pos) {
    if (pos == kEnd || next[pos] == kEnd) return;
    if (auto r = t.rank_of(tok[pos], tok[next[pos]])) queue.emplace(*r, pos);
  };
  for (std::size_t i = 0; i + 1 < n; ++i) push(i);
  std::vector<bool> alive(n, true);
  while (!queue.empty()) {
    const auto [rank, pos] = *queue.begin();
    queue.erase(queue.begin());
    if (!alive[pos] || next[pos] == kEnd) continue;
    const auto current = t.rank_of(tok[pos], tok[next[pos]]);
    if (!current || *current != rank) continue;
    const std::size_t gone = next[pos];
    tok[pos] = t.merges()[rank].merged;
    alive[gone] = false;
    next[pos] = next[gone];
    if (next[pos] != kEnd) prev[next[pos]] = pos;
    push(prev[pos]);
    push(pos);
  }
  TokenSequence out;
  for (std::size_t i = 0; i != kEnd; i = next[i]) out.push_back(tok[i]);
  return out;
}

/// Learns `num_merges` merge rules from `corpus`, starting from the 256 byte
/// tokens. Each step picks the most frequent adjacent pair (overlapping
/// occurrences counted); ties go to the pair occurring first in the corpus,
/// then the smaller left id, then the smaller right id. Stops early when no
/// pair occurs at least twice.
inline Tokenizer train(std::span<const Bytes> corpus, std::size_t num_merges) {
  std::vector<Bytes> vocab;
  for (int b = 0; b < 256; ++b) vocab.emplace_back(1, static_cast<char>(b));
  std::unordered_map<Bytes, TokenId> index;
  for (TokenId i = 0; i < 256; ++i) index.emplace(vocab[i], i);

  std::vector<std::vector<TokenId>> seqs;
  seqs.reserve(corpus.size());
  for (const Bytes& text : corpus) {
    std::vector<TokenId> ids;
    for (char c : text) ids.push_back(static_cast<unsigned char>(c));
    seqs.push_back(std::move(ids));
  }

  struct PairStats {
    std::size_t count = 0;
    std::size_t first = 0;
  };
  std::vector<MergeRule> merges;
  // A pair can reappear once a later merge re-creates an existing token
  // string from a different split; it keeps its original rank.
  std::set<std::pair<TokenId, TokenId>> learned;
  for (std::size_t step = 0; step < num_merges; ++step) {
    std::map<std::pair<TokenId, TokenId>, PairStats> stats;
    std::size_t position = 0;
    for (const auto& ids : seqs) {
      for (std::size_t i = 0; i + 1 < ids.size(); ++i, ++position) {
        auto [it, inserted] = stats.try_emplace({ids[i], ids[i + 1]});
        if (inserted) it->second.first = position;
        ++it->second.count;
      }
      ++position;
    }
    const std::pair<const std::pair<TokenId, TokenId>, PairStats>* best = nullptr;
    // First-occurrence positions are distinct, so the id tie-breaks are
    // implied by std::map's (left, right) iteration order.
    for (const auto& entry : stats) {
      if (learned.contains(entry.first)) continue;
      if (best == nullptr ||
          std::make_tuple(entry.second.count,
                          -static_cast<std::int64_t>(entry.second.first)) >
              std::make_tuple(best->second.count,
                              -static_cast<std::int64_t>(best->second.first))) {
        best = &entry;
      }
    }
    if (best == nullptr || best->second.count < 2) break;
    const auto [left, right] = best->first;
    const Bytes joined = vocab[left] + vocab[right];
    auto [it, inserted] = index.emplace(joined, static_cast<TokenId>(vocab.size()));
    if (inserted) vocab.push_back(joined);
    const TokenId merged = it->second;
    merges.push_back({left, right, merged});
    learned.insert({left, right});
    for (auto& ids : seqs) {
      std::vector<TokenId> out;
      out.reserve(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i + 1 < ids.size() && ids[i] == left && ids[i + 1] == right) {
          out.push_back(merged);
          ++i;
        } else {
          out.push_back(ids[i]);
        }
      }
      ids = std::move(out);
    }
  }
  return Tokenizer(std::move(vocab), std::move(merges));
}

}  // namespace tokfl
