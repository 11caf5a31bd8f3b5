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

// All tokenizations of a string, and the classification of a tokenization
// as proper, mergeable, or produced in the wrong merge order.
//
// Wrong-merge-order detection is a decision procedure (unmerge to bytes,
// re-run BPE, compare). It is a multi-pass computation; no finite-state
// acceptor for the set of proper tokenizations is constructed here.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tokfl/bpe.hpp"
#include "tokfl/common.hpp"

namespace tokfl {

/// Thrown when a tokenization count does not fit in 64 bits.
class CountOverflowError : public Error {
 public:
  using Error::Error;
};

namespace detail {

// For each start offset, the tokens matching there, shortest first.
inline std::vector<std::vector<std::pair<std::size_t, TokenId>>> token_lattice(
    const Tokenizer& t, std::string_view s) {
  std::vector<std::vector<std::pair<std::size_t, TokenId>>> at(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::size_t max_len = std::min(t.max_token_length(), s.size() - i);
    for (std::size_t len = 1; len <= max_len; ++len) {
      if (auto id = t.find(s.substr(i, len))) at[i].emplace_back(len, *id);
    }
  }
  return at;
}

}  // namespace detail

/// Lazy stream over every segmentation of a byte string into vocabulary
/// tokens. Segmentations come in lexicographic order of their token end
/// offsets (so shorter first tokens come first), each exactly once.
class TokenizationStream {
 public:
  TokenizationStream(const Tokenizer& t, std::string_view s,
                     std::optional<std::size_t> limit = std::nullopt)
      : lattice_(detail::token_lattice(t, s)),
        n_(s.size()),
        limit_(limit),
        completes_(s.size() + 1, false) {
    completes_[n_] = true;
    for (std::size_t i = n_; i-- > 0;) {
      for (auto [len, id] : lattice_[i]) {
        if (completes_[i + len]) {
          completes_[i] = true;
          break;
        }
      }
    }
  }

  /// Next segmentation, or nullopt when exhausted or the limit is reached.
  std::optional<TokenSequence> next() {
    if (done_ || (limit_ && produced_ >= *limit_)) return std::nullopt;
    if (!started_) {
      started_ = true;
      if (!completes_[0]) {
        done_ = true;
        return std::nullopt;
      }
      descend(0);
    } else if (!backtrack()) {
      done_ = true;
      return std::nullopt;
    }
    ++produced_;
    TokenSequence out;
    out.reserve(stack_.size());
    for (const Frame& f : stack_) out.push_back(lattice_[f.pos][f.choice].second);
    return out;
  }

 private:
  struct Frame {
    std::size_t pos;
    std::size_t choice;
  };

  std::size_t end_of(const Frame& f) const {
    return f.pos + lattice_[f.pos][f.choice].first;
  }

  // First viable choice at or after `from` for a frame at `pos`.
  std::optional<std::size_t> viable_choice(std::size_t pos,
                                           std::size_t from) const {
    for (std::size_t c = from; c < lattice_[pos].size(); ++c) {
      if (completes_[pos + lattice_[pos][c].first]) return c;
    }
    return std::nullopt;
  }

  // Extends the stack from `pos` with first choices until the end.
  void descend(std::size_t pos) {
    while (pos < n_) {
      const std::size_t c = *viable_choice(pos, 0);
      stack_.push_back({pos, c});
      pos = end_of(stack_.back());
    }
  }

  bool backtrack() {
    while (!stack_.empty()) {
      Frame f = stack_.back();
      stack_.pop_back();
      if (auto c = viable_choice(f.pos, f.choice + 1)) {
        stack_.push_back({f.pos, *c});
        descend(end_of(stack_.back()));
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::pair<std::size_t, TokenId>>> lattice_;
  std::size_t n_;
  std::optional<std::size_t> limit_;
  std::vector<bool> completes_;  // suffix from offset i is segmentable
  std::vector<Frame> stack_;
  std::size_t produced_ = 0;
  bool started_ = false;
  bool done_ = false;
};

inline TokenizationStream enumerate_tokenizations(
    const Tokenizer& t, std::string_view s,
    std::optional<std::size_t> limit = std::nullopt) {
  return TokenizationStream(t, s, limit);
}

/// Number of segmentations of `s`, by DP over suffixes. Throws
/// CountOverflowError when the count exceeds 2^64 - 1.
inline std::uint64_t count_tokenizations(const Tokenizer& t,
                                         std::string_view s) {
  const auto lattice = detail::token_lattice(t, s);
  std::vector<std::uint64_t> ways(s.size() + 1, 0);
  ways[s.size()] = 1;
  for (std::size_t i = s.size(); i-- > 0;) {
    std::uint64_t total = 0;
    for (auto [len, id] : lattice[i]) {
      if (__builtin_add_overflow(total, ways[i + len], &total)) {
        throw CountOverflowError("tokenization count exceeds 64 bits");
      }
    }
    ways[i] = total;
  }
  return ways[0];
}

/// Smallest i such that (ids[i], ids[i+1]) is the input pair of a merge rule.
inline std::optional<std::size_t> find_mergeable_pair(
    const Tokenizer& t, std::span<const TokenId> ids) {
  t.check(ids);
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    if (t.rank_of(ids[i], ids[i + 1])) return i;
  }
  return std::nullopt;
}

/// Expands every token into single-byte tokens by inverting merges
/// recursively. Tokens that no merge produces (possible in loaded
/// vocabularies) are split directly into bytes. Every byte involved needs a
/// single-byte token, which always holds for a byte-base tokenizer.
inline TokenSequence unmerge(const Tokenizer& t, std::span<const TokenId> ids) {
  t.check(ids);
  auto byte_of = [&](char c) {
    auto id = t.byte_token(static_cast<unsigned char>(c));
    if (!id) {
      throw TokenizerError("byte " + escape_bytes(std::string(1, c)) +
                           " has no single-byte token to unmerge into");
    }
    return *id;
  };
  TokenSequence out;
  std::vector<TokenId> work;
  for (TokenId id : ids) {
    work.push_back(id);
    while (!work.empty()) {
      const TokenId cur = work.back();
      work.pop_back();
      const Bytes& b = t.bytes(cur);
      if (b.size() == 1) {
        out.push_back(cur);
      } else if (auto rank = t.producing_merge(cur)) {
        const MergeRule& m = t.merges()[*rank];
        work.push_back(m.right);
        work.push_back(m.left);
      } else {
        for (char c : b) out.push_back(byte_of(c));
      }
    }
  }
  return out;
}

enum class TokenizationKind { proper, mergeable, wrong_merge_order };

inline std::string_view to_string(TokenizationKind k) {
  switch (k) {
    case TokenizationKind::proper: return "Proper";
    case TokenizationKind::mergeable: return "Mergeable";
    case TokenizationKind::wrong_merge_order: return "WrongMergeOrder";
  }
  return "?";
}

struct Classification {
  TokenizationKind kind;
  /// Mergeable: index of the first mergeable adjacent pair.
  std::optional<std::size_t> mergeable_at;
  /// WrongMergeOrder: the proper tokenization of the same bytes.
  std::optional<TokenSequence> proper;
};

/// Proper if `ids` is what tokenize() returns for its own bytes; otherwise
/// Mergeable if some adjacent pair matches a merge rule (this takes
/// precedence); otherwise WrongMergeOrder.
///
/// Remerging runs tokenize() on detokenize(ids), which equals remerging the
/// unmerged byte tokens since detokenize(unmerge(ids)) == detokenize(ids).
inline Classification classify(const Tokenizer& t,
                               std::span<const TokenId> ids) {
  TokenSequence proper = tokenize(t, detokenize(t, ids));
  if (std::equal(proper.begin(), proper.end(), ids.begin(), ids.end())) {
    return {TokenizationKind::proper, std::nullopt, std::nullopt};
  }
  if (auto at = find_mergeable_pair(t, ids)) {
    return {TokenizationKind::mergeable, at, std::nullopt};
  }
  return {TokenizationKind::wrong_merge_order, std::nullopt, std::move(proper)};
}

}  // namespace tokfl
