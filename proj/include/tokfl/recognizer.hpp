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

// Incremental Earley recognizer.
//
// Each fed terminal produces one Earley set. Sets are immutable once built
// and shared between sessions, so forking a session copies a vector of
// pointers. Nullable nonterminals are handled at prediction time (the
// Aycock-Horspool rule), which makes a single predict/complete closure per
// set sufficient in the presence of epsilon productions.
//
// For a reduced grammar, a set is non-empty exactly when the input so far is
// a prefix of some sentence. ChartRecognizer reduces its grammar on
// construction, so that equivalence always holds for its sessions.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tokfl/common.hpp"
#include "tokfl/grammar.hpp"

namespace tokfl {

class RecognitionSession;

namespace detail {

struct EarleyItem {
  std::uint32_t production;
  std::uint32_t dot;
  std::uint32_t origin;

  std::uint64_t key() const {
    // dot < 2^16 and production < 2^24 for any grammar we accept.
    return (static_cast<std::uint64_t>(origin) << 40) |
           (static_cast<std::uint64_t>(production) << 16) | dot;
  }
};

struct EarleySet {
  std::vector<EarleyItem> items;
  // Item indices whose next symbol is the given nonterminal.
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> waiting;
};

}  // namespace detail

/// A reduced grammar compiled for Earley recognition. Immutable; share it
/// through std::shared_ptr so that sessions can outlive the caller's handle.
class ChartRecognizer
    : public std::enable_shared_from_this<ChartRecognizer> {
 public:
  static std::shared_ptr<const ChartRecognizer> compile(const Grammar& g) {
    return std::shared_ptr<const ChartRecognizer>(
        new ChartRecognizer(reduce_grammar(g)));
  }

  const Grammar& grammar() const { return grammar_; }

  /// Fresh session at the start of input.
  RecognitionSession open() const;

  /// Membership test for a whole string.
  bool recognize(std::span<const Terminal> input) const;

 private:
  friend class RecognitionSession;

  explicit ChartRecognizer(Grammar g) : grammar_(std::move(g)) {
    const auto& prods = grammar_.productions();
    if (prods.size() >= (1u << 24)) throw Error("grammar too large");
    for (const auto& p : prods) {
      if (p.body.size() >= (1u << 16)) throw Error("production too long");
    }
    nullable_.assign(grammar_.num_nonterminals(), false);
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& p : prods) {
        if (nullable_[p.head]) continue;
        bool all = true;
        for (const Symbol& s : p.body) {
          if (s.is_terminal() || !nullable_[s.value]) {
            all = false;
            break;
          }
        }
        if (all) nullable_[p.head] = true;
        changed |= all;
      }
    }
  }

  const Symbol* next_symbol(const detail::EarleyItem& item) const {
    const auto& body = grammar_.productions()[item.production].body;
    return item.dot < body.size() ? &body[item.dot] : nullptr;
  }

  // Closes `set` (index `k` in `chart`) under prediction and completion.
  void close(detail::EarleySet& set, std::uint32_t k,
             std::span<const std::shared_ptr<const detail::EarleySet>> chart,
             std::unordered_set<std::uint64_t>& seen) const {
    using detail::EarleyItem;
    auto add = [&](EarleyItem item) {
      if (seen.insert(item.key()).second) {
        const auto idx = static_cast<std::uint32_t>(set.items.size());
        set.items.push_back(item);
        if (const Symbol* next = next_symbol(item);
            next && !next->is_terminal()) {
          set.waiting[next->value].push_back(idx);
        }
      }
    };
    for (std::size_t i = 0; i < set.items.size(); ++i) {
      const EarleyItem item = set.items[i];
      const Symbol* next = next_symbol(item);
      if (next == nullptr) {
        const std::uint32_t head = grammar_.productions()[item.production].head;
        if (item.origin == k) continue;  // covered by the nullable rule
        const detail::EarleySet& from = *chart[item.origin];
        auto it = from.waiting.find(head);
        if (it == from.waiting.end()) continue;
        for (std::uint32_t w : it->second) {
          EarleyItem parent = from.items[w];
          ++parent.dot;
          add(parent);
        }
      } else if (!next->is_terminal()) {
        for (std::uint32_t p : grammar_.productions_of(next->value)) {
          add({p, 0, k});
        }
        if (nullable_[next->value]) add({item.production, item.dot + 1, item.origin});
      }
    }
  }

  std::shared_ptr<const detail::EarleySet> initial_set() const {
    detail::EarleySet set;
    std::unordered_set<std::uint64_t> seen;
    for (std::uint32_t p : grammar_.productions_of(grammar_.start())) {
      if (seen.insert(detail::EarleyItem{p, 0, 0}.key()).second) {
        set.items.push_back({p, 0, 0});
        if (const Symbol* next = next_symbol(set.items.back());
            next && !next->is_terminal()) {
          set.waiting[next->value].push_back(
              static_cast<std::uint32_t>(set.items.size() - 1));
        }
      }
    }
    close(set, 0, {}, seen);
    return std::make_shared<const detail::EarleySet>(std::move(set));
  }

  // Scans `t` over the last set of `chart`; returns an empty set when no
  // item expects `t`.
  std::shared_ptr<const detail::EarleySet> advance(
      std::span<const std::shared_ptr<const detail::EarleySet>> chart,
      Terminal t) const {
    const auto k = static_cast<std::uint32_t>(chart.size());
    detail::EarleySet set;
    std::unordered_set<std::uint64_t> seen;
    for (const auto& item : chart.back()->items) {
      const Symbol* next = next_symbol(item);
      if (next && next->is_terminal() && next->value == t) {
        detail::EarleyItem moved{item.production, item.dot + 1, item.origin};
        if (seen.insert(moved.key()).second) {
          set.items.push_back(moved);
          if (const Symbol* n2 = next_symbol(moved); n2 && !n2->is_terminal()) {
            set.waiting[n2->value].push_back(
                static_cast<std::uint32_t>(set.items.size() - 1));
          }
        }
      }
    }
    if (!set.items.empty()) close(set, k, chart, seen);
    return std::make_shared<const detail::EarleySet>(std::move(set));
  }

  bool set_accepts(const detail::EarleySet& set) const {
    for (const auto& item : set.items) {
      const auto& p = grammar_.productions()[item.production];
      if (item.origin == 0 && p.head == grammar_.start() &&
          item.dot == p.body.size()) {
        return true;
      }
    }
    return false;
  }

  Grammar grammar_;
  std::vector<bool> nullable_;
};

/// Incremental recognition state: one Earley set per consumed terminal.
/// Copying a session forks it; the copies share already-built sets.
class RecognitionSession {
 public:
  /// True iff the consumed terminals are a prefix of some sentence.
  bool live() const { return !dead_at_.has_value(); }

  /// Number of terminals fed, including any fed after the session died.
  std::size_t consumed() const { return consumed_; }

  /// Index of the terminal that killed the session; nullopt while live.
  /// Equals 0 with consumed() == 0 for an empty-language grammar.
  std::optional<std::size_t> dead_at() const { return dead_at_; }

  /// True iff the consumed terminals form a sentence.
  bool accepts() const {
    return live() && recognizer_->set_accepts(*chart_.back());
  }

  /// Advances by one terminal. Throws AlphabetError for a terminal outside
  /// the grammar's alphabet. A dead session stays dead.
  bool feed(Terminal t) {
    recognizer_->grammar().check_terminal(t);
    ++consumed_;
    if (!live()) return false;
    auto next = recognizer_->advance(chart_, t);
    if (next->items.empty()) {
      dead_at_ = consumed_ - 1;
      return false;
    }
    chart_.push_back(std::move(next));
    return true;
  }

  bool feed_all(std::span<const Terminal> ts) {
    for (Terminal t : ts) feed(t);
    return live();
  }

  /// Whether feeding `ts` would keep the session live. Does not modify the
  /// session; stops at the first terminal that kills it.
  bool viable_after(std::span<const Terminal> ts) const {
    if (!live()) return false;
    if (ts.empty()) return true;
    for (Terminal t : ts) recognizer_->grammar().check_terminal(t);
    std::vector<std::shared_ptr<const detail::EarleySet>> scratch;
    for (Terminal t : ts) {
      std::shared_ptr<const detail::EarleySet> next;
      if (scratch.empty()) {
        next = recognizer_->advance(chart_, t);
      } else {
        std::vector<std::shared_ptr<const detail::EarleySet>> joined(
            chart_.begin(), chart_.end());
        joined.insert(joined.end(), scratch.begin(), scratch.end());
        next = recognizer_->advance(joined, t);
      }
      if (next->items.empty()) return false;
      scratch.push_back(std::move(next));
    }
    return true;
  }

  const ChartRecognizer& recognizer() const { return *recognizer_; }

 private:
  friend class ChartRecognizer;

  explicit RecognitionSession(std::shared_ptr<const ChartRecognizer> r)
      : recognizer_(std::move(r)) {
    chart_.push_back(recognizer_->initial_set());
    if (chart_.back()->items.empty()) dead_at_ = 0;
  }

  std::shared_ptr<const ChartRecognizer> recognizer_;
  std::vector<std::shared_ptr<const detail::EarleySet>> chart_;
  std::size_t consumed_ = 0;
  std::optional<std::size_t> dead_at_;
};

inline RecognitionSession ChartRecognizer::open() const {
  return RecognitionSession(shared_from_this());
}

inline bool ChartRecognizer::recognize(std::span<const Terminal> input) const {
  for (Terminal t : input) grammar_.check_terminal(t);
  auto s = open();
  for (Terminal t : input) {
    if (!s.feed(t)) return false;
  }
  return s.accepts();
}

/// Convenience: compiles `g` and tests membership of `w`.
inline bool recognize(const Grammar& g, std::span<const Terminal> w) {
  return ChartRecognizer::compile(g)->recognize(w);
}

inline RecognitionSession open_session(const Grammar& g) {
  return ChartRecognizer::compile(g)->open();
}

}  // namespace tokfl
