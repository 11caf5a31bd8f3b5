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

// Recognition over token ids.
//
// A token session wraps a byte-level recognition session. Feeding a token
// maps it to its bytes (detokenization is a homomorphism) and feeds those
// bytes one at a time to the underlying recognizer. The per-token byte
// buffer is drained inside feed_token, so it is empty between tokens and
// never appears in the session state. Tokens need not end on a character
// boundary.

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tokfl/bpe.hpp"
#include "tokfl/common.hpp"
#include "tokfl/grammar.hpp"
#include "tokfl/recognizer.hpp"
#include "tokfl/tokenization_space.hpp"

namespace tokfl {

class TokenSession;

/// A byte-alphabet grammar paired with a byte-base tokenizer. Decides
/// membership of token sequences in the set of all tokenizations of L(G),
/// and, together with classify(), in the set of proper tokenizations.
class TokenRecognizer {
 public:
  /// Throws AlphabetError for a unicode grammar (encode it first) and
  /// TokenizerError for a tokenizer without all 256 byte tokens.
  static TokenRecognizer build(const Grammar& g,
                               std::shared_ptr<const Tokenizer> t) {
    if (g.alphabet() != Alphabet::byte) {
      throw AlphabetError(
          "token recognition needs a byte-alphabet grammar; encode the "
          "unicode grammar first");
    }
    if (!t) throw TokenizerError("null tokenizer");
    if (!t->byte_base()) {
      throw TokenizerError(
          "token recognition needs a tokenizer with all 256 byte tokens");
    }
    return TokenRecognizer(ChartRecognizer::compile(g), std::move(t));
  }

  static TokenRecognizer build(const Grammar& g, Tokenizer t) {
    return build(g, std::make_shared<const Tokenizer>(std::move(t)));
  }

  const Tokenizer& tokenizer() const { return *tokenizer_; }
  const ChartRecognizer& chart() const { return *chart_; }

  TokenSession open() const;

  /// detokenize(ids) in L(G), decided by streaming the tokens.
  bool accepts_tokens(std::span<const TokenId> ids) const;

  /// accepts_tokens(ids) and ids is the proper tokenization of its bytes.
  bool accepts_proper(std::span<const TokenId> ids) const {
    return accepts_tokens(ids) &&
           classify(*tokenizer_, ids).kind == TokenizationKind::proper;
  }

 private:
  TokenRecognizer(std::shared_ptr<const ChartRecognizer> chart,
                  std::shared_ptr<const Tokenizer> t)
      : chart_(std::move(chart)), tokenizer_(std::move(t)) {}

  std::shared_ptr<const ChartRecognizer> chart_;
  std::shared_ptr<const Tokenizer> tokenizer_;
};

/// Streaming state over token ids. Copy to fork.
class TokenSession {
 public:
  bool live() const { return inner_.live(); }
  bool accepts() const { return inner_.accepts(); }
  std::size_t tokens_consumed() const { return tokens_consumed_; }
  /// Bytes fed to the underlying recognizer so far.
  std::size_t bytes_consumed() const { return inner_.consumed(); }
  /// Offset (in detokenized bytes) of the byte that killed the session.
  std::optional<std::size_t> dead_at_byte() const { return inner_.dead_at(); }
  const RecognitionSession& inner() const { return inner_; }

  /// Feeds the bytes of token `id`. Throws UnknownTokenError.
  bool feed_token(TokenId id) {
    const Bytes& bytes = tokenizer_->bytes(id);
    ++tokens_consumed_;
    for (char c : bytes) {
      if (!inner_.feed(static_cast<unsigned char>(c)) && !dead_token_) {
        dead_token_ = tokens_consumed_ - 1;
      }
    }
    return live();
  }

  /// Index of the token during which the session died.
  std::optional<std::size_t> dead_at_token() const {
    if (!live() && !dead_token_) return 0;  // empty language
    return dead_token_;
  }

  /// Ids t for which feeding t keeps the session live. The session itself
  /// is not modified. Empty for a dead session.
  std::vector<TokenId> allowed_next_tokens() const {
    std::vector<TokenId> out;
    if (!live()) return out;
    for (TokenId id = 0; id < tokenizer_->size(); ++id) {
      if (inner_.viable_after(bytes_to_terminals(tokenizer_->vocab()[id]))) {
        out.push_back(id);
      }
    }
    return out;
  }

 private:
  friend class TokenRecognizer;

  TokenSession(RecognitionSession inner, std::shared_ptr<const Tokenizer> t)
      : inner_(std::move(inner)), tokenizer_(std::move(t)) {}

  RecognitionSession inner_;
  std::shared_ptr<const Tokenizer> tokenizer_;
  std::size_t tokens_consumed_ = 0;
  std::optional<std::size_t> dead_token_;
};

inline TokenSession TokenRecognizer::open() const {
  return TokenSession(chart_->open(), tokenizer_);
}

inline bool TokenRecognizer::accepts_tokens(std::span<const TokenId> ids) const {
  tokenizer_->check(ids);
  TokenSession s = open();
  for (TokenId id : ids) {
    if (!s.feed_token(id)) return false;
  }
  return s.accepts();
}

}  // namespace tokfl
