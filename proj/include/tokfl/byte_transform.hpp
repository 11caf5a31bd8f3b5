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

// Character-to-byte transforms. A character encoding scheme is a string
// homomorphism from characters to bytes; applying it to every terminal of a
// grammar yields a grammar for the encoded language.

#pragma once

#include <cstdio>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "tokfl/common.hpp"
#include "tokfl/grammar.hpp"

namespace tokfl {

/// Injective map from Unicode scalar values to non-empty byte strings.
/// `encode` returns nullopt for characters the scheme cannot represent.
struct EncodingScheme {
  std::string name;
  std::function<std::optional<Bytes>(char32_t)> encode;

  static EncodingScheme utf8() {
    return {"utf8", [](char32_t cp) -> std::optional<Bytes> {
              if (!is_unicode_scalar(cp)) return std::nullopt;
              Bytes out;
              append_utf8(out, cp);
              return out;
            }};
  }
};

namespace detail {

inline Bytes encode_char(const EncodingScheme& e, char32_t cp) {
  auto bytes = e.encode(cp);
  if (!bytes || bytes->empty()) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
    throw EncodingError(std::string(buf) + " is not encodable as " + e.name);
  }
  return std::move(*bytes);
}

}  // namespace detail

inline Bytes encode_string(const EncodingScheme& e, std::u32string_view s) {
  Bytes out;
  for (char32_t cp : s) out += detail::encode_char(e, cp);
  return out;
}

inline Bytes encode_string(const EncodingScheme& e,
                           std::span<const Terminal> s) {
  Bytes out;
  for (Terminal cp : s) out += detail::encode_char(e, cp);
  return out;
}

/// Replaces every terminal character by its encoded bytes. Nonterminals and
/// production structure are unchanged; the result is a byte grammar.
inline Grammar encode_grammar(const EncodingScheme& e, const Grammar& g) {
  if (g.alphabet() != Alphabet::unicode) {
    throw AlphabetError("encode_grammar expects a unicode-alphabet grammar");
  }
  std::vector<Production> prods;
  prods.reserve(g.productions().size());
  for (const auto& p : g.productions()) {
    Production q{p.head, {}};
    for (const Symbol& s : p.body) {
      if (!s.is_terminal()) {
        q.body.push_back(s);
        continue;
      }
      for (char b : detail::encode_char(e, s.value)) {
        q.body.push_back(Symbol::term(static_cast<unsigned char>(b)));
      }
    }
    prods.push_back(std::move(q));
  }
  Grammar out(Alphabet::byte, g.nonterminal_names(), std::move(prods),
              g.start());
  return g.known_empty() ? reduce_grammar(out) : out;
}

}  // namespace tokfl
