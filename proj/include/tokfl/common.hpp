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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tokfl {

/// Raw byte string. Every byte value 0x00..0xFF is a valid element.
using Bytes = std::string;

/// A grammar terminal: a Unicode scalar value or a byte, depending on the
/// grammar's alphabet.
using Terminal = std::uint32_t;
using TerminalString = std::vector<Terminal>;

using TokenId = std::uint32_t;

/// Base class of everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grammar source that does not conform to the grammar file format.
class GrammarSyntaxError : public Error {
 public:
  GrammarSyntaxError(const std::string& what, std::size_t line,
                     std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A terminal outside the grammar's declared alphabet.
class AlphabetError : public Error {
 public:
  using Error::Error;
};

/// A character with no encoding under an EncodingScheme.
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent tokenizer data.
class TokenizerError : public Error {
 public:
  using Error::Error;
};

/// A token id that is not in the vocabulary.
class UnknownTokenError : public TokenizerError {
 public:
  explicit UnknownTokenError(TokenId id)
      : TokenizerError("unknown token id " + std::to_string(id)), id_(id) {}
  TokenId id() const { return id_; }

 private:
  TokenId id_;
};

inline constexpr bool is_unicode_scalar(std::uint32_t cp) {
  return cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
}

/// Decodes UTF-8. Returns nullopt on any malformed sequence (overlong forms,
/// surrogates, truncation, values above U+10FFFF).
inline std::optional<std::u32string> decode_utf8(std::string_view s) {
  std::u32string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      return std::nullopt;
    }
    if (i + len > s.size()) return std::nullopt;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) return std::nullopt;
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || !is_unicode_scalar(cp)) return std::nullopt;
    out.push_back(cp);
    i += len;
  }
  return out;
}

/// Appends the UTF-8 form of `cp`; `cp` must be a Unicode scalar value.
inline void append_utf8(Bytes& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline TerminalString bytes_to_terminals(std::string_view bytes) {
  TerminalString out;
  out.reserve(bytes.size());
  for (char c : bytes) out.push_back(static_cast<unsigned char>(c));
  return out;
}

/// Inverse of bytes_to_terminals; every terminal must be <= 0xFF.
inline Bytes terminals_to_bytes(std::span<const Terminal> ts) {
  Bytes out;
  out.reserve(ts.size());
  for (Terminal t : ts) {
    if (t > 0xFF) throw AlphabetError("terminal " + std::to_string(t) +
                                      " is not a byte");
    out.push_back(static_cast<char>(t));
  }
  return out;
}

/// Escapes a byte string for display and for the native file formats:
/// printable ASCII is kept, backslash becomes `\\`, everything else `\xHH`.
inline std::string escape_bytes(std::string_view bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (char c : bytes) {
    const auto b = static_cast<unsigned char>(c);
    if (b == '\\') {
      out += "\\\\";
    } else if (b >= 0x20 && b < 0x7F) {
      out.push_back(c);
    } else {
      out += "\\x";
      out.push_back(kHex[b >> 4]);
      out.push_back(kHex[b & 0xF]);
    }
  }
  return out;
}

inline std::optional<int> hex_digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return std::nullopt;
}

/// Inverse of escape_bytes. Only `\\` and `\xHH` escapes are recognized.
inline Bytes unescape_bytes(std::string_view text) {
  Bytes out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out.push_back(text[i]);
      continue;
    }
    if (i + 1 < text.size() && text[i + 1] == '\\') {
      out.push_back('\\');
      ++i;
      continue;
    }
    if (i + 3 < text.size() && text[i + 1] == 'x') {
      const auto hi = hex_digit_value(text[i + 2]);
      const auto lo = hex_digit_value(text[i + 3]);
      if (hi && lo) {
        out.push_back(static_cast<char>(*hi * 16 + *lo));
        i += 3;
        continue;
      }
    }
    throw TokenizerError("bad escape in token string \"" + std::string(text) +
                         "\"");
  }
  return out;
}

}  // namespace tokfl
