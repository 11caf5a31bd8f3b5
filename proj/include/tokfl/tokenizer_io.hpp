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

// Tokenizer file formats.
//
// Native (JSON):
//
//   { "version": 1,
//     "vocab":  { "a": 0, "b": 1, "aa": 2, "\\x0a": 3, ... },
//     "merges": [ ["a", "a"], ["aa", "a", "aaa"], ... ] }
//
// Token strings are byte strings written with escape_bytes(): printable
// ASCII as-is, `\\` for backslash, `\xHH` for anything else (in the JSON
// text the backslash itself is escaped, hence "\\x0a"). A merge may carry an
// explicit third element naming its output, which must equal the
// concatenation of the first two.
//
// GPT-2 compatible: a vocab.json mapping printable-codepoint token strings
// to ids, plus a merges.txt of "left right" lines (an optional leading
// "#version" line is skipped). Each codepoint maps back to one byte through
// the fixed 256-entry table of byte-level BPE.

#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tokfl/bpe.hpp"
#include "tokfl/common.hpp"

namespace tokfl {

namespace detail {

inline std::vector<Bytes> vocab_from_json(
    const nlohmann::json& vocab,
    Bytes (*decode)(const std::string&)) {
  if (!vocab.is_object()) throw TokenizerError("vocab must be an object");
  std::vector<std::optional<Bytes>> slots(vocab.size());
  for (const auto& [key, value] : vocab.items()) {
    if (!value.is_number_unsigned()) {
      throw TokenizerError("vocab id for \"" + key + "\" is not a natural number");
    }
    const auto id = value.get<std::uint64_t>();
    if (id >= slots.size()) {
      throw TokenizerError("vocab ids must be exactly 0.." +
                           std::to_string(slots.size() - 1) + "; got " +
                           std::to_string(id));
    }
    if (slots[id]) {
      throw TokenizerError("vocab id " + std::to_string(id) + " used twice");
    }
    slots[id] = decode(key);
  }
  std::vector<Bytes> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline Bytes decode_native_token(const std::string& s) {
  return unescape_bytes(s);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

/// Parses the native JSON format.
inline Tokenizer load_native_tokenizer(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw TokenizerError(std::string("malformed tokenizer file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version") || doc["version"] != 1) {
    throw TokenizerError("tokenizer file must have \"version\": 1");
  }
  if (!doc.contains("vocab") || !doc.contains("merges")) {
    throw TokenizerError("tokenizer file needs \"vocab\" and \"merges\"");
  }
  std::vector<Bytes> vocab =
      detail::vocab_from_json(doc["vocab"], &detail::decode_native_token);
  std::unordered_map<Bytes, TokenId> index;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    index.emplace(vocab[i], static_cast<TokenId>(i));
  }
  auto lookup = [&](const nlohmann::json& j) {
    if (!j.is_string()) throw TokenizerError("merge entries must be strings");
    const Bytes b = unescape_bytes(j.get<std::string>());
    auto it = index.find(b);
    if (it == index.end()) {
      throw TokenizerError("merge references unknown token \"" +
                           escape_bytes(b) + "\"");
    }
    return it->second;
  };
  const auto& merges_json = doc["merges"];
  if (!merges_json.is_array()) throw TokenizerError("merges must be an array");
  std::vector<MergeRule> merges;
  for (const auto& m : merges_json) {
    if (!m.is_array() || (m.size() != 2 && m.size() != 3)) {
      throw TokenizerError("each merge is [left, right] or [left, right, out]");
    }
    const TokenId l = lookup(m[0]);
    const TokenId r = lookup(m[1]);
    TokenId out;
    if (m.size() == 3) {
      out = lookup(m[2]);
    } else {
      auto it = index.find(vocab[l] + vocab[r]);
      if (it == index.end()) {
        throw TokenizerError("merge output \"" +
                             escape_bytes(vocab[l] + vocab[r]) +
                             "\" is not in the vocabulary");
      }
      out = it->second;
    }
    merges.push_back({l, r, out});
  }
  return Tokenizer(std::move(vocab), std::move(merges));
}

inline std::string save_native_tokenizer(const Tokenizer& t) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  nlohmann::ordered_json vocab = nlohmann::ordered_json::object();
  for (TokenId id = 0; id < t.size(); ++id) {
    vocab[escape_bytes(t.bytes(id))] = id;
  }
  doc["vocab"] = std::move(vocab);
  nlohmann::ordered_json merges = nlohmann::ordered_json::array();
  for (const MergeRule& m : t.merges()) {
    merges.push_back({escape_bytes(t.bytes(m.left)), escape_bytes(t.bytes(m.right))});
  }
  doc["merges"] = std::move(merges);
  return doc.dump(1) + "\n";
}

/// The byte-level BPE byte -> printable codepoint table: printable Latin-1
/// bytes map to themselves, the remaining 68 bytes to U+0100 onwards in
/// byte order.
inline const std::array<char32_t, 256>& gpt2_byte_to_codepoint() {
  static const std::array<char32_t, 256> table = [] {
    std::array<char32_t, 256> t{};
    auto printable = [](int b) {
      return (b >= '!' && b <= '~') || (b >= 0xA1 && b <= 0xAC) ||
             (b >= 0xAE && b <= 0xFF);
    };
    char32_t extra = 256;
    for (int b = 0; b < 256; ++b) {
      t[b] = printable(b) ? static_cast<char32_t>(b) : extra++;
    }
    return t;
  }();
  return table;
}

namespace detail {

inline Bytes decode_gpt2_token(const std::string& s) {
  static const std::unordered_map<char32_t, unsigned char> inverse = [] {
    std::unordered_map<char32_t, unsigned char> m;
    const auto& fwd = gpt2_byte_to_codepoint();
    for (int b = 0; b < 256; ++b) m.emplace(fwd[b], static_cast<unsigned char>(b));
    return m;
  }();
  auto cps = decode_utf8(s);
  if (!cps) throw TokenizerError("token string is not valid UTF-8");
  Bytes out;
  for (char32_t cp : *cps) {
    auto it = inverse.find(cp);
    if (it == inverse.end()) {
      throw TokenizerError("token \"" + s + "\" has a codepoint outside the "
                           "byte-level table");
    }
    out.push_back(static_cast<char>(it->second));
  }
  return out;
}

inline std::string encode_gpt2_token(std::string_view bytes) {
  std::string out;
  for (char c : bytes) {
    append_utf8(out, gpt2_byte_to_codepoint()[static_cast<unsigned char>(c)]);
  }
  return out;
}

}  // namespace detail

/// Parses GPT-2 style vocab.json + merges.txt contents.
inline Tokenizer load_gpt2_tokenizer(std::string_view vocab_json,
                                     std::string_view merges_txt) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(vocab_json);
  } catch (const nlohmann::json::exception& e) {
    throw TokenizerError(std::string("malformed vocab.json: ") + e.what());
  }
  std::vector<Bytes> vocab =
      detail::vocab_from_json(doc, &detail::decode_gpt2_token);
  std::unordered_map<Bytes, TokenId> index;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    index.emplace(vocab[i], static_cast<TokenId>(i));
  }
  std::vector<std::pair<TokenId, TokenId>> pairs;
  std::istringstream lines{std::string(merges_txt)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (lineno == 1 && line.starts_with("#version"))) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos || line.find(' ', space + 1) != std::string::npos) {
      throw TokenizerError("merges.txt line " + std::to_string(lineno) +
                           ": expected \"left right\"");
    }
    auto id_of = [&](const std::string& tok) {
      auto it = index.find(detail::decode_gpt2_token(tok));
      if (it == index.end()) {
        throw TokenizerError("merges.txt line " + std::to_string(lineno) +
                             ": unknown token \"" + tok + "\"");
      }
      return it->second;
    };
    pairs.emplace_back(id_of(line.substr(0, space)), id_of(line.substr(space + 1)));
  }
  return Tokenizer::from_pairs(std::move(vocab), pairs);
}

/// Writes GPT-2 style (vocab.json, merges.txt) contents.
inline std::pair<std::string, std::string> save_gpt2_tokenizer(
    const Tokenizer& t) {
  nlohmann::ordered_json vocab = nlohmann::ordered_json::object();
  for (TokenId id = 0; id < t.size(); ++id) {
    vocab[detail::encode_gpt2_token(t.bytes(id))] = id;
  }
  std::string merges = "#version: 0.2\n";
  for (const MergeRule& m : t.merges()) {
    merges += detail::encode_gpt2_token(t.bytes(m.left)) + " " +
              detail::encode_gpt2_token(t.bytes(m.right)) + "\n";
  }
  return {vocab.dump(), merges};
}

/// Loads a tokenizer from disk. A directory is read as GPT-2 format
/// (vocab.json + merges.txt); a file as the native format.
inline Tokenizer load_tokenizer(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) {
    return load_gpt2_tokenizer(detail::read_file(path / "vocab.json"),
                               detail::read_file(path / "merges.txt"));
  }
  return load_native_tokenizer(detail::read_file(path));
}

}  // namespace tokfl
