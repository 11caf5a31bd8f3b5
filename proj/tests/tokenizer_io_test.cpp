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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "tokfl/tokfl.hpp"

namespace tokfl {
namespace {

namespace fs = std::filesystem;

void expect_same(const Tokenizer& x, const Tokenizer& y) {
  EXPECT_EQ(x.vocab(), y.vocab());
  ASSERT_EQ(x.merges().size(), y.merges().size());
  for (std::size_t i = 0; i < x.merges().size(); ++i) {
    EXPECT_EQ(x.merges()[i].left, y.merges()[i].left);
    EXPECT_EQ(x.merges()[i].right, y.merges()[i].right);
    EXPECT_EQ(x.merges()[i].merged, y.merges()[i].merged);
  }
}

TEST(NativeFormat, DataFilesMatchFixtures) {
  expect_same(load_tokenizer(testing::data_dir() / "toy1.json"),
              testing::make_toy1());
  expect_same(load_tokenizer(testing::data_dir() / "toy2.json"),
              testing::make_toy2());
  expect_same(load_tokenizer(testing::data_dir() / "toy1_bytes.json"),
              testing::make_toy1_bytes());
}

TEST(NativeFormat, RoundTrip) {
  for (const Tokenizer& t : {testing::make_toy1(), testing::make_toy2(),
                             Tokenizer::byte_identity()}) {
    expect_same(load_native_tokenizer(save_native_tokenizer(t)), t);
  }
}

TEST(NativeFormat, ByteIdentity) {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["merges"] = nlohmann::json::array();
  for (int b = 0; b < 256; ++b) {
    doc["vocab"][escape_bytes(Bytes(1, static_cast<char>(b)))] = b;
  }
  const Tokenizer t = load_native_tokenizer(doc.dump());
  EXPECT_TRUE(t.byte_base());
  EXPECT_EQ(t.size(), 256u);
  EXPECT_TRUE(t.merges().empty());
}

TEST(NativeFormat, OutputMustBeConcatenation) {
  const char* text = R"({"version": 1,
    "vocab": {"a": 0, "b": 1, "aa": 2, "ab": 3},
    "merges": [["a", "a"], ["aa", "a", "ab"]]})";
  try {
    load_native_tokenizer(text);
    FAIL();
  } catch (const TokenizerError& e) {
    EXPECT_NE(std::string(e.what()).find("is not"), std::string::npos)
        << e.what();
  }
}

TEST(NativeFormat, Errors) {
  const char* bad[] = {
      "not json",
      R"({"version": 2, "vocab": [], "merges": []})",
      R"({"version": 1, "merges": []})",
      R"({"version": 1, "vocab": ["a"], "merges": []})",
      R"({"version": 1, "vocab": {"a": 0, "\\x61": 1}, "merges": []})",
      R"({"version": 1, "vocab": {"a": 0}, "merges": [["a", "z"]]})",
      R"({"version": 1, "vocab": {"a": 0, "b": 2}, "merges": []})",
      R"({"version": 1, "vocab": {"a": 0, "b": 0}, "merges": []})",
      R"({"version": 1, "vocab": {"\\xZZ": 0}, "merges": []})",
      R"({"version": 1, "vocab": {"a": 0}, "merges": [["a"]]})",
      R"({"version": 1, "vocab": {"a": 0, "aa": 1}, "merges": [["a", "a"], ["a", "a"]]})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(load_native_tokenizer(text), Error) << text;
  }
}

TEST(Gpt2Format, ByteTable) {
  const auto& table = gpt2_byte_to_codepoint();
  EXPECT_EQ(table['!'], U'!');
  EXPECT_EQ(table[' '], U'Ġ');  // the familiar "G with dot"
  EXPECT_EQ(table['\n'], U'Ċ');
  std::set<char32_t> distinct(table.begin(), table.end());
  EXPECT_EQ(distinct.size(), 256u);
}

TEST(Gpt2Format, RoundTripSyntheticFiles) {
  const Tokenizer t = Tokenizer::from_pairs(
      [] {
        std::vector<Bytes> v;
        for (int b = 0; b < 256; ++b) v.emplace_back(1, static_cast<char>(b));
        for (const char* s : {" t", " th", "he", " the", "\xE4\xBD"}) {
          v.emplace_back(s);
        }
        return v;
      }(),
      {{' ', 't'}, {256, 'h'}, {'h', 'e'}, {257, 'e'}, {0xE4, 0xBD}});
  const auto [vocab_json, merges_txt] = save_gpt2_tokenizer(t);
  EXPECT_TRUE(merges_txt.starts_with("#version"));
  EXPECT_NE(merges_txt.find("\nĠ t\n"), std::string::npos);
  expect_same(load_gpt2_tokenizer(vocab_json, merges_txt), t);

  const fs::path dir = fs::temp_directory_path() / "tokfl_gpt2_test";
  fs::create_directories(dir);
  std::ofstream(dir / "vocab.json") << vocab_json;
  std::ofstream(dir / "merges.txt") << merges_txt;
  const Tokenizer loaded = load_tokenizer(dir);
  expect_same(loaded, t);
  EXPECT_EQ(tokenize(loaded, " the"), TokenSequence{259});
  fs::remove_all(dir);
}

TEST(Gpt2Format, Errors) {
  EXPECT_THROW(load_gpt2_tokenizer("[]", ""), Error);
  EXPECT_THROW(load_gpt2_tokenizer(R"({"a": 0})", "a b\n"), Error);
  EXPECT_THROW(load_tokenizer("/nonexistent/tokenizer.json"), Error);
}

}  // namespace
}  // namespace tokfl
