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

// tokfl: command-line front end.
//
// Exit codes: 0 accept/pass, 1 reject/fail, 2 usage or data error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "tokfl/tokfl.hpp"

namespace {

using tokfl::Bytes;
using tokfl::TokenId;
using tokfl::TokenSequence;
using json = nlohmann::ordered_json;

constexpr int kAccept = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;
constexpr const char* kSchema = "tokfl-cli/1";

// Raised for bad configuration or input; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string grammar_path;
  std::string tokenizer_path;
  std::string alphabet = "unicode";
  std::optional<TokenId> bos_id;
  bool structured = false;
  std::uint64_t seed = 0;
  std::size_t limit = 100;
  std::string bytes_path;
  std::string input;
  bool have_input = false;

  std::optional<tokfl::Grammar> grammar;
  std::shared_ptr<const tokfl::Tokenizer> tokenizer;
};

// Loaded before any subcommand runs so bad paths fail fast with exit 2.
void load_artifacts(RunConfig& cfg) {
  if (!cfg.grammar_path.empty()) {
    const auto alphabet = cfg.alphabet == "byte" ? tokfl::Alphabet::byte
                                                 : tokfl::Alphabet::unicode;
    cfg.grammar = tokfl::parse_grammar(
        tokfl::detail::read_file(cfg.grammar_path), alphabet);
  }
  if (!cfg.tokenizer_path.empty()) {
    cfg.tokenizer = std::make_shared<const tokfl::Tokenizer>(
        tokfl::load_tokenizer(cfg.tokenizer_path));
  }
}

const tokfl::Grammar& need_grammar(const RunConfig& cfg) {
  if (!cfg.grammar) throw UsageError("--grammar is required");
  return *cfg.grammar;
}

const tokfl::Tokenizer& need_tokenizer(const RunConfig& cfg) {
  if (!cfg.tokenizer) throw UsageError("--tokenizer is required");
  return *cfg.tokenizer;
}

// Byte-level grammar; unicode grammars are UTF-8 encoded first.
tokfl::Grammar byte_grammar(const RunConfig& cfg) {
  const tokfl::Grammar& g = need_grammar(cfg);
  if (g.alphabet() == tokfl::Alphabet::byte) return g;
  return tokfl::encode_grammar(tokfl::EncodingScheme::utf8(), g);
}

// Input text: --bytes file verbatim, else the positional argument, else
// stdin minus one trailing newline. Text input must be valid UTF-8.
Bytes read_input(const RunConfig& cfg) {
  if (!cfg.bytes_path.empty()) return tokfl::detail::read_file(cfg.bytes_path);
  Bytes text;
  if (cfg.have_input) {
    text = cfg.input;
  } else {
    text.assign(std::istreambuf_iterator<char>(std::cin),
                std::istreambuf_iterator<char>());
    if (!text.empty() && text.back() == '\n') text.pop_back();
    if (!text.empty() && text.back() == '\r') text.pop_back();
  }
  if (!tokfl::decode_utf8(text)) {
    throw UsageError("input is not valid UTF-8 (use --bytes for binary input)");
  }
  return text;
}

TokenSequence parse_ids(const std::string& line) {
  std::istringstream in(line);
  TokenSequence out;
  std::string word;
  while (in >> word) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(word, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != word.size() || word[0] == '-' || v > UINT32_MAX) {
      throw UsageError("bad token id \"" + word + "\"");
    }
    out.push_back(static_cast<TokenId>(v));
  }
  return out;
}

// Token ids from the input; a leading --bos-id is dropped.
TokenSequence read_ids(const RunConfig& cfg) {
  Bytes text = cfg.have_input ? cfg.input : read_input(cfg);
  TokenSequence ids = parse_ids(text);
  if (cfg.bos_id && !ids.empty() && ids.front() == *cfg.bos_id) {
    ids.erase(ids.begin());
  }
  return ids;
}

std::string token_text(const tokfl::Tokenizer& t, TokenId id) {
  return tokfl::escape_bytes(t.bytes(id));
}

std::string spell(const tokfl::Tokenizer& t, std::span<const TokenId> ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += token_text(t, ids[i]);
  }
  return out;
}

std::string describe(const tokfl::Tokenizer& t,
                     const tokfl::Classification& c) {
  std::string out(tokfl::to_string(c.kind));
  if (c.mergeable_at) out += " at " + std::to_string(*c.mergeable_at);
  if (c.proper) out += "; proper = " + spell(t, *c.proper);
  return out;
}

json classification_json(const tokfl::Classification& c) {
  json j;
  j["kind"] = tokfl::to_string(c.kind);
  if (c.mergeable_at) j["mergeable_at"] = *c.mergeable_at;
  if (c.proper) j["proper"] = *c.proper;
  return j;
}

json envelope(const char* command) {
  json j;
  j["schema"] = kSchema;
  j["command"] = command;
  return j;
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

int cmd_tokenize(const RunConfig& cfg) {
  const tokfl::Tokenizer& t = need_tokenizer(cfg);
  const TokenSequence ids = tokfl::tokenize(t, read_input(cfg));
  if (cfg.structured) {
    json j = envelope("tokenize");
    j["ids"] = ids;
    emit(j);
  } else {
    std::cout << tokfl::format_ids(ids) << '\n';
  }
  return kAccept;
}

int cmd_detokenize(const RunConfig& cfg) {
  const tokfl::Tokenizer& t = need_tokenizer(cfg);
  const Bytes bytes = tokfl::detokenize(t, read_ids(cfg));
  if (cfg.structured) {
    json j = envelope("detokenize");
    j["bytes"] = tokfl::escape_bytes(bytes);
    j["utf8"] = tokfl::decode_utf8(bytes).has_value();
    emit(j);
  } else {
    std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    std::cout << '\n';
  }
  return kAccept;
}

int cmd_classify(const RunConfig& cfg) {
  const tokfl::Tokenizer& t = need_tokenizer(cfg);
  const TokenSequence ids = read_ids(cfg);
  const tokfl::Classification c = tokfl::classify(t, ids);
  if (cfg.structured) {
    json j = envelope("classify");
    j["ids"] = ids;
    j["classification"] = classification_json(c);
    emit(j);
  } else {
    std::cout << describe(t, c) << '\n';
  }
  return kAccept;
}

int cmd_enumerate(const RunConfig& cfg) {
  const tokfl::Tokenizer& t = need_tokenizer(cfg);
  const Bytes s = read_input(cfg);
  std::uint64_t total = 0;
  try {
    total = tokfl::count_tokenizations(t, s);
  } catch (const tokfl::CountOverflowError& e) {
    throw UsageError(e.what());
  }
  json rows = json::array();
  auto stream = tokfl::enumerate_tokenizations(t, s, cfg.limit);
  while (auto seg = stream.next()) {
    const tokfl::Classification c = tokfl::classify(t, *seg);
    if (cfg.structured) {
      json row;
      row["ids"] = *seg;
      row["classification"] = classification_json(c);
      rows.push_back(std::move(row));
    } else {
      std::cout << '[' << tokfl::format_ids(*seg) << "]\t[" << spell(t, *seg)
                << "]\t" << describe(t, c) << '\n';
    }
  }
  if (cfg.structured) {
    json j = envelope("enumerate");
    j["rows"] = std::move(rows);
    j["total"] = total;
    emit(j);
  } else {
    std::cout << "total: " << total << '\n';
  }
  return kAccept;
}

int cmd_recognize(const RunConfig& cfg, const std::string& mode) {
  std::optional<std::size_t> dead_byte, dead_token;
  std::string reason;
  bool accepted = false;
  if (mode == "chars") {
    const Bytes w = read_input(cfg);
    auto session = tokfl::open_session(byte_grammar(cfg));
    session.feed_all(tokfl::bytes_to_terminals(w));
    accepted = session.accepts();
    dead_byte = session.dead_at();
    if (!accepted) reason = dead_byte ? "dead prefix" : "incomplete";
  } else {
    need_tokenizer(cfg);
    auto rec = tokfl::TokenRecognizer::build(byte_grammar(cfg), cfg.tokenizer);
    const TokenSequence ids = read_ids(cfg);
    rec.tokenizer().check(ids);
    auto session = rec.open();
    for (TokenId id : ids) {
      if (!session.feed_token(id)) break;
    }
    accepted = session.accepts();
    dead_byte = session.dead_at_byte();
    dead_token = session.dead_at_token();
    if (!accepted) {
      reason = dead_byte ? "dead prefix" : "incomplete";
    } else if (mode == "proper") {
      const tokfl::Classification c = tokfl::classify(rec.tokenizer(), ids);
      if (c.kind != tokfl::TokenizationKind::proper) {
        accepted = false;
        reason = "improper: " + std::string(tokfl::to_string(c.kind));
      }
    }
  }
  if (cfg.structured) {
    json j = envelope("recognize");
    j["mode"] = mode;
    j["accepted"] = accepted;
    if (!accepted) {
      j["reason"] = reason;
      j["failing_byte"] = dead_byte ? json(*dead_byte) : json(nullptr);
      if (dead_token) j["failing_token"] = *dead_token;
    }
    emit(j);
  } else if (accepted) {
    std::cout << "accept\n";
  } else {
    std::cout << "reject: " << reason;
    if (dead_byte) std::cout << " at byte " << *dead_byte;
    std::cout << '\n';
  }
  return accepted ? kAccept : kReject;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

int cmd_transform(const RunConfig& cfg, const std::string& op,
                  const std::string& out_path) {
  const tokfl::Grammar& g = need_grammar(cfg);
  tokfl::Grammar result =
      op == "utf8" ? tokfl::encode_grammar(tokfl::EncodingScheme::utf8(), g)
                   : tokfl::add_leading_space(g);
  write_output(out_path, tokfl::write_grammar(result));
  return kAccept;
}

int cmd_train(const std::vector<std::string>& corpus_paths, std::size_t merges,
              const std::string& out_path) {
  std::vector<Bytes> corpus;
  auto add_lines = [&](std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) corpus.push_back(line);
    }
  };
  if (corpus_paths.empty()) {
    add_lines(std::cin);
  } else {
    for (const auto& p : corpus_paths) {
      std::istringstream in(tokfl::detail::read_file(p));
      add_lines(in);
    }
  }
  const tokfl::Tokenizer t = tokfl::train(corpus, merges);
  write_output(out_path, tokfl::save_native_tokenizer(t) + "\n");
  std::cerr << "learned " << t.merges().size() << " merges\n";
  return kAccept;
}

int cmd_sample(const RunConfig& cfg, std::size_t count, std::size_t budget) {
  const tokfl::Grammar g = tokfl::reduce_grammar(need_grammar(cfg));
  if (g.known_empty()) throw UsageError("grammar generates no strings");
  auto chart = tokfl::ChartRecognizer::compile(g);
  constexpr std::size_t kAttempts = 1000;
  std::uint64_t seed = cfg.seed;
  json samples = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    std::optional<tokfl::TerminalString> w;
    for (std::size_t k = 0; k < kAttempts && !w; ++k) {
      w = tokfl::sample(g, budget, seed++);
    }
    if (!w) throw UsageError("sampling budget exhausted");
    if (!chart->recognize(*w)) {
      throw tokfl::Error("internal: sample rejected by recognizer");
    }
    Bytes text;
    if (g.alphabet() == tokfl::Alphabet::byte) {
      text = tokfl::terminals_to_bytes(*w);
    } else {
      for (tokfl::Terminal c : *w) tokfl::append_utf8(text, c);
    }
    if (cfg.structured) {
      samples.push_back(tokfl::escape_bytes(text));
    } else {
      std::cout << text << '\n';
    }
  }
  if (cfg.structured) {
    json j = envelope("sample");
    j["samples"] = std::move(samples);
    emit(j);
  }
  return kAccept;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite,
               std::size_t budget, std::size_t max_len) {
  tokfl::SuiteReport r;
  if (suite == "homomorphism") {
    r = tokfl::verify_homomorphism(need_tokenizer(cfg), budget, cfg.seed);
  } else if (suite == "equivalence") {
    need_tokenizer(cfg);
    auto rec = tokfl::TokenRecognizer::build(byte_grammar(cfg), cfg.tokenizer);
    tokfl::EquivalenceOptions opt;
    opt.max_tokens = cfg.limit < opt.max_tokens ? cfg.limit : opt.max_tokens;
    opt.max_string = max_len;
    r = tokfl::verify_equivalence(rec, opt);
  } else {
    r = tokfl::verify_partition(need_tokenizer(cfg), max_len, budget);
  }
  if (cfg.structured) {
    json j = envelope("verify");
    j["suite"] = r.suite;
    j["passed"] = r.passed;
    j["checked"] = r.checked;
    j["notes"] = r.notes;
    if (r.counterexample) j["counterexample"] = *r.counterexample;
    emit(j);
  } else {
    std::cout << r.suite << ": " << (r.passed ? "pass" : "FAIL") << '\n';
    for (const auto& n : r.notes) std::cout << "  " << n << '\n';
    if (r.counterexample) {
      std::cout << "  counterexample: " << *r.counterexample << '\n';
    }
  }
  return r.passed ? kAccept : kReject;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tokfl: formal-language tools for BPE token sequences"};
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig cfg;
  std::optional<std::uint32_t> bos;
  app.add_option("--grammar", cfg.grammar_path, "grammar file")
      ->check(CLI::ExistingFile);
  app.add_option("--tokenizer", cfg.tokenizer_path,
                 "tokenizer JSON file, or GPT-2 directory")
      ->check(CLI::ExistingPath);
  app.add_option("--alphabet", cfg.alphabet, "grammar alphabet")
      ->check(CLI::IsMember({"unicode", "byte"}));
  app.add_option("--bos-id", bos, "token id dropped from the start of input");
  app.add_flag("--structured", cfg.structured, "JSON output");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--limit", cfg.limit, "enumeration cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--bytes", cfg.bytes_path, "read input bytes from a file")
      ->check(CLI::ExistingFile);

  auto add_input = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", cfg.input, what);
  };

  auto* tok = app.add_subcommand("tokenize", "text -> proper token ids");
  add_input(tok, "text (default: stdin)");
  auto* detok = app.add_subcommand("detokenize", "token ids -> bytes");
  add_input(detok, "space-separated ids (default: stdin)");
  auto* cls = app.add_subcommand("classify", "classify a token sequence");
  add_input(cls, "space-separated ids (default: stdin)");
  auto* enu = app.add_subcommand("enumerate", "list every tokenization");
  add_input(enu, "text (default: stdin)");

  std::string mode = "chars";
  auto* rec = app.add_subcommand("recognize", "decide membership");
  rec->add_option("--mode", mode, "input kind")
      ->check(CLI::IsMember({"chars", "tokens", "proper"}));
  add_input(rec, "text or ids (default: stdin)");

  std::string op;
  std::string out_path;
  auto* tr = app.add_subcommand("transform", "rewrite a grammar");
  tr->add_option("op", op, "utf8 | leading-space")
      ->required()
      ->check(CLI::IsMember({"utf8", "leading-space"}));
  tr->add_option("-o,--output", out_path, "output file (default: stdout)");

  std::size_t merges = 0;
  std::vector<std::string> corpus;
  auto* trn = app.add_subcommand("train", "learn BPE merges from lines");
  trn->add_option("--merges", merges, "number of merges")->required();
  trn->add_option("-o,--output", out_path, "output file (default: stdout)");
  trn->add_option("corpus", corpus, "corpus files (default: stdin)")
      ->check(CLI::ExistingFile);

  std::size_t count = 1;
  std::size_t budget = 10000;
  auto* smp = app.add_subcommand("sample", "draw strings from the grammar");
  smp->add_option("--count", count, "number of samples");
  smp->add_option("--budget", budget, "expansions per attempt")
      ->check(CLI::PositiveNumber);

  std::string suite;
  std::size_t max_len = 8;
  auto* ver = app.add_subcommand("verify", "run a property suite");
  ver->add_option("suite", suite, "homomorphism | equivalence | partition")
      ->required()
      ->check(CLI::IsMember({"homomorphism", "equivalence", "partition"}));
  ver->add_option("--budget", budget, "random cases / string cap")
      ->check(CLI::PositiveNumber);
  ver->add_option("--max-len", max_len, "exhaustive string length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (bos) cfg.bos_id = *bos;
    for (CLI::App* sub : {tok, detok, cls, enu, rec}) {
      if (sub->parsed() && sub->count("input") > 0) cfg.have_input = true;
    }
    load_artifacts(cfg);
    if (tok->parsed()) return cmd_tokenize(cfg);
    if (detok->parsed()) return cmd_detokenize(cfg);
    if (cls->parsed()) return cmd_classify(cfg);
    if (enu->parsed()) return cmd_enumerate(cfg);
    if (rec->parsed()) return cmd_recognize(cfg, mode);
    if (tr->parsed()) return cmd_transform(cfg, op, out_path);
    if (trn->parsed()) return cmd_train(corpus, merges, out_path);
    if (smp->parsed()) return cmd_sample(cfg, count, budget);
    if (ver->parsed()) return cmd_verify(cfg, suite, budget, max_len);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
