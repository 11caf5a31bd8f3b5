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

// Context-free grammars over characters or bytes.
//
// Concrete syntax (UTF-8 text):
//
//   # comment
//   Dyck -> "" | "[" Dyck "]" Dyck ;
//
// One rule is `Name -> alt | alt | ... ;` and may span lines. An alternative
// is a whitespace-separated sequence of nonterminal names and double-quoted
// literals. A literal of several characters stands for that many terminals;
// `""` is the empty alternative. The head of the first rule is the start
// symbol. Literal escapes: \" \\ \n \r \t \xHH, and in unicode mode also
// \uHHHH and \UHHHHHHHH.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tokfl/common.hpp"

namespace tokfl {

enum class Alphabet { unicode, byte };

inline std::string_view to_string(Alphabet a) {
  return a == Alphabet::byte ? "byte" : "unicode";
}

struct Symbol {
  enum class Kind : std::uint8_t { terminal, nonterminal };

  Kind kind;
  std::uint32_t value;  // terminal code, or nonterminal index

  static constexpr Symbol term(Terminal t) { return {Kind::terminal, t}; }
  static constexpr Symbol nonterm(std::uint32_t n) {
    return {Kind::nonterminal, n};
  }
  constexpr bool is_terminal() const { return kind == Kind::terminal; }

  friend constexpr auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct Production {
  std::uint32_t head;
  std::vector<Symbol> body;

  friend auto operator<=>(const Production&, const Production&) = default;
};

/// An immutable context-free grammar. Construction validates the symbol
/// invariants and drops duplicate productions (first occurrence wins).
class Grammar {
 public:
  Grammar(Alphabet alphabet, std::vector<std::string> nonterminals,
          std::vector<Production> productions, std::uint32_t start)
      : alphabet_(alphabet),
        names_(std::move(nonterminals)),
        start_(start) {
    if (start_ >= names_.size()) throw Error("start symbol out of range");
    std::set<Production> seen;
    for (auto& p : productions) {
      if (p.head >= names_.size()) throw Error("production head out of range");
      for (const Symbol& s : p.body) {
        if (s.is_terminal()) {
          if (!in_alphabet(s.value)) {
            throw AlphabetError("terminal " + std::to_string(s.value) +
                                " outside the " +
                                std::string(to_string(alphabet_)) +
                                " alphabet");
          }
        } else if (s.value >= names_.size()) {
          throw Error("nonterminal index out of range");
        }
      }
      if (seen.insert(p).second) productions_.push_back(std::move(p));
    }
    by_head_.resize(names_.size());
    for (std::uint32_t i = 0; i < productions_.size(); ++i) {
      by_head_[productions_[i].head].push_back(i);
    }
  }

  /// The canonical grammar of the empty language: a lone start symbol with
  /// no productions. known_empty() is set.
  static Grammar empty_language(Alphabet alphabet, std::string start_name) {
    Grammar g(alphabet, {std::move(start_name)}, {}, 0);
    g.known_empty_ = true;
    return g;
  }

  Alphabet alphabet() const { return alphabet_; }
  std::uint32_t start() const { return start_; }
  std::size_t num_nonterminals() const { return names_.size(); }
  const std::vector<std::string>& nonterminal_names() const { return names_; }
  const std::string& name(std::uint32_t nt) const { return names_.at(nt); }
  const std::vector<Production>& productions() const { return productions_; }

  /// Indices into productions() whose head is `nt`.
  const std::vector<std::uint32_t>& productions_of(std::uint32_t nt) const {
    return by_head_.at(nt);
  }

  std::optional<std::uint32_t> find_nonterminal(std::string_view name) const {
    for (std::uint32_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return i;
    }
    return std::nullopt;
  }

  /// True when reduction proved L(G) empty.
  bool known_empty() const { return known_empty_; }

  bool in_alphabet(Terminal t) const {
    return alphabet_ == Alphabet::byte ? t <= 0xFF : is_unicode_scalar(t);
  }

  void check_terminal(Terminal t) const {
    if (!in_alphabet(t)) {
      throw AlphabetError("terminal " + std::to_string(t) + " outside the " +
                          std::string(to_string(alphabet_)) + " alphabet");
    }
  }

 private:
  Alphabet alphabet_;
  std::vector<std::string> names_;
  std::vector<Production> productions_;
  std::vector<std::vector<std::uint32_t>> by_head_;
  std::uint32_t start_;
  bool known_empty_ = false;
};

namespace detail {

class GrammarLexer {
 public:
  enum class Kind { ident, arrow, pipe, semi, literal, end };

  struct Token {
    Kind kind;
    std::string text;  // identifier name or raw literal contents
    std::size_t line;
    std::size_t column;
  };

  explicit GrammarLexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    const std::size_t line = line_, col = col_;
    if (pos_ >= src_.size()) return {Kind::end, {}, line, col};
    const char c = src_[pos_];
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      advance(2);
      return {Kind::arrow, "->", line, col};
    }
    if (c == '|') {
      advance(1);
      return {Kind::pipe, "|", line, col};
    }
    if (c == ';') {
      advance(1);
      return {Kind::semi, ";", line, col};
    }
    if (c == '"') {
      advance(1);
      std::string raw;
      while (true) {
        if (pos_ >= src_.size() || src_[pos_] == '\n') {
          throw GrammarSyntaxError("unterminated literal", line, col);
        }
        const char d = src_[pos_];
        if (d == '"') {
          advance(1);
          break;
        }
        if (d == '\\' && pos_ + 1 < src_.size()) {
          raw.push_back(d);
          raw.push_back(src_[pos_ + 1]);
          advance(2);
          continue;
        }
        raw.push_back(d);
        advance(1);
      }
      return {Kind::literal, std::move(raw), line, col};
    }
    if (is_ident_start(c)) {
      std::string name;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
        name.push_back(src_[pos_]);
        advance(1);
      }
      return {Kind::ident, std::move(name), line, col};
    }
    throw GrammarSyntaxError(std::string("unexpected character '") + c + "'",
                             line, col);
  }

  static bool is_ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  }
  static bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline std::optional<std::uint32_t> parse_hex(std::string_view s) {
  std::uint32_t v = 0;
  for (char c : s) {
    auto d = hex_digit_value(c);
    if (!d) return std::nullopt;
    v = v * 16 + static_cast<std::uint32_t>(*d);
  }
  return v;
}

/// Expands a raw literal body into terminals.
inline TerminalString decode_literal(const GrammarLexer::Token& tok,
                                     Alphabet alphabet) {
  const std::string& raw = tok.text;
  TerminalString out;
  Bytes pending;  // plain UTF-8 text awaiting decode in unicode mode
  auto fail = [&](const std::string& what) -> void {
    throw GrammarSyntaxError(what, tok.line, tok.column);
  };
  auto flush = [&] {
    if (pending.empty()) return;
    if (alphabet == Alphabet::byte) {
      for (char c : pending) {
        if (static_cast<unsigned char>(c) >= 0x80) {
          fail("non-ASCII character in byte-mode literal (write it as \\xHH)");
        }
        out.push_back(static_cast<unsigned char>(c));
      }
    } else {
      auto cps = decode_utf8(pending);
      if (!cps) fail("literal is not valid UTF-8");
      out.insert(out.end(), cps->begin(), cps->end());
    }
    pending.clear();
  };
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '\\') {
      pending.push_back(raw[i]);
      continue;
    }
    flush();
    const char e = raw[++i];
    switch (e) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'x':
      case 'u':
      case 'U': {
        const std::size_t width = e == 'x' ? 2 : e == 'u' ? 4 : 8;
        if (i + width >= raw.size()) {
          fail(std::string("truncated \\") + e + " escape");
        }
        auto v = parse_hex(std::string_view(raw).substr(i + 1, width));
        if (!v) fail(std::string("bad \\") + e + " escape");
        if (e != 'x' && alphabet == Alphabet::byte) {
          fail(std::string("\\") + e + " escape outside the byte alphabet");
        }
        if (!is_unicode_scalar(*v)) {
          fail("escape is not a Unicode scalar value");
        }
        out.push_back(*v);
        i += width;
        break;
      }
      default:
        fail(std::string("unknown escape \\") + e);
    }
  }
  flush();
  return out;
}

}  // namespace detail

/// Parses grammar source text. Throws GrammarSyntaxError (with position) on
/// malformed input or a nonterminal that is used but never defined.
inline Grammar parse_grammar(std::string_view text, Alphabet alphabet) {
  using detail::GrammarLexer;
  GrammarLexer lex(text);
  std::vector<std::string> names;
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<bool> defined;
  std::vector<GrammarLexer::Token> first_use;  // per nonterminal
  std::vector<Production> productions;

  auto intern = [&](const GrammarLexer::Token& tok) {
    auto [it, inserted] = index.emplace(tok.text, names.size());
    if (inserted) {
      names.push_back(tok.text);
      defined.push_back(false);
      first_use.push_back(tok);
    }
    return it->second;
  };

  GrammarLexer::Token tok = lex.next();
  if (tok.kind == GrammarLexer::Kind::end) {
    throw GrammarSyntaxError("grammar has no rules", tok.line, tok.column);
  }
  while (tok.kind != GrammarLexer::Kind::end) {
    if (tok.kind != GrammarLexer::Kind::ident) {
      throw GrammarSyntaxError("expected a rule name, got '" + tok.text + "'",
                               tok.line, tok.column);
    }
    const std::uint32_t head = intern(tok);
    defined[head] = true;
    tok = lex.next();
    if (tok.kind != GrammarLexer::Kind::arrow) {
      throw GrammarSyntaxError("expected '->'", tok.line, tok.column);
    }
    std::vector<Symbol> body;
    while (true) {
      tok = lex.next();
      switch (tok.kind) {
        case GrammarLexer::Kind::ident:
          body.push_back(Symbol::nonterm(intern(tok)));
          continue;
        case GrammarLexer::Kind::literal:
          for (Terminal t : detail::decode_literal(tok, alphabet)) {
            body.push_back(Symbol::term(t));
          }
          continue;
        case GrammarLexer::Kind::pipe:
          productions.push_back({head, std::move(body)});
          body.clear();
          continue;
        case GrammarLexer::Kind::semi:
          productions.push_back({head, std::move(body)});
          break;
        case GrammarLexer::Kind::arrow:
          throw GrammarSyntaxError("unexpected '->' (missing ';'?)", tok.line,
                                   tok.column);
        case GrammarLexer::Kind::end:
          throw GrammarSyntaxError("expected ';' before end of input",
                                   tok.line, tok.column);
      }
      break;
    }
    tok = lex.next();
  }
  for (std::uint32_t i = 0; i < names.size(); ++i) {
    if (!defined[i]) {
      throw GrammarSyntaxError("undefined nonterminal " + names[i],
                               first_use[i].line, first_use[i].column);
    }
  }
  return Grammar(alphabet, std::move(names), std::move(productions), 0);
}

namespace detail {

inline void append_literal_char(std::string& out, Terminal t,
                                Alphabet alphabet) {
  static constexpr char kHex[] = "0123456789abcdef";
  if (t == '"' || t == '\\') {
    out.push_back('\\');
    out.push_back(static_cast<char>(t));
  } else if (t >= 0x20 && t < 0x7F) {
    out.push_back(static_cast<char>(t));
  } else if (alphabet == Alphabet::byte || t < 0x20 || t == 0x7F) {
    // Control characters in unicode mode also use \xHH (value <= 0x7F).
    out += "\\x";
    out.push_back(kHex[(t >> 4) & 0xF]);
    out.push_back(kHex[t & 0xF]);
  } else {
    append_utf8(out, static_cast<char32_t>(t));
  }
}

}  // namespace detail

/// Serializes a grammar in the syntax accepted by parse_grammar. The start
/// symbol's rule is written first.
inline std::string write_grammar(const Grammar& g) {
  std::vector<std::uint32_t> order;
  order.push_back(g.start());
  for (std::uint32_t i = 0; i < g.num_nonterminals(); ++i) {
    if (i != g.start()) order.push_back(i);
  }
  std::string out;
  for (std::uint32_t nt : order) {
    out += g.name(nt);
    out += " ->";
    const auto& prods = g.productions_of(nt);
    if (prods.empty()) {
      // Only reachable for the empty language; this rule derives nothing.
      out += " " + g.name(nt) + " ;\n";
      continue;
    }
    for (std::size_t k = 0; k < prods.size(); ++k) {
      if (k > 0) out += " |";
      const auto& body = g.productions()[prods[k]].body;
      if (body.empty()) out += " \"\"";
      bool in_literal = false;
      for (const Symbol& s : body) {
        if (s.is_terminal()) {
          if (!in_literal) out += " \"";
          in_literal = true;
          detail::append_literal_char(out, s.value, g.alphabet());
        } else {
          if (in_literal) out += "\"";
          in_literal = false;
          out += " " + g.name(s.value);
        }
      }
      if (in_literal) out += "\"";
    }
    out += " ;\n";
  }
  return out;
}

/// Removes non-generating and unreachable nonterminals. The language is
/// unchanged. When the start symbol derives no terminal string, returns
/// Grammar::empty_language (flagged via known_empty()).
inline Grammar reduce_grammar(const Grammar& g) {
  const std::size_t n = g.num_nonterminals();
  std::vector<bool> generating(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions()) {
      if (generating[p.head]) continue;
      const bool all = std::all_of(p.body.begin(), p.body.end(),
                                   [&](const Symbol& s) {
                                     return s.is_terminal() || generating[s.value];
                                   });
      if (all) {
        generating[p.head] = true;
        changed = true;
      }
    }
  }
  if (!generating[g.start()]) {
    return Grammar::empty_language(g.alphabet(), g.name(g.start()));
  }
  auto usable = [&](const Production& p) {
    return generating[p.head] &&
           std::all_of(p.body.begin(), p.body.end(), [&](const Symbol& s) {
             return s.is_terminal() || generating[s.value];
           });
  };
  std::vector<bool> reachable(n, false);
  std::vector<std::uint32_t> work{g.start()};
  reachable[g.start()] = true;
  while (!work.empty()) {
    const std::uint32_t nt = work.back();
    work.pop_back();
    for (std::uint32_t pi : g.productions_of(nt)) {
      const auto& p = g.productions()[pi];
      if (!usable(p)) continue;
      for (const Symbol& s : p.body) {
        if (!s.is_terminal() && !reachable[s.value]) {
          reachable[s.value] = true;
          work.push_back(s.value);
        }
      }
    }
  }
  std::vector<std::uint32_t> remap(n, UINT32_MAX);
  std::vector<std::string> names;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (reachable[i]) {
      remap[i] = static_cast<std::uint32_t>(names.size());
      names.push_back(g.name(i));
    }
  }
  std::vector<Production> prods;
  for (const auto& p : g.productions()) {
    if (!reachable[p.head] || !usable(p)) continue;
    Production q{remap[p.head], {}};
    for (const Symbol& s : p.body) {
      q.body.push_back(s.is_terminal() ? s : Symbol::nonterm(remap[s.value]));
    }
    prods.push_back(std::move(q));
  }
  return Grammar(g.alphabet(), std::move(names), std::move(prods),
                 remap[g.start()]);
}

/// Grammar for { " " + w : w in L(g) }: a fresh start symbol S' -> " " S.
inline Grammar add_leading_space(const Grammar& g) {
  std::string fresh = g.name(g.start()) + "'";
  while (g.find_nonterminal(fresh)) fresh += "'";
  std::vector<std::string> names = g.nonterminal_names();
  names.push_back(fresh);
  const auto new_start = static_cast<std::uint32_t>(names.size() - 1);
  std::vector<Production> prods = g.productions();
  prods.push_back({new_start, {Symbol::term(0x20), Symbol::nonterm(g.start())}});
  Grammar out(g.alphabet(), std::move(names), std::move(prods), new_start);
  return g.known_empty() ? reduce_grammar(out) : out;
}

}  // namespace tokfl
