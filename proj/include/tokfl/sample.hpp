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

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "tokfl/common.hpp"
#include "tokfl/grammar.hpp"

namespace tokfl {

/// Draws a sentence by random leftmost derivation, choosing uniformly among
/// each nonterminal's productions. Gives up (nullopt) once more than
/// `max_expansions` nonterminals have been rewritten. Deterministic in
/// `seed`. `g` should be reduced; a known-empty grammar yields nullopt.
inline std::optional<TerminalString> sample(const Grammar& g,
                                            std::size_t max_expansions,
                                            std::uint64_t seed) {
  if (g.known_empty() || g.productions_of(g.start()).empty()) {
    return std::nullopt;
  }
  std::mt19937_64 rng(seed);
  TerminalString out;
  std::vector<Symbol> stack{Symbol::nonterm(g.start())};
  std::size_t expansions = 0;
  while (!stack.empty()) {
    const Symbol top = stack.back();
    stack.pop_back();
    if (top.is_terminal()) {
      out.push_back(top.value);
      continue;
    }
    if (++expansions > max_expansions) return std::nullopt;
    const auto& alts = g.productions_of(top.value);
    if (alts.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, alts.size() - 1);
    const auto& body = g.productions()[alts[pick(rng)]].body;
    stack.insert(stack.end(), body.rbegin(), body.rend());
  }
  return out;
}

}  // namespace tokfl
