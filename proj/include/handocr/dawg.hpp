// Copyright 2026 The handocr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "handocr/error.hpp"
#include "handocr/utf8.hpp"

namespace handocr {

// Minimal deterministic acyclic automaton over Unicode scalars.
class Dawg {
 public:
  struct Edge {
    char32_t glyph;
    std::uint32_t target;
    friend bool operator==(const Edge&, const Edge&) = default;
  };
  struct State {
    bool is_final = false;
    std::vector<Edge> edges;  // sorted by glyph
    friend bool operator==(const State&, const State&) = default;
  };

  enum class EditKind { kExact, kSubstitution, kInsertion, kDeletion };
  struct Match {
    std::string word;
    EditKind kind;
    friend bool operator==(const Match&, const Match&) = default;
  };

  // The empty language: a lone non-final root.
  Dawg() : states_(1), root_(0) {}

  Dawg(std::vector<State> states, std::uint32_t root) : states_(std::move(states)), root_(root) { validate(); }

  std::size_t state_count() const { return states_.size(); }
  std::uint32_t root() const { return root_; }
  const std::vector<State>& states() const { return states_; }

  bool contains(std::string_view word) const {
    const auto cps = utf8::decode(word);
    if (!cps || cps->empty()) return false;
    std::uint32_t s = root_;
    for (char32_t c : *cps) {
      const auto next = step(s, c);
      if (!next) return false;
      s = *next;
    }
    return states_[s].is_final;
  }

  // Every accepted word in lexicographic (code point) order.
  std::vector<std::string> words() const {
    std::vector<std::string> out;
    std::u32string prefix;
    enumerate(root_, prefix, out);
    return out;
  }

  // Accepted words within Levenshtein distance 1 of `word`, lexicographic.
  std::vector<Match> near_matches(std::string_view word) const {
    const auto query = utf8::decode_or_throw(word);
    std::vector<Match> out;
    std::vector<int> row(query.size() + 1);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = static_cast<int>(i);
    std::u32string prefix;
    search(root_, query, row, prefix, out);
    return out;
  }

  friend bool operator==(const Dawg& a, const Dawg& b) { return a.root_ == b.root_ && a.states_ == b.states_; }

 private:
  std::optional<std::uint32_t> step(std::uint32_t s, char32_t c) const {
    const auto& edges = states_[s].edges;
    auto it = std::lower_bound(edges.begin(), edges.end(), c,
                               [](const Edge& e, char32_t g) { return e.glyph < g; });
    if (it == edges.end() || it->glyph != c) return std::nullopt;
    return it->target;
  }

  void enumerate(std::uint32_t s, std::u32string& prefix, std::vector<std::string>& out) const {
    if (states_[s].is_final) out.push_back(utf8::encode(prefix));
    for (const auto& e : states_[s].edges) {
      prefix.push_back(e.glyph);
      enumerate(e.target, prefix, out);
      prefix.pop_back();
    }
  }

  // Depth-first walk carrying one row of the edit-distance table; branches
  // whose row minimum exceeds 1 cannot recover and are cut.
  void search(std::uint32_t s, const std::u32string& query, const std::vector<int>& row, std::u32string& prefix,
              std::vector<Match>& out) const {
    if (states_[s].is_final && row.back() <= 1) {
      EditKind kind = EditKind::kExact;
      if (row.back() == 1) {
        if (prefix.size() == query.size()) kind = EditKind::kSubstitution;
        else if (prefix.size() > query.size()) kind = EditKind::kInsertion;
        else kind = EditKind::kDeletion;
      }
      out.push_back({utf8::encode(prefix), kind});
    }
    std::vector<int> next(row.size());
    for (const auto& e : states_[s].edges) {
      next[0] = row[0] + 1;
      int best = next[0];
      for (std::size_t i = 1; i < row.size(); ++i) {
        const int sub = row[i - 1] + (query[i - 1] == e.glyph ? 0 : 1);
        next[i] = std::min({sub, row[i] + 1, next[i - 1] + 1});
        best = std::min(best, next[i]);
      }
      if (best > 1) continue;
      prefix.push_back(e.glyph);
      search(e.target, query, next, prefix, out);
      prefix.pop_back();
    }
  }

  // Structural checks run on every construction: dense ids, resolvable and
  // sorted unique edges, reachability from the root, no cycles.
  void validate() const {
    const auto n = states_.size();
    if (n == 0 || root_ >= n) throw Error("dawg: root out of range");
    for (std::size_t i = 0; i < n; ++i) {
      const auto& edges = states_[i].edges;
      for (std::size_t k = 0; k < edges.size(); ++k) {
        if (edges[k].target >= n) throw Error("dawg: dangling edge target in state " + std::to_string(i));
        if (k > 0 && edges[k - 1].glyph >= edges[k].glyph)
          throw Error("dawg: edges of state " + std::to_string(i) + " unsorted or duplicated");
      }
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<char> mark(n, 0);
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{root_, 0}};
    mark[root_] = 1;
    while (!stack.empty()) {
      auto& [s, k] = stack.back();
      if (k == states_[s].edges.size()) {
        mark[s] = 2;
        stack.pop_back();
        continue;
      }
      const auto t = states_[s].edges[k++].target;
      if (mark[t] == 1) throw Error("dawg: cycle detected");
      if (mark[t] == 0) {
        mark[t] = 1;
        stack.emplace_back(t, 0);
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (mark[i] != 2) throw Error("dawg: state " + std::to_string(i) + " unreachable from root");
  }

  std::vector<State> states_;
  std::uint32_t root_;
};

inline const char* edit_kind_name(Dawg::EditKind k) {
  switch (k) {
    case Dawg::EditKind::kExact: return "exact";
    case Dawg::EditKind::kSubstitution: return "substitution";
    case Dawg::EditKind::kInsertion: return "insertion";
    case Dawg::EditKind::kDeletion: return "deletion";
  }
  return "?";
}

// Incremental construction over the sorted, deduplicated word list, sharing
// suffixes through a registry of state signatures. States are renumbered in
// depth-first preorder (edges by glyph) so equal languages give equal output.
inline Dawg build_dawg(std::vector<std::string> words) {
  std::vector<std::u32string> list;
  list.reserve(words.size());
  for (const auto& w : words) {
    if (w.empty()) throw Error("dawg: empty word in list");
    auto cps = utf8::decode_or_throw(w);
    if (cps.find_first_of(U" \t\r\n") != std::u32string::npos)
      throw Error("dawg: whitespace inside word '" + w + "'");
    list.push_back(std::move(cps));
  }
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());

  using Signature = std::pair<bool, std::vector<Dawg::Edge>>;
  struct SigLess {
    bool operator()(const Signature& a, const Signature& b) const {
      if (a.first != b.first) return a.first < b.first;
      return std::lexicographical_compare(
          a.second.begin(), a.second.end(), b.second.begin(), b.second.end(),
          [](const Dawg::Edge& x, const Dawg::Edge& y) {
            return x.glyph != y.glyph ? x.glyph < y.glyph : x.target < y.target;
          });
    }
  };
  std::vector<Dawg::State> pool(1);
  std::map<Signature, std::uint32_t, SigLess> registry;
  // Path of the previous word: path[i] is the state reached after i glyphs.
  std::vector<std::uint32_t> path{0};

  auto minimize_to = [&](std::size_t depth) {
    while (path.size() > depth + 1) {
      const auto child = path.back();
      path.pop_back();
      Signature sig{pool[child].is_final, pool[child].edges};
      auto [it, inserted] = registry.emplace(std::move(sig), child);
      if (!inserted) pool[path.back()].edges.back().target = it->second;
    }
  };

  const std::u32string* prev = nullptr;
  for (const auto& word : list) {
    std::size_t common = 0;
    if (prev)
      while (common < prev->size() && common < word.size() && (*prev)[common] == word[common]) ++common;
    minimize_to(common);
    for (std::size_t i = common; i < word.size(); ++i) {
      const auto id = static_cast<std::uint32_t>(pool.size());
      pool.emplace_back();
      pool[path.back()].edges.push_back({word[i], id});
      path.push_back(id);
    }
    pool[path.back()].is_final = true;
    prev = &word;
  }
  minimize_to(0);

  std::vector<std::uint32_t> renumber(pool.size(), UINT32_MAX);
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    if (renumber[s] != UINT32_MAX) continue;
    renumber[s] = static_cast<std::uint32_t>(order.size());
    order.push_back(s);
    const auto& edges = pool[s].edges;
    for (auto it = edges.rbegin(); it != edges.rend(); ++it)
      if (renumber[it->target] == UINT32_MAX) stack.push_back(it->target);
  }
  std::vector<Dawg::State> states(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    states[i].is_final = pool[order[i]].is_final;
    for (const auto& e : pool[order[i]].edges) states[i].edges.push_back({e.glyph, renumber[e.target]});
  }
  return Dawg(std::move(states), 0);
}

// Canonical text form: `DAWG1 <states> <root>` then one line per state,
// `<id> <F|_> <glyph>:<target> ...`.
inline std::string serialize_dawg(const Dawg& d) {
  std::string out = "DAWG1 " + std::to_string(d.state_count()) + " " + std::to_string(d.root()) + "\n";
  const auto& states = d.states();
  for (std::size_t i = 0; i < states.size(); ++i) {
    out += std::to_string(i);
    out += states[i].is_final ? " F" : " _";
    for (const auto& e : states[i].edges) {
      out += ' ';
      utf8::append(out, e.glyph);
      out += ':' + std::to_string(e.target);
    }
    out += '\n';
  }
  return out;
}

inline Dawg parse_dawg(std::string_view text) {
  auto next_line = [&, pos = std::size_t{0}]() mutable -> std::optional<std::string_view> {
    if (pos >= text.size()) return std::nullopt;
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    return line;
  };
  auto to_u32 = [](std::string_view s, std::uint32_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc() && p == s.data() + s.size();
  };
  auto split = [](std::string_view line) {
    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (start <= line.size()) {
      auto sp = line.find(' ', start);
      if (sp == std::string_view::npos) sp = line.size();
      f.push_back(line.substr(start, sp - start));
      start = sp + 1;
    }
    return f;
  };

  const auto header = next_line();
  if (!header) throw Error("dawg: empty input");
  const auto h = split(*header);
  if (h.empty() || h[0] != "DAWG1") throw Error("dawg: version mismatch (expected DAWG1)");
  std::uint32_t count = 0, root = 0;
  if (h.size() != 3 || !to_u32(h[1], count) || !to_u32(h[2], root) || count == 0)
    throw Error("dawg: malformed header");

  std::vector<Dawg::State> states(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto line = next_line();
    const std::string where = " (line " + std::to_string(i + 2) + ")";
    if (!line) throw Error("dawg: truncated state list" + where);
    const auto f = split(*line);
    std::uint32_t id = 0;
    if (f.size() < 2 || !to_u32(f[0], id) || id != i) throw Error("dawg: bad state id" + where);
    if (f[1] != "F" && f[1] != "_") throw Error("dawg: bad final flag" + where);
    states[i].is_final = f[1] == "F";
    for (std::size_t k = 2; k < f.size(); ++k) {
      const auto colon = f[k].rfind(':');
      std::uint32_t target = 0;
      if (colon == std::string_view::npos || !to_u32(f[k].substr(colon + 1), target))
        throw Error("dawg: bad edge" + where);
      const auto glyph = f[k].substr(0, colon);
      std::size_t p = 0;
      const auto cp = utf8::decode_one(glyph, p);
      if (!cp || p != glyph.size()) throw Error("dawg: edge label is not one character" + where);
      if (target >= count) throw Error("dawg: dangling edge target" + where);
      states[i].edges.push_back({*cp, target});
    }
  }
  while (auto extra = next_line())
    if (!extra->empty()) throw Error("dawg: trailing data after state list");
  return Dawg(std::move(states), root);
}

// Wordlist files: UTF-8, one word per line; blank lines and lines starting
// with '#' are ignored, surrounding whitespace trimmed.
inline std::vector<std::string> parse_wordlist(std::string_view text) {
  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (line.front() == '#') continue;
    if (line.find_first_of(" \t") != std::string_view::npos)
      throw Error("wordlist: whitespace inside word '" + std::string(line) + "'");
    words.emplace_back(line);
  }
  return words;
}

}  // namespace handocr
