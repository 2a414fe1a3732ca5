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

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "handocr/dawg.hpp"
#include "test_support.hpp"

namespace handocr {
namespace {

using oracle::levenshtein;
using oracle::minimal_state_count;
using oracle::random_word;
using oracle::random_words;

std::size_t trie_node_count(const std::vector<std::string>& words) {
  std::set<std::string> prefixes{""};
  for (const auto& w : words)
    for (std::size_t i = 1; i <= w.size(); ++i) prefixes.insert(w.substr(0, i));
  return prefixes.size();
}

TEST(Dawg, SmallDictionaryMembership) {
  const auto d = build_dawg({"cat", "car", "cart"});
  EXPECT_TRUE(d.contains("cat"));
  EXPECT_TRUE(d.contains("car"));
  EXPECT_TRUE(d.contains("cart"));
  EXPECT_FALSE(d.contains("ca"));
  EXPECT_FALSE(d.contains("carts"));
  EXPECT_FALSE(d.contains(""));
  EXPECT_EQ(d.words(), (std::vector<std::string>{"car", "cart", "cat"}));
}

TEST(Dawg, PrefixWords) {
  const auto d = build_dawg({"ton", "to"});
  EXPECT_TRUE(d.contains("to"));
  EXPECT_FALSE(d.contains("t"));
  EXPECT_TRUE(d.contains("ton"));
}

TEST(Dawg, EmptyLanguage) {
  const auto d = build_dawg({});
  EXPECT_FALSE(d.contains(""));
  EXPECT_EQ(d.state_count(), 1u);
  EXPECT_EQ(serialize_dawg(d), "DAWG1 1 0\n0 _\n");
  EXPECT_EQ(parse_dawg("DAWG1 1 0\n0 _\n"), d);
  EXPECT_TRUE(d.near_matches("a").empty());
}

TEST(Dawg, RejectsEmptyWord) {
  EXPECT_THROW(build_dawg({"a", ""}), Error);
  EXPECT_THROW(build_dawg({"a b"}), Error);
}

TEST(Dawg, DuplicatesAndOrderDoNotMatter) {
  EXPECT_EQ(build_dawg({"b", "a", "b", "ab"}), build_dawg({"a", "ab", "b"}));
}

TEST(Dawg, SuffixSharing) {
  const std::vector<std::string> words = {"nation", "station", "ration"};
  const auto d = build_dawg(words);
  EXPECT_LT(d.state_count(), trie_node_count(words));
  EXPECT_EQ(d.state_count(), minimal_state_count(words));
}

TEST(Dawg, MinimalOnRandomLists) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 60; ++trial) {
    const auto words = random_words(rng, 1 + rng() % 100, 8, trial % 2 ? 'e' : 'z');
    ASSERT_EQ(build_dawg(words).state_count(), minimal_state_count(words)) << trial;
  }
  const auto words = random_words(rng, 200, 10, 'z');
  EXPECT_EQ(build_dawg(words).state_count(), minimal_state_count(words));
}

TEST(Dawg, LanguageEqualsInputSet) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const auto words = random_words(rng, 1 + rng() % 1000, 12, 'h');
    const std::set<std::string> expected(words.begin(), words.end());
    const auto d = build_dawg(words);
    const auto got = d.words();
    ASSERT_EQ(std::set<std::string>(got.begin(), got.end()), expected);
    ASSERT_EQ(got.size(), expected.size());
  }
}

TEST(Dawg, ContainsAgreesWithSetOracle) {
  std::mt19937_64 rng(83);
  const auto words = random_words(rng, 300, 6, 'f');
  const std::set<std::string> oracle(words.begin(), words.end());
  const auto d = build_dawg(words);
  for (int q = 0; q < 1000; ++q) {
    const auto query = random_word(rng, 7, 'f');
    ASSERT_EQ(d.contains(query), oracle.count(query) == 1) << query;
  }
}

TEST(Dawg, NearMatchExamples) {
  const auto d = build_dawg({"cat"});
  EXPECT_EQ(d.near_matches("cot"), (std::vector<Dawg::Match>{{"cat", Dawg::EditKind::kSubstitution}}));
  EXPECT_EQ(d.near_matches("cat"), (std::vector<Dawg::Match>{{"cat", Dawg::EditKind::kExact}}));
  EXPECT_EQ(d.near_matches("ca"), (std::vector<Dawg::Match>{{"cat", Dawg::EditKind::kInsertion}}));
  EXPECT_EQ(d.near_matches("cart"), (std::vector<Dawg::Match>{{"cat", Dawg::EditKind::kDeletion}}));
  EXPECT_TRUE(d.near_matches("dog").empty());
  EXPECT_STREQ(edit_kind_name(Dawg::EditKind::kSubstitution), "substitution");
}

TEST(Dawg, NearMatchesAgreeWithBruteForce) {
  std::mt19937_64 rng(89);
  for (int dict = 0; dict < 20; ++dict) {
    const auto words = random_words(rng, 100, 6, 'e');
    const std::set<std::string> unique(words.begin(), words.end());
    const auto d = build_dawg(words);
    for (int q = 0; q < 50; ++q) {
      const auto query = random_word(rng, 7, 'e');
      std::vector<std::string> expected;
      for (const auto& w : unique)
        if (levenshtein(w, query) <= 1) expected.push_back(w);
      std::vector<std::string> got;
      for (const auto& m : d.near_matches(query)) {
        got.push_back(m.word);
        const auto dist = levenshtein(m.word, query);
        if (dist == 0) ASSERT_EQ(m.kind, Dawg::EditKind::kExact);
        else if (m.word.size() == query.size()) ASSERT_EQ(m.kind, Dawg::EditKind::kSubstitution);
        else if (m.word.size() > query.size()) ASSERT_EQ(m.kind, Dawg::EditKind::kInsertion);
        else ASSERT_EQ(m.kind, Dawg::EditKind::kDeletion);
      }
      ASSERT_EQ(got, expected) << query;
    }
  }
}

TEST(Dawg, MultibyteGlyphs) {
  const auto d = build_dawg({"caf\xC3\xA9", "cafe"});
  EXPECT_TRUE(d.contains("caf\xC3\xA9"));
  EXPECT_EQ(d.near_matches("caf\xC3\xA8").size(), 2u);
  EXPECT_EQ(parse_dawg(serialize_dawg(d)), d);
}

TEST(DawgCodec, RoundTrips) {
  const auto a = build_dawg({"a"});
  EXPECT_EQ(serialize_dawg(a), "DAWG1 2 0\n0 _ a:1\n1 F\n");
  EXPECT_EQ(parse_dawg(serialize_dawg(a)), a);
  std::mt19937_64 rng(97);
  const auto words = random_words(rng, 200, 9, 'z');
  const auto d = build_dawg(words);
  const auto text = serialize_dawg(d);
  const auto back = parse_dawg(text);
  EXPECT_EQ(back.words(), d.words());
  EXPECT_EQ(serialize_dawg(back), text);
}

TEST(DawgCodec, RejectsBrokenText) {
  EXPECT_THROW(parse_dawg("DAWG2 1 0\n0 _\n"), Error);
  EXPECT_THROW(parse_dawg("DAWG1 2 0\n0 _ a:5\n1 F\n"), Error);       // dangling
  EXPECT_THROW(parse_dawg("DAWG1 2 0\n0 _ a:1\n1 F a:0\n"), Error);   // cycle
  EXPECT_THROW(parse_dawg("DAWG1 2 0\n0 _ a:1\n1 F\n1 F\n"), Error);  // trailing
  EXPECT_THROW(parse_dawg("DAWG1 2 0\n0 _\n1 F\n"), Error);           // unreachable
  EXPECT_THROW(parse_dawg("DAWG1 2 0\n0 _ b:1 a:1\n1 F\n"), Error);   // unsorted
  EXPECT_THROW(parse_dawg(""), Error);
}

TEST(Wordlist, TrimsAndSkipsComments) {
  EXPECT_EQ(parse_wordlist("# header\n  cat \r\n\n dog\n"), (std::vector<std::string>{"cat", "dog"}));
  EXPECT_THROW(parse_wordlist("two words\n"), Error);
}

}  // namespace
}  // namespace handocr
